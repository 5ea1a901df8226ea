"""Inner functions (finite Blaschke products times singular atoms) and kernel-norm probes."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .disk import StolzRegion, geometric_depths, stolz_sample
from .errors import DomainError, SingularityError

# Envelope growth per decade of 1/(1-r) below which a kernel family counts as bounded.
BOUNDED_GROWTH_FACTOR = 1.05
ATOM_HIT_TOL = 1e-15


def _as_complex_tuple(values):
    return tuple(complex(v) for v in values)


@dataclass(frozen=True)
class InnerFunction:
    """``phase * prod_j b_{a_j}(z) * prod_k exp(-s_k (zeta_k + z)/(zeta_k - z))``.

    Blaschke factors use ``b_a(z) = (conj(a)/|a|)(a - z)/(1 - conj(a) z)``
    (and ``b_0(z) = z``), so every factor is positive at the origin.
    """

    zeros: tuple = ()
    atoms: tuple = ()
    phase: complex = 1.0

    def __post_init__(self):
        zeros = _as_complex_tuple(self.zeros)
        atoms = tuple((complex(loc), float(mass)) for loc, mass in self.atoms)
        phase = complex(self.phase)
        if any(abs(a) >= 1.0 for a in zeros):
            raise DomainError("Blaschke zeros must lie in the open disk")
        for loc, mass in atoms:
            if abs(abs(loc) - 1.0) > 1e-12:
                raise DomainError(f"atom location {loc!r} is not on the circle")
            if not mass > 0:
                raise DomainError(f"atom mass must be positive, got {mass!r}")
        if abs(abs(phase) - 1.0) > 1e-12:
            raise DomainError("phase must be unimodular")
        object.__setattr__(self, "zeros", zeros)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "phase", phase)

    @classmethod
    def blaschke(cls, zeros, phase: complex = 1.0) -> "InnerFunction":
        return cls(zeros=tuple(zeros), phase=phase)

    @classmethod
    def monomial(cls, degree: int) -> "InnerFunction":
        return cls(zeros=(0j,) * degree)

    @classmethod
    def atom(cls, location: complex = 1.0, mass: float = 1.0) -> "InnerFunction":
        return cls(atoms=((location, mass),))

    @property
    def is_finite_blaschke(self) -> bool:
        return not self.atoms

    @property
    def degree(self) -> int:
        return len(self.zeros)

    @property
    def vanishes_at_origin(self) -> bool:
        return any(a == 0 for a in self.zeros)

    def __mul__(self, other: "InnerFunction") -> "InnerFunction":
        return InnerFunction(self.zeros + other.zeros, self.atoms + other.atoms, self.phase * other.phase)

    def _atom_exponent(self, z):
        total = np.zeros(z.shape, dtype=complex)
        for loc, mass in self.atoms:
            gap = loc - z
            if np.any(np.abs(gap) < ATOM_HIT_TOL):
                raise SingularityError(f"evaluation at atom location {loc!r}")
            total += -mass * (loc + z) / gap
        return total

    def __call__(self, z):
        arr = np.asarray(z, dtype=complex)
        if np.any(np.abs(arr) > 1.0 + 1e-12):
            raise DomainError("inner functions are evaluated on the closed disk only")
        out = self.phase * kernels.blaschke_product(self.zeros, arr)
        if self.atoms:
            out = out * np.exp(self._atom_exponent(arr))
        return complex(out) if out.ndim == 0 else out

    def log_modulus_sq(self, z):
        """``log |I(z)|^2``, accurate up to the circle."""
        arr = np.asarray(z, dtype=complex)
        out = kernels.blaschke_log_modsq(self.zeros, arr)
        if self.atoms:
            r = np.abs(arr)
            d = (1.0 - r) * (1.0 + r)
            for loc, mass in self.atoms:
                gap = np.abs(loc - arr)
                if np.any(gap < ATOM_HIT_TOL):
                    raise SingularityError(f"evaluation at atom location {loc!r}")
                out = out - 2.0 * mass * d / gap ** 2
        return out

    def to_config(self) -> dict:
        return {
            "zeros": [[a.real, a.imag] for a in self.zeros],
            "atoms": [{"zeta": [loc.real, loc.imag], "mass": mass} for loc, mass in self.atoms],
            "phase": cmath.phase(self.phase),
        }

    @classmethod
    def from_config(cls, cfg: dict) -> "InnerFunction":
        zeros = [complex(re, im) for re, im in cfg.get("zeros", [])]
        atoms = [(complex(*a["zeta"]), a["mass"]) for a in cfg.get("atoms", [])]
        return cls(tuple(zeros), tuple(atoms), cmath.exp(1j * cfg.get("phase", 0.0)))


def kernel_norm_sq(I: InnerFunction, lam):
    """``||k_lam^I||^2 = (1 - |I(lam)|^2) / (1 - |lam|^2)``."""
    arr = np.asarray(lam, dtype=complex)
    r = np.abs(arr)
    if np.any(r >= 1.0):
        raise DomainError("kernel norms are defined for interior points only")
    d = (1.0 - r) * (1.0 + r)
    with np.errstate(divide="ignore"):
        out = -np.expm1(I.log_modulus_sq(arr)) / d
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class AdcVerdict:
    """Outcome of a finite kernel-norm probe. A heuristic, not a proof of ADC membership."""

    bounded: bool
    sup_norm_sq: float
    samples: list = field(repr=False)
    growth_exponent_estimate: float
    growth_per_decade: float


def growth_verdict(depths, values) -> tuple[bool, float, float]:
    """Decide boundedness of ``values[ray, depth]`` as depth -> 1.

    Returns ``(bounded, growth_per_decade, exponent)``: the envelope (max over
    rays) over the last decade of ``1/(1 - r)`` must grow by less than
    :data:`BOUNDED_GROWTH_FACTOR` per decade; ``exponent`` is the least-squares
    slope of ``log envelope`` against ``log 1/(1 - r)`` over the deeper half.
    """
    depths = np.asarray(depths, dtype=float)
    env = np.max(np.atleast_2d(values), axis=0)
    t = 1.0 - depths
    if depths.size < 2:
        raise ValueError("need at least two depths")
    deep = np.nonzero(t >= 10.0 * t[-1])[0]
    ref = int(deep[-1]) if deep.size else 0
    decades = math.log10(t[ref] / t[-1])
    factor = (np.max(env[ref:]) / env[ref]) ** (1.0 / decades) if env[ref] > 0 else math.inf
    half = max(2, depths.size // 2)
    x = np.log(1.0 / t[-half:])
    y = np.log(env[-half:])
    exponent = float(np.polyfit(x, y, 1)[0])
    return bool(factor < BOUNDED_GROWTH_FACTOR), float(factor), exponent


def adc_probe(I: InnerFunction, zeta, alpha: float = 2.0, depths=None, rays: int = 5) -> AdcVerdict:
    """Probe uniform boundedness of ``||k_lam^I||`` over a Stolz region at ``zeta``."""
    if depths is None:
        depths = geometric_depths(0.5, 40)
    sweep = stolz_sample(StolzRegion(zeta, alpha), rays, depths)
    norms = kernel_norm_sq(I, sweep.points)
    bounded, factor, exponent = growth_verdict(sweep.depths, norms)
    samples = list(zip(sweep.flat().tolist(), norms.ravel().tolist()))
    return AdcVerdict(bounded, float(norms.max()), samples, exponent, factor)


def blaschke_lambda(q: float, count: int) -> InnerFunction:
    """Finite Blaschke product with zeros ``1 - q**n``, ``n = 1..count``; positive at 0."""
    from .boundary import required_grid_size

    if count < 1:
        raise ValueError("count must be at least 1")
    if not 0.0 < q < 1.0:
        raise ValueError("q must lie in (0, 1)")
    zeros = tuple(1.0 - q ** n for n in range(1, count + 1))
    required_grid_size(zeros)  # raises ResolutionError past the cap
    value = complex(kernels.blaschke_product(zeros, 0j))
    phase = abs(value) / value if value != 0 else 1.0
    return InnerFunction(zeros, (), phase)
