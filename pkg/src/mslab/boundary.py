"""L^2 functions on the circle grid: Fourier data, Riesz projection, H^2 evaluation, outer functions.

Fourier coefficients follow numpy's FFT order; ``coefficient(k)`` accepts
``k`` in ``-N/2 .. N/2 - 1`` and the Nyquist index ``-N/2`` counts as negative.
"""
from __future__ import annotations

import logging
import math
from numbers import Number

import numpy as np

from . import kernels
from .disk import MIN_GRID, CircleGrid, circle_grid
from .errors import DegenerateModulusError, DomainError, GridMismatchError, NonAnalyticError, ResolutionError

logger = logging.getLogger(__name__)

ALIAS_TOL = 1e-12
MAX_GRID = 1 << 20
LEAKAGE_TOL = 1e-8
MODULUS_FLOOR = 1e-8
TRIM_TOL = 1e-18


def required_grid_size(zeros, tol: float = ALIAS_TOL, cap: int = MAX_GRID, minimum: int = MIN_GRID) -> int:
    """Smallest power of two ``N`` with ``max|a_j| ** (N/2) < tol``.

    Coefficients of the rational functions built on ``zeros`` decay like
    ``max|a_j| ** n``; requiring it at the Nyquist index ``N/2`` keeps both
    aliasing and negative-frequency leakage below ``tol``.
    """
    rho = max((abs(complex(a)) for a in zeros), default=0.0)
    if rho == 0.0:
        return minimum
    if rho >= 1.0:
        raise ResolutionError(f"resolution exceeded: zero modulus {rho!r} is not inside the disk in double precision")
    need = 2.0 * math.log(tol) / math.log(rho)
    n = max(minimum, 1 << max(0, math.ceil(math.log2(need))))
    if n > cap:
        raise ResolutionError(f"resolution exceeded: zero modulus {rho!r} needs N={n} > cap {cap}")
    return n


def _grid_of(grid) -> CircleGrid:
    return grid if isinstance(grid, CircleGrid) else circle_grid(int(grid))


class BoundaryFunction:
    """Samples of an L^2(T, dtheta/2pi) function at the grid nodes, with eager Fourier coefficients."""

    __slots__ = ("grid", "samples", "coefficients")

    def __init__(self, grid, samples):
        grid = _grid_of(grid)
        samples = np.array(samples, dtype=np.complex128)
        if samples.shape != (grid.size,):
            raise GridMismatchError(f"expected {grid.size} samples, got shape {samples.shape}")
        coefficients = np.fft.fft(samples) / grid.size
        samples.setflags(write=False)
        coefficients.setflags(write=False)
        self.grid = grid
        self.samples = samples
        self.coefficients = coefficients

    @classmethod
    def from_callable(cls, grid, func) -> "BoundaryFunction":
        grid = _grid_of(grid)
        return cls(grid, func(grid.points))

    @classmethod
    def from_coefficients(cls, grid, coeffs: dict) -> "BoundaryFunction":
        """Trigonometric polynomial ``sum_k coeffs[k] e^{ik theta}`` (``|k| < N/2``)."""
        grid = _grid_of(grid)
        full = np.zeros(grid.size, dtype=np.complex128)
        for k, c in coeffs.items():
            if not -grid.size // 2 <= k < grid.size // 2:
                raise ValueError(f"frequency {k} not representable on N={grid.size}")
            full[k % grid.size] += c
        return cls(grid, np.fft.ifft(full) * grid.size)

    @property
    def size(self) -> int:
        return self.grid.size

    def coefficient(self, k: int) -> complex:
        n = self.size
        if not -n // 2 <= k < n // 2:
            raise IndexError(k)
        return complex(self.coefficients[k % n])

    def indexed_coefficients(self):
        """``(k, c_k)`` for ``k = -N/2 .. N/2 - 1``."""
        n = self.size
        k = np.arange(-n // 2, n // 2)
        return k, self.coefficients[k % n]

    @property
    def analytic_coefficients(self) -> np.ndarray:
        return self.coefficients[: self.size // 2]

    @property
    def negative_coefficients(self) -> np.ndarray:
        return self.coefficients[self.size // 2:]

    def norm(self) -> float:
        return float(np.sqrt(np.mean(np.abs(self.samples) ** 2)))

    def conj(self) -> "BoundaryFunction":
        return BoundaryFunction(self.grid, np.conj(self.samples))

    def map(self, func) -> "BoundaryFunction":
        return BoundaryFunction(self.grid, func(self.samples))

    def _other(self, other):
        if isinstance(other, BoundaryFunction):
            if other.grid != self.grid:
                raise GridMismatchError(f"grid {self.size} vs {other.size}")
            return other.samples
        if isinstance(other, HardyEvaluator):
            return self._other(other.source)
        if isinstance(other, Number):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else BoundaryFunction(self.grid, self.samples + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else BoundaryFunction(self.grid, self.samples - o)

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else BoundaryFunction(self.grid, o - self.samples)

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else BoundaryFunction(self.grid, self.samples * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else BoundaryFunction(self.grid, self.samples / o)

    def __neg__(self):
        return BoundaryFunction(self.grid, -self.samples)

    def __repr__(self):
        return f"BoundaryFunction(N={self.size}, norm={self.norm():.6g})"


def inner_product(f: BoundaryFunction, g: BoundaryFunction) -> complex:
    """``<f, g> = (1/N) sum_j f(theta_j) conj(g(theta_j))``."""
    if f.grid != g.grid:
        raise GridMismatchError(f"grid {f.size} vs {g.size}")
    return complex(np.vdot(g.samples, f.samples) / f.size)


def riesz_project(f: BoundaryFunction) -> BoundaryFunction:
    n = f.size
    c = np.array(f.coefficients)
    c[n // 2:] = 0
    return BoundaryFunction(f.grid, np.fft.ifft(c) * n)


class HardyEvaluator:
    """An H^2 function carried by its grid samples, evaluable inside the disk.

    Interior values come from the Taylor series (the analytic Fourier
    coefficients), unless a closed-form ``interior`` callable is supplied;
    :func:`cauchy_eval` always uses the series.
    """

    def __init__(self, source: BoundaryFunction, interior=None, leakage_tol: float = LEAKAGE_TOL, label: str = ""):
        norm = source.norm()
        leak = float(np.max(np.abs(source.negative_coefficients)))
        if leak > leakage_tol * max(norm, np.finfo(float).tiny):
            raise NonAnalyticError(f"negative-frequency leakage {leak:.3g} exceeds {leakage_tol:g} * norm {norm:.3g}")
        self.source = source
        self.interior = interior
        self.leakage = leak
        self.label = label
        series = source.analytic_coefficients
        mags = np.abs(series)
        keep = np.nonzero(mags > TRIM_TOL * max(mags.max(), np.finfo(float).tiny))[0]
        self.series = np.array(series[: keep[-1] + 1] if keep.size else series[:1])

    @classmethod
    def from_callable(cls, grid, func, exact: bool = True, **kwargs) -> "HardyEvaluator":
        """Sample a function analytic in the disk; ``exact`` keeps ``func`` for interior evaluation."""
        return cls(BoundaryFunction.from_callable(grid, func), interior=func if exact else None, **kwargs)

    @classmethod
    def constant(cls, grid, value: complex) -> "HardyEvaluator":
        grid = _grid_of(grid)
        return cls(BoundaryFunction(grid, np.full(grid.size, value, dtype=complex)),
                   interior=lambda z: np.full(np.shape(z), value, dtype=complex) if np.ndim(z) else complex(value))

    @property
    def grid(self) -> CircleGrid:
        return self.source.grid

    @property
    def samples(self) -> np.ndarray:
        return self.source.samples

    def norm(self) -> float:
        return self.source.norm()

    def taylor(self, j: int) -> complex:
        return complex(self.series[j]) if j < len(self.series) else 0j

    def series_eval(self, lam):
        out = kernels.horner(self.series, lam)
        return complex(out) if np.ndim(out) == 0 else out

    def __call__(self, lam):
        if np.any(np.abs(np.asarray(lam)) > 1.0 + 1e-12):
            raise DomainError("H^2 functions are evaluated on the closed disk only")
        if self.interior is not None:
            out = self.interior(lam)
            return complex(out) if np.ndim(out) == 0 else np.asarray(out, dtype=complex)
        return self.series_eval(lam)

    def on_circle(self, r: float) -> np.ndarray:
        """Series values at ``r e^{i theta_j}`` for all grid nodes (one FFT)."""
        n = self.grid.size
        c = np.zeros(n, dtype=complex)
        m = len(self.series)
        c[:m] = self.series * r ** np.arange(m)
        return np.fft.ifft(c) * n

    def __repr__(self):
        return f"HardyEvaluator({self.label or 'f'}, N={self.grid.size}, terms={len(self.series)})"


def cauchy_eval(f: HardyEvaluator, lam):
    """``<f, k_lam> = sum_{j>=0} f^(j) lam^j``."""
    if np.any(np.abs(np.asarray(lam)) >= 1.0):
        raise DomainError("Cauchy evaluation needs |lam| < 1")
    return f.series_eval(lam)


def winding_number(values: np.ndarray) -> int:
    steps = np.angle(np.roll(values, -1) / values)
    return int(round(float(np.sum(steps)) / (2.0 * np.pi)))


def outer_from_modulus(w, grid=None, floor: float = MODULUS_FLOOR, check_radius: float = 0.99) -> HardyEvaluator:
    """Outer function with boundary modulus ``w``, positive at the origin.

    ``log O`` is the analytic completion of ``log w``: mean plus twice the
    positive-frequency part. Interior values are ``exp`` of the completed
    log series.
    """
    if isinstance(w, BoundaryFunction):
        grid, w = w.grid, w.samples
    grid = _grid_of(grid)
    w = np.asarray(w)
    if np.iscomplexobj(w):
        if np.max(np.abs(w.imag)) > 1e-12 * np.max(np.abs(w)):
            raise DegenerateModulusError("modulus samples must be real")
        w = w.real
    if w.shape != (grid.size,):
        raise GridMismatchError(f"expected {grid.size} samples, got {w.shape}")
    if np.min(w) < floor:
        raise DegenerateModulusError(f"modulus sample {np.min(w):.3g} below floor {floor:g}")
    n = grid.size
    c = np.fft.fft(np.log(w)) / n
    d = np.zeros(n, dtype=complex)
    d[0] = c[0].real
    d[1: n // 2] = 2.0 * c[1: n // 2]
    log_samples = np.fft.ifft(d) * n
    series = d[: n // 2]
    mags = np.abs(series)
    keep = np.nonzero(mags > TRIM_TOL * mags.max())[0]
    series = series[: keep[-1] + 1] if keep.size else series[:1]

    def interior(lam):
        return np.exp(kernels.horner(series, lam))

    out = HardyEvaluator(BoundaryFunction(grid, np.exp(log_samples)), interior=interior, label="outer")
    out.log_series = series
    rel = np.max(np.abs(np.abs(out.samples) - w) / w)
    if rel > 1e-8:
        raise DegenerateModulusError(f"outer modulus mismatch {rel:.3g}: log-modulus under-resolved on N={n}")
    if winding_number(out.on_circle(check_radius)) != 0:
        raise DegenerateModulusError("outer construction acquired interior zeros (under-resolved)")
    return out


def tail_norm(f, N: int) -> float:
    """``sqrt(sum_{j>=N} |f^(j)|^2)`` over the analytic coefficients."""
    if N < 0:
        raise ValueError("N must be non-negative")
    src = f.source if isinstance(f, HardyEvaluator) else f
    tail = src.analytic_coefficients[N:]
    return float(np.sqrt(np.sum(np.abs(tail[::-1]) ** 2)))
