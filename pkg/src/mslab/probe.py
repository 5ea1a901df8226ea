"""Boundary-limit experiments on K_I and M = g K_I.

All verdicts here are finite-sample heuristics with explicit thresholds;
``inconclusive`` is a legitimate outcome.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .boundary import BoundaryFunction, HardyEvaluator, outer_from_modulus, required_grid_size
from .disk import StolzRegion, circle_grid, geometric_depths, stolz_sample
from .errors import SubsetViolationError
from .inner import InnerFunction, blaschke_lambda, growth_verdict, kernel_norm_sq
from .nearly_invariant import (
    NearlyInvariantSpace,
    SarasonPair,
    build_resolved_space,
    build_space,
    kernel_M,
)

logger = logging.getLogger(__name__)

DEFAULT_APERTURES = (1.5, 2.0, 4.0)
LIMIT_TOL = 1e-6
ADC_THRESHOLD = 1e-4
NM_THRESHOLD = 1e-6
EXAMPLE_TOL = 1e-8


def default_depths():
    return geometric_depths(0.5, 40)


@dataclass
class LimitEstimate:
    converged: bool
    value: complex
    residual: float
    tolerance: float
    samples: list = field(repr=False, default_factory=list)

    def to_dict(self) -> dict:
        return {
            "converged": self.converged,
            "value": [self.value.real, self.value.imag],
            "residual": self.residual,
            "tolerance": self.tolerance,
        }


def nt_limit(evaluator, zeta, apertures=DEFAULT_APERTURES, depths=None, rays: int = 3, tol: float = LIMIT_TOL,
             tail: int = 3) -> LimitEstimate:
    """Estimate the non-tangential limit of ``evaluator`` at ``zeta``.

    Converged when, over every ray of every aperture, the ``tail`` deepest
    values sit within ``tol * (1 + |value|)`` of the deepest radial value.
    """
    depths = default_depths() if depths is None else np.asarray(depths, dtype=float)
    zeta = complex(zeta)
    deepest = []
    samples = []
    value = None
    for alpha in apertures:
        sweep = stolz_sample(StolzRegion(zeta, alpha), rays, depths)
        with np.errstate(all="ignore"):
            vals = np.asarray(evaluator(sweep.points), dtype=complex)
        if value is None:
            value = complex(vals[0, -1])
        deepest.append(vals[:, -tail:].ravel())
        for k, angle in enumerate(sweep.angles):
            for i, r in enumerate(sweep.depths):
                samples.append((alpha, float(angle), float(r), complex(sweep.points[k, i]), complex(vals[k, i])))
    tail_vals = np.concatenate(deepest)
    tolerance = tol * (1.0 + abs(value)) if np.isfinite(value) else tol
    if not np.all(np.isfinite(tail_vals)):
        return LimitEstimate(False, value, float("inf"), tolerance, samples)
    residual = float(np.max(np.abs(tail_vals - value)))
    return LimitEstimate(residual < tolerance, value, residual, tolerance, samples)


@dataclass
class MntlReport:
    cond1: LimitEstimate
    cond2: bool
    growth_per_decade: float
    growth_exponent: float
    sup_norm_sq: float
    samples: list = field(repr=False, default_factory=list)

    @property
    def holds(self) -> bool:
        return self.cond1.converged and self.cond2


def mntl_check(M: NearlyInvariantSpace, zeta, apertures=DEFAULT_APERTURES, depths=None, rays: int = 3) -> MntlReport:
    """Condition (1): g has a non-tangential limit; (2): ``||k_lam^M||^2`` stays bounded."""
    depths = default_depths() if depths is None else np.asarray(depths, dtype=float)
    cond1 = nt_limit(M.g_eval, zeta, apertures, depths, rays)
    bounded, worst, exponent, sup = True, 0.0, -np.inf, 0.0
    samples = []
    for alpha in apertures:
        sweep = stolz_sample(StolzRegion(zeta, alpha), rays, depths)
        norms = np.abs(M.g_eval(sweep.points)) ** 2 * kernel_norm_sq(M.inner, sweep.points)
        ok, factor, slope = growth_verdict(sweep.depths, norms)
        bounded &= ok
        worst = max(worst, factor)
        exponent = max(exponent, slope)
        sup = max(sup, float(norms.max()))
        for k in range(len(sweep.angles)):
            for i, r in enumerate(sweep.depths):
                samples.append((alpha, k, float(r), complex(sweep.points[k, i]), float(norms[k, i])))
    return MntlReport(cond1, bool(bounded), worst, exponent, sup, samples)


@dataclass
class GrowthReport:
    max_ratio: float
    argmax: complex
    count: int


def growth_bound_check(f: HardyEvaluator, sample_count: int = 1000, seed: int = 0, points=None) -> GrowthReport:
    """Max of ``|f(z)| sqrt(1 - |z|^2) / ||f||``; at most 1 since ``|f(z)| <= ||f|| ||k_z||``."""
    if points is None:
        rng = np.random.default_rng(seed)
        half = sample_count // 2
        radius = np.concatenate([np.sqrt(rng.random(half)),
                                 1.0 - 10.0 ** (-6.0 * rng.random(sample_count - half))])
        points = radius * np.exp(2j * np.pi * rng.random(sample_count))
    points = np.asarray(points, dtype=complex)
    vals = np.abs(f(points)) * np.sqrt((1.0 - np.abs(points)) * (1.0 + np.abs(points))) / f.norm()
    i = int(np.argmax(vals))
    return GrowthReport(float(vals[i]), complex(points.ravel()[i]), int(points.size))


# ------------------------------------------------------------- the oscillating example


def oscillating_pair(grid, B1: InnerFunction, B2: InnerFunction) -> SarasonPair:
    """``a = 1/2 + B1/4``, ``b = B2 b0`` with ``b0`` outer and ``|a|^2 + |b0|^2 = 1``."""
    a = HardyEvaluator.from_callable(grid, lambda z: 0.5 + 0.25 * B1(z), label="a")
    b0 = outer_from_modulus(np.sqrt(1.0 - np.abs(a.samples) ** 2), grid)
    b = HardyEvaluator(BoundaryFunction(grid, B2(grid.points) * b0.samples),
                       interior=lambda z: B2(z) * b0(z), label="b")
    return SarasonPair(a, b)


@dataclass
class OscillatingExample:
    n1: int
    n2: int
    space: NearlyInvariantSpace
    delta: float
    delta_grid: tuple
    a_range: tuple
    pair_defect: float
    identity_residual: float
    oscillation: list = field(repr=False)
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def table(self) -> list[dict]:
        return [dict(row) for row in self.oscillation]


def oscillating_factors(n1: int, n2: int) -> tuple[InnerFunction, InnerFunction]:
    """``B1`` with zeros ``1 - 4^-n`` (n <= n1) and ``B2`` with zeros ``1 - 2^-n`` (n <= n2)."""
    if n2 != 2 * n1:
        raise SubsetViolationError(f"need n2 = 2 n1 so that truncated Lambda_1 lies in Lambda_2 (got {n1}, {n2})")
    return blaschke_lambda(0.25, n1), blaschke_lambda(0.5, n2)


def oscillating_space(n1: int, n2: int, I: InnerFunction | None = None, grid: int | None = None) -> NearlyInvariantSpace:
    """The oscillating space on a fixed ``grid``, or on the first grid that resolves g."""
    B1, B2 = oscillating_factors(n1, n2)
    I = I if I is not None else InnerFunction.blaschke((0.0, -0.5))
    if grid is not None:
        return build_space(I, oscillating_pair(circle_grid(grid), B1, B2))
    start = required_grid_size(B2.zeros)
    return build_resolved_space(I, lambda g: oscillating_pair(g, B1, B2), start=start)


def paper_example(n1: int, n2: int, I: InnerFunction | None = None, tol: float = EXAMPLE_TOL,
                  grid: int | None = None) -> OscillatingExample:
    """Truncated version of the oscillating extremal function at ``zeta = 1``.

    ``Lambda_1 = {1 - 4^-n}``, ``Lambda_2 = {1 - 2^-n}``; since ``b = B2 b0``
    vanishes on ``Lambda_2`` we get ``g = a`` there, so ``g - 1/2`` is 0 on
    ``Lambda_1`` and at least ``delta/4`` on the remaining points.
    """
    B1, B2 = oscillating_factors(n1, n2)
    space = oscillating_space(n1, n2, I, grid)
    grid = space.grid
    pair = space.pair

    lam1 = np.array([z.real for z in B1.zeros])
    lam2 = np.array([z.real for z in B2.zeros])
    in1 = np.array([np.any(np.isclose(x, lam1, rtol=0, atol=1e-15)) for x in lam2])
    mids = lam2[~in1]
    delta = float(np.min(np.abs(B1(mids))))

    # delta again from the sampled a on two grids: series evaluation, not the closed form
    delta_grid = []
    for size in (grid.size, 2 * grid.size):
        a_s = HardyEvaluator.from_callable(size, lambda z: 0.5 + 0.25 * B1(z), exact=False)
        delta_grid.append(float(np.min(np.abs(4.0 * (a_s.series_eval(mids) - 0.5)))))

    a_abs = np.abs(pair.a.samples)
    b0 = outer_from_modulus(np.sqrt(1.0 - a_abs ** 2), grid)
    pair_defect = float(np.max(np.abs(a_abs ** 2 + np.abs(b0.samples) ** 2 - 1.0)))

    g_series = space.g.series_eval(lam2)
    g_closed = space.g_eval(lam2)
    a_vals = pair.a(lam2)
    b1_vals = B1(lam2)
    rows = []
    for j, lam in enumerate(lam2):
        rows.append({
            "n": j + 1,
            "lambda": float(lam),
            "in_lambda1": bool(in1[j]),
            "g": complex(g_series[j]),
            "g_closed": complex(g_closed[j]),
            "a": complex(a_vals[j]),
            "g_minus_half": complex(g_series[j] - 0.5),
            "quarter_B1": complex(0.25 * b1_vals[j]),
        })
    identity_residual = float(np.max(np.abs(g_series - a_vals)))
    dev = np.abs(g_series - 0.5)
    checks = {
        "a_range": bool(a_abs.min() >= 0.25 - 1e-12 and a_abs.max() <= 0.75 + 1e-12),
        "pair_defect": pair_defect < tol,
        "g_equals_a_on_lambda2": identity_residual < tol,
        "zero_on_lambda1": bool(np.all(dev[in1] < tol)),
        "separated_on_midpoints": bool(np.all(dev[~in1] >= delta / 4.0 - tol)),
        "delta_positive": delta > 0,
        "delta_grid_stable": abs(delta_grid[0] - delta_grid[1]) <= 1e-10 * delta,
    }
    logger.info("oscillating example (%d, %d) on N=%d: delta=%.6g", n1, n2, grid.size, delta)
    return OscillatingExample(n1, n2, space, delta, tuple(delta_grid), (float(a_abs.min()), float(a_abs.max())),
                        pair_defect, identity_residual, rows, checks)


# ------------------------------------------------------------- vanishing extremal function


def vanishing_pair(grid, zeta: complex = 1.0, exponent: float = 0.6, I: InnerFunction | None = None,
                   scale: float = 0.5) -> SarasonPair:
    """Pair whose g vanishes like ``|z - zeta|^exponent`` at ``zeta``.

    ``a = c (1 - conj(zeta) z)^exponent`` with ``|a| <= scale``; ``b`` is the
    outer function with ``|b|^2 = 1 - |a|^2``, rotated so that
    ``I(zeta) b(zeta) = -1`` keeps ``1 - I b`` away from zero near ``zeta``.
    """
    zeta = complex(zeta)
    c = scale * 2.0 ** (-exponent)

    def a_func(z):
        return c * (1.0 - np.conj(zeta) * np.asarray(z, dtype=complex)) ** exponent

    a = HardyEvaluator.from_callable(grid, a_func, label="a")
    b_outer = outer_from_modulus(np.sqrt(1.0 - np.abs(a.samples) ** 2), grid)
    u = -np.conj(I(zeta)) if I is not None else -1.0
    u = u / abs(u)
    b = HardyEvaluator(BoundaryFunction(grid, u * b_outer.samples), interior=lambda z: u * b_outer(z), label="b")
    return SarasonPair(a, b)


def vanishing_space(I: InnerFunction, zeta: complex = 1.0, exponent: float = 0.6, tol: float = 1e-8,
                    start: int = 1 << 12) -> NearlyInvariantSpace:
    return build_resolved_space(I, lambda grid: vanishing_pair(grid, zeta, exponent, I), start=start, tol=tol)


# ------------------------------------------------------------- dichotomy


@dataclass
class DichotomyReport:
    g_limit: LimitEstimate
    branch: str
    evidence: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"branch": self.branch, "g_limit": self.g_limit.to_dict(), "evidence": self.evidence}


def dichotomy_classify(M: NearlyInvariantSpace, zeta, apertures=DEFAULT_APERTURES, depths=None, rays: int = 3,
                       adc_threshold: float = ADC_THRESHOLD, nm_threshold: float = NM_THRESHOLD) -> DichotomyReport:
    """Place ``zeta`` in the ADC branch (g has a nonzero limit, so every f/g does)
    or the N^M branch (g and every g e_k tend to 0), else ``inconclusive``."""
    depths = default_depths() if depths is None else np.asarray(depths, dtype=float)
    zeta = complex(zeta)
    L = nt_limit(M.g_eval, zeta, apertures, depths, rays)
    evidence: dict = {"g_value_abs": abs(L.value), "adc_threshold": adc_threshold, "nm_threshold": nm_threshold}
    n = M.dimension
    if L.converged and abs(L.value) > adc_threshold:
        limits = []
        for k in range(n):
            coeffs = np.eye(n)[k]
            est = nt_limit(lambda z, c=coeffs: M.element_at(c, z) / M.g_eval(z), zeta, apertures, depths, rays)
            limits.append(est)
        evidence["quotient_limits"] = [e.to_dict() for e in limits]
        branch = "ADC_branch" if all(e.converged for e in limits) else "inconclusive"
        return DichotomyReport(L, branch, evidence)
    if L.converged and abs(L.value) <= nm_threshold:
        limits = []
        for k in range(n):
            coeffs = np.eye(n)[k]
            limits.append(nt_limit(lambda z, c=coeffs: M.element_at(c, z), zeta, apertures, depths, rays))
        evidence["basis_image_limits"] = [e.to_dict() for e in limits]
        radial = zeta * depths
        kern = np.abs(np.array([kernel_M(M, lam, 0.0) for lam in radial]))
        evidence["kernel_at_origin"] = kern.tolist()
        vanishing = bool(kern[-1] <= nm_threshold and kern[-1] < kern[0])
        evidence["kernel_vanishing"] = vanishing
        evidence["g_over_sqrt_gap"] = float(np.abs(M.g_eval(radial[-1])) / np.sqrt(abs(radial[-1] - zeta)))
        ok = all(e.converged and abs(e.value) <= nm_threshold for e in limits) and vanishing
        return DichotomyReport(L, "NM_branch" if ok else "inconclusive", evidence)
    return DichotomyReport(L, "inconclusive", evidence)
