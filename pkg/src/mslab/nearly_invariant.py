"""Nearly invariant subspaces M = g K_I with g = a / (1 - I b) built from a Sarason pair.

M-coordinates are K_I-coordinates transported by ``U_g h = g h``: the
vector ``c`` stands for ``sum_k c_k g e_k``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .boundary import LEAKAGE_TOL, MAX_GRID, BoundaryFunction, HardyEvaluator, tail_norm
from .disk import CircleGrid, circle_grid
from .errors import (
    DegenerateDenominatorError,
    DomainError,
    GridMismatchError,
    InvalidPairError,
    MslabError,
    NonExtremalError,
    ResolutionError,
)
from .inner import InnerFunction, kernel_norm_sq
from .model_space import kernel_coords, kernel_eval, tm_basis
from .toeplitz import ConjugationMap, OperatorMatrix, compress, compressed_shift, conjugation, opnorm, rank_one

logger = logging.getLogger(__name__)

PAIR_TOL = 1e-8
SUP_TOL = 1e-10
DENOMINATOR_FLOOR = 1e-6
NORM_GATE = 1e-6


@dataclass(frozen=True)
class SarasonPair:
    a: HardyEvaluator
    b: HardyEvaluator

    def __post_init__(self):
        if self.a.grid != self.b.grid:
            raise GridMismatchError("a and b must share a grid")

    @property
    def grid(self) -> CircleGrid:
        return self.a.grid

    def defect(self) -> float:
        """``max | |a|^2 + |b|^2 - 1 |`` over the grid."""
        return float(np.max(np.abs(np.abs(self.a.samples) ** 2 + np.abs(self.b.samples) ** 2 - 1.0)))

    def validate(self, tol: float = PAIR_TOL) -> None:
        sup_a = np.max(np.abs(self.a.samples))
        sup_b = np.max(np.abs(self.b.samples))
        if sup_a > 1 + SUP_TOL or sup_b > 1 + SUP_TOL:
            raise InvalidPairError(f"pair leaves the unit ball on the grid: sup|a|={sup_a:.12g}, sup|b|={sup_b:.12g}")
        d = self.defect()
        if d >= tol:
            raise InvalidPairError(f"| |a|^2+|b|^2 - 1 | reaches {d:.3g} on the grid (tolerance {tol:g})")


@dataclass(frozen=True, eq=False)
class NearlyInvariantSpace:
    inner: InnerFunction
    pair: SarasonPair
    g: HardyEvaluator
    m_table: np.ndarray = field(repr=False)
    g0: float
    denominator_min: float
    rotation: complex = 1.0

    @property
    def grid(self) -> CircleGrid:
        return self.g.grid

    @property
    def basis(self):
        return tm_basis(self.inner)

    @property
    def dimension(self) -> int:
        return self.basis.degree

    def g_eval(self, z):
        """``a(z) / (1 - I(z) b(z))`` from the pair's evaluators."""
        z = np.asarray(z, dtype=complex)
        out = self.pair.a(z) / (1.0 - self.inner(z) * self.pair.b(z))
        return complex(out) if np.ndim(out) == 0 else out

    def element(self, coeffs) -> BoundaryFunction:
        """Grid samples of ``sum_k c_k g e_k``."""
        return BoundaryFunction(self.grid, np.asarray(coeffs, dtype=complex) @ self.m_table)

    def element_at(self, coeffs, z):
        z = np.asarray(z, dtype=complex)
        out = self.g_eval(z) * np.tensordot(np.asarray(coeffs, dtype=complex), self.basis(z), axes=1)
        return complex(out) if np.ndim(out) == 0 else out

    def __repr__(self):
        return f"NearlyInvariantSpace(dim={self.dimension}, N={self.grid.size}, g(0)={self.g0:.6g})"


def _rotate(h: HardyEvaluator, u: complex) -> HardyEvaluator:
    interior = None if h.interior is None else (lambda z, f=h.interior: u * f(z))
    return HardyEvaluator(BoundaryFunction(h.grid, u * h.samples), interior=interior, label=h.label)


def build_space(I: InnerFunction, pair: SarasonPair, strict: bool = True) -> NearlyInvariantSpace:
    """``M = g K_I`` with ``g = a / (1 - I b)``.

    ``strict=False`` skips the pair and unit-norm gates so that defective
    pairs can still be measured (see :func:`isometry_residual`).
    """
    if not I.is_finite_blaschke or not I.vanishes_at_origin:
        raise DomainError("nearly invariant spaces need a finite Blaschke I with I(0) = 0")
    grid = pair.grid
    basis = tm_basis(I)
    basis.check_grid(grid)
    if strict:
        pair.validate()
    a = pair.a
    a0 = complex(a(0.0))
    if abs(a0) < 1e-12:
        raise NonExtremalError("a(0) = 0 gives g(0) = 0; no extremal function")
    rotation = 1.0 + 0j
    if abs(a0.imag) > 1e-14 * abs(a0) or a0.real < 0:
        rotation = abs(a0) / a0
        logger.info("rotating a by %s so that g(0) > 0", rotation)
        a = _rotate(a, rotation)
        pair = SarasonPair(a, pair.b)
    pts = grid.points
    den = 1.0 - I(pts) * pair.b.samples
    den_min = float(np.min(np.abs(den)))
    if den_min < DENOMINATOR_FLOOR:
        raise DegenerateDenominatorError(f"min |1 - I b| = {den_min:.3g} on the grid")

    def interior(z, a=pair.a, b=pair.b):
        z = np.asarray(z, dtype=complex)
        return a(z) / (1.0 - I(z) * b(z))

    g = HardyEvaluator(BoundaryFunction(grid, a.samples / den), interior=interior, label="g",
                       leakage_tol=LEAKAGE_TOL if strict else np.inf)
    norm = g.norm()
    if strict and abs(norm - 1.0) > NORM_GATE:
        raise NonExtremalError(f"||g|| = {norm:.12g} deviates from 1 (invalid pair or under-resolved grid)")
    g0 = complex(interior(0.0))
    m_table = g.samples * basis.table(grid)
    m_table.setflags(write=False)
    return NearlyInvariantSpace(I, pair, g, m_table, float(g0.real), den_min, rotation)


def build_resolved_space(I: InnerFunction, pair_factory, start: int | None = None, tol: float = 1e-12,
                         cap: int = MAX_GRID) -> NearlyInvariantSpace:
    """Double the grid until g's negative-frequency leakage is below ``tol * ||g||``.

    ``pair_factory(grid)`` must return the pair sampled on ``grid``.
    """
    size = max(start or 0, tm_basis(I).min_grid)
    last = None
    while size <= cap:
        grid = circle_grid(size)
        try:
            space = build_space(I, pair_factory(grid))
        except (InvalidPairError, DomainError):
            raise
        except MslabError as exc:
            last = exc
        else:
            if space.g.leakage <= tol * space.g.norm():
                logger.info("resolved nearly invariant space on N=%d", size)
                return space
            last = None
        size *= 2
    raise ResolutionError(f"resolution exceeded: g not resolved to {tol:g} by N={cap}" + (f" ({last})" if last else ""))


# ---------------------------------------------------------------- pairs


def trivial_pair(grid) -> SarasonPair:
    """``a = 1, b = 0``: g = 1 and M = K_I."""
    return SarasonPair(HardyEvaluator.constant(grid, 1.0), HardyEvaluator.constant(grid, 0.0))


def constant_pair(grid, a: complex, b: complex) -> SarasonPair:
    return SarasonPair(HardyEvaluator.constant(grid, a), HardyEvaluator.constant(grid, b))


def inner_pair(grid, J: InnerFunction) -> SarasonPair:
    """``a = J, b = 0``: g = J (needs J(0) > 0 for the extremal normalization)."""
    return SarasonPair(HardyEvaluator.from_callable(grid, J, label="J"), HardyEvaluator.constant(grid, 0.0))


# ---------------------------------------------------------------- checks


def gram(M: NearlyInvariantSpace) -> np.ndarray:
    return M.m_table.conj() @ M.m_table.T / M.grid.size


def isometry_residual(M: NearlyInvariantSpace) -> float:
    return float(np.max(np.abs(gram(M) - np.eye(M.dimension))))


def project_M(M: NearlyInvariantSpace, f: BoundaryFunction) -> np.ndarray:
    """M-coordinates of ``P_M f = g P_I(conj(g) f)``."""
    if f.grid != M.grid:
        raise GridMismatchError(f"grid {f.size} vs space grid {M.grid.size}")
    tab = M.basis.table(M.grid)
    return tab.conj() @ (np.conj(M.g.samples) * f.samples) / f.size


def kernel_M(M: NearlyInvariantSpace, lam: complex, z):
    """``k_lam^M(z) = conj(g(lam)) g(z) k_lam^I(z)``."""
    lam = complex(lam)
    if abs(lam) >= 1.0:
        raise DomainError("kernel base point must lie in the open disk")
    return np.conj(M.g_eval(lam)) * M.g_eval(z) * kernel_eval(M.inner, lam, z)


def kernel_M_samples(M: NearlyInvariantSpace, lam: complex) -> BoundaryFunction:
    pts = M.grid.points
    return BoundaryFunction(M.grid, np.conj(M.g_eval(complex(lam))) * M.g.samples * kernel_eval(M.inner, lam, pts))


def kernel_M_norm_sq(M: NearlyInvariantSpace, lam):
    return np.abs(M.g_eval(lam)) ** 2 * kernel_norm_sq(M.inner, lam)


def assemble_AM(M: NearlyInvariantSpace, phi: BoundaryFunction) -> OperatorMatrix:
    """Matrix of ``A_phi^M = P_M phi`` in M-coordinates: columns ``P_M(phi g e_j)``."""
    if phi.grid != M.grid:
        raise GridMismatchError(f"grid {phi.size} vs space grid {M.grid.size}")
    images = phi.samples * M.m_table
    cols = M.m_table.conj() @ images.T / M.grid.size
    return OperatorMatrix(cols, M.basis, space="M")


def spatial_isomorphism_residual(M: NearlyInvariantSpace, phi: BoundaryFunction) -> float:
    """``||A_phi^M - A_{|g|^2 phi}||`` (M-coordinates against K_I-coordinates)."""
    lhs = assemble_AM(M, phi).entries
    weight = np.abs(M.g.samples) ** 2 * phi.samples
    rhs = compress(M.basis, M.grid, weight)
    return opnorm(lhs - rhs)


def conjugation_g(M: NearlyInvariantSpace) -> ConjugationMap:
    """``C_g = U_g C U_g^*``: in M-coordinates the same matrix as C."""
    c = conjugation(M.inner, M.grid)
    return ConjugationMap(c.matrix, c.basis, space="M")


def conjugation_g_direct(M: NearlyInvariantSpace) -> np.ndarray:
    """``<g C(e_j), g e_k>`` by quadrature, without using the isometry."""
    tab = M.basis.table(M.grid)
    pts = M.grid.points
    images = M.g.samples * np.conj(pts * tab) * M.inner(pts)
    return M.m_table.conj() @ images.T / M.grid.size


def shift_g(M: NearlyInvariantSpace) -> OperatorMatrix:
    """``S_g = U_g A_z U_g^*``."""
    s = compressed_shift(M.inner, M.grid)
    return OperatorMatrix(s.entries, s.basis, space="M")


def selfadjoint_rank_one_M(M: NearlyInvariantSpace, zeta: complex) -> OperatorMatrix:
    """``g k_zeta^I (x) g k_zeta^I`` in M-coordinates."""
    a = rank_one(M.inner, "boundary", zeta, M.grid)
    return OperatorMatrix(a.entries, a.basis, space="M")


def rank_one_M(M: NearlyInvariantSpace, kind: str, point: complex) -> OperatorMatrix:
    """Transported rank-one operator ``U_g (x (x) y) U_g^*``."""
    a = rank_one(M.inner, kind, point, M.grid)
    return OperatorMatrix(a.entries, a.basis, space="M")


def _kernel_samples(M: NearlyInvariantSpace, point: complex) -> np.ndarray:
    pts = M.grid.points
    if abs(point) < 1.0:
        return kernel_eval(M.inner, point, pts)
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = (1.0 - np.conj(M.inner(point)) * M.inner(pts)) / (1.0 - np.conj(point) * pts)
    hit = np.abs(pts - point) < 1e-14
    vals[hit] = np.sum(np.abs(M.basis(point)) ** 2)
    return vals


def rank_one_M_direct(M: NearlyInvariantSpace, kind: str, point: complex) -> np.ndarray:
    """Same operator as :func:`rank_one_M`, assembled from sampled ``g k`` and ``g C k`` in M."""
    point = complex(point)
    pts = M.grid.points
    k = _kernel_samples(M, point)
    gk = M.g.samples * k
    n = M.grid.size
    x = M.m_table.conj() @ gk / n
    if kind == "boundary":
        return np.outer(x, x.conj())
    gck = M.g.samples * np.conj(pts * k) * M.inner(pts)
    y = M.m_table.conj() @ gck / n
    return np.outer(x, y.conj()) if kind == "kCk" else np.outer(y, x.conj())


def q_tail(M: NearlyInvariantSpace, N: int, coeffs) -> float:
    """``||Q_N f|| = ||A_zbar^N h||`` for ``f = g h``, from the Fourier tail of ``h``."""
    h = BoundaryFunction(M.grid, np.asarray(coeffs, dtype=complex) @ M.basis.table(M.grid))
    return tail_norm(h, N)


def q_tail_operator(M: NearlyInvariantSpace, N: int) -> np.ndarray:
    """Matrix of ``Q_N = U_g A_zbar^N U_g^*`` in M-coordinates."""
    s = shift_g(M).entries.conj().T
    return np.linalg.matrix_power(s, N)


@dataclass(frozen=True)
class ExtremalityReport:
    trials: int
    g0: float
    max_re_f0: float
    violations: int
    attained_by_g: bool

    @property
    def ok(self) -> bool:
        return self.violations == 0 and self.attained_by_g


def extremality_check(M: NearlyInvariantSpace, trials: int = 1000, seed: int = 0, tol: float = 1e-9) -> ExtremalityReport:
    """Monte-Carlo check that ``Re f(0) <= g(0)`` on the unit sphere of M.

    ``f(0)`` is read off as the mean of ``f`` over the grid, independent of
    the basis values at the origin.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = np.random.default_rng(seed)
    n = M.dimension
    c = rng.normal(size=(trials, n)) + 1j * rng.normal(size=(trials, n))
    c /= np.linalg.norm(c, axis=1, keepdims=True)
    f0 = (c @ M.m_table).mean(axis=1)
    max_re = float(np.max(f0.real))
    violations = int(np.sum(f0.real > M.g0 + tol))
    e1 = np.zeros(n)
    e1[0] = 1.0
    g_at_0 = complex(M.element(e1).samples.mean())
    attained = abs(g_at_0 - M.g0) < tol and abs(np.linalg.norm(e1) - 1.0) < tol
    return ExtremalityReport(trials, M.g0, max_re, violations, bool(attained))
