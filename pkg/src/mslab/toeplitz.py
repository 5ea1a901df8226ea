"""Truncated Toeplitz operators A_phi f = P_I(phi f) as dense matrices in the TM basis."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boundary import BoundaryFunction
from .disk import CircleGrid
from .errors import DomainError, RankViolationError
from .inner import InnerFunction
from .model_space import ModelSpaceElement, TMBasis, kernel_coords, tm_basis

RANK_TOL = 1e-8


def opnorm(a: np.ndarray) -> float:
    """Largest singular value."""
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense matrix of an operator on K_I (``space="K_I"``) or on M = g K_I (``space="M"``)."""

    entries: np.ndarray
    basis: TMBasis
    space: str = "K_I"

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=complex)
        n = self.basis.degree
        if e.shape != (n, n):
            raise ValueError(f"expected a {n}x{n} matrix, got {e.shape}")
        if not np.all(np.isfinite(e)):
            raise ValueError("operator entries must be finite")
        object.__setattr__(self, "entries", e)

    def adjoint(self) -> "OperatorMatrix":
        return OperatorMatrix(self.entries.conj().T, self.basis, self.space)

    def norm(self) -> float:
        return opnorm(self.entries)

    def __matmul__(self, coeffs):
        return self.entries @ coeffs


@dataclass(frozen=True)
class ConjugationMap:
    """Antilinear map ``coeffs -> matrix @ conj(coeffs)``."""

    matrix: np.ndarray
    basis: TMBasis
    space: str = "K_I"

    def __call__(self, coeffs) -> np.ndarray:
        return self.matrix @ np.conj(np.asarray(coeffs, dtype=complex))

    def sandwich(self, a: np.ndarray) -> np.ndarray:
        """Matrix of the linear map ``C A C``."""
        return self.matrix @ np.conj(a) @ np.conj(self.matrix)

    def involution_residual(self) -> float:
        n = self.matrix.shape[0]
        return float(np.max(np.abs(self.matrix @ np.conj(self.matrix) - np.eye(n))))


def _basis_and_grid(I: InnerFunction, grid: CircleGrid | None):
    basis = tm_basis(I)
    grid = grid or basis.default_grid()
    basis.check_grid(grid)
    return basis, grid


def compress(basis: TMBasis, grid: CircleGrid, weight: np.ndarray) -> np.ndarray:
    """``M[k, j] = (1/N) sum conj(e_k) * weight * e_j`` on the grid."""
    tab = basis.table(grid)
    return (tab.conj() * weight) @ tab.T / grid.size


def assemble(I: InnerFunction, phi: BoundaryFunction) -> OperatorMatrix:
    """Matrix of A_phi: entries ``<phi e_j, e_k>``."""
    basis, grid = _basis_and_grid(I, phi.grid)
    return OperatorMatrix(compress(basis, grid, phi.samples), basis)


def compressed_shift(I: InnerFunction, grid: CircleGrid | None = None) -> OperatorMatrix:
    basis, grid = _basis_and_grid(I, grid)
    return OperatorMatrix(compress(basis, grid, grid.points), basis)


def conjugation(I: InnerFunction, grid: CircleGrid | None = None) -> ConjugationMap:
    """``C f = conj(z f) I`` in coordinates: ``J[k, j] = <C e_j, e_k>``."""
    basis, grid = _basis_and_grid(I, grid)
    tab = basis.table(grid)
    images = np.conj(grid.points * tab) * I(grid.points)
    return ConjugationMap(tab.conj() @ images.T / grid.size, basis)


def complex_symmetry_residual(I: InnerFunction, phi: BoundaryFunction) -> float:
    """``||C A_phi C - A_phi^*||``."""
    a = assemble(I, phi).entries
    c = conjugation(I, phi.grid)
    return opnorm(c.sandwich(a) - a.conj().T)


def zero_symbol_residual(I: InnerFunction, phi: BoundaryFunction) -> float:
    return assemble(I, phi).norm()


@dataclass(frozen=True)
class SarasonDefect:
    """``D = A - A_z A A_z^*`` split as ``phi1 (x) k_0 + k_0 (x) phi2`` with ``<phi2, k_0> = 0``."""

    matrix: np.ndarray
    rank: int
    phi1: ModelSpaceElement
    phi2: ModelSpaceElement
    residual: float
    singular_values: np.ndarray

    def __iter__(self):
        return iter((self.matrix, self.rank, self.phi1, self.phi2))


def defect_of(a: np.ndarray, shift: np.ndarray, basis: TMBasis, strict: bool = True) -> SarasonDefect:
    """Sarason defect of an arbitrary matrix ``a`` w.r.t. a compressed shift matrix.

    Requires ``k_0 = e_1`` (zero at the origin listed first). A nonzero
    residual means ``a`` is not a truncated Toeplitz operator.
    """
    d = a - shift @ a @ shift.conj().T
    sv = np.linalg.svd(d, compute_uv=False)
    scale = sv[0] if sv.size else 0.0
    rank = int(np.sum(sv > RANK_TOL * scale)) if scale > 0 else 0
    n = d.shape[0]
    phi1 = d[:, 0].copy()
    phi2 = np.zeros(n, dtype=complex)
    phi2[1:] = np.conj(d[0, 1:])
    e1 = np.zeros(n)
    e1[0] = 1.0
    recon = np.outer(phi1, e1) + np.outer(e1, phi2.conj())
    residual = opnorm(d - recon)
    if strict and rank > 2:
        raise RankViolationError(f"Sarason defect has rank {rank} > 2 (assembly or grid fault)")
    return SarasonDefect(d, rank, ModelSpaceElement(basis, phi1), ModelSpaceElement(basis, phi2), residual, sv)


def sarason_defect(I: InnerFunction, phi: BoundaryFunction) -> SarasonDefect:
    if not I.vanishes_at_origin:
        raise DomainError("the defect identity is set up for I(0) = 0")
    a = assemble(I, phi)
    shift = compressed_shift(I, phi.grid)
    return defect_of(a.entries, shift.entries, a.basis)


def tto_residual(a: np.ndarray, I: InnerFunction, grid: CircleGrid | None = None) -> float:
    """Distance of ``a`` from the truncated Toeplitz class, via the defect's shape."""
    basis, grid = _basis_and_grid(I, grid)
    shift = compressed_shift(I, grid).entries
    return defect_of(a, shift, basis, strict=False).residual


RANK_ONE_KINDS = ("kCk", "Ckk", "boundary")


def rank_one(I: InnerFunction, kind: str, point: complex, grid: CircleGrid | None = None) -> OperatorMatrix:
    """``k_lam (x) C k_lam``, ``C k_lam (x) k_lam`` or ``k_zeta (x) k_zeta``."""
    basis, grid = _basis_and_grid(I, grid)
    point = complex(point)
    if kind == "boundary":
        if abs(abs(point) - 1.0) > 1e-12:
            raise DomainError("boundary rank-one operators need a unimodular point")
        k = kernel_coords(basis, point)
        return OperatorMatrix(np.outer(k, k.conj()), basis)
    if kind not in RANK_ONE_KINDS:
        raise ValueError(f"unknown rank-one kind {kind!r}; expected one of {RANK_ONE_KINDS}")
    if abs(point) >= 1.0:
        raise DomainError("interior rank-one operators need |lam| < 1")
    k = kernel_coords(basis, point)
    ck = conjugation(I, grid)(k)
    if kind == "kCk":
        return OperatorMatrix(np.outer(k, ck.conj()), basis)
    return OperatorMatrix(np.outer(ck, k.conj()), basis)
