"""The model space K_I = H^2 (-) I H^2 for a finite Blaschke product I.

Coordinates are taken in the Takenaka-Malmquist basis

    e_k(z) = sqrt(1 - |a_k|^2) / (1 - conj(a_k) z) * prod_{j<k} b_{a_j}(z)

with zeros at the origin ordered first, so that ``e_1 = 1 = k_0^I`` whenever
``I(0) = 0``.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from . import kernels
from .boundary import BoundaryFunction, required_grid_size
from .disk import CircleGrid, circle_grid
from .errors import DomainError, GridMismatchError
from .inner import InnerFunction, kernel_norm_sq


class TMBasis:
    """Orthonormal Takenaka-Malmquist basis of K_I; sample tables are cached per grid."""

    def __init__(self, inner: InnerFunction):
        if not inner.is_finite_blaschke:
            raise DomainError("matrix-level model space operations need a finite Blaschke product")
        if inner.degree == 0:
            raise DomainError("K_I is trivial for a unimodular constant I")
        self.inner = inner
        zeros = sorted(inner.zeros, key=lambda a: a != 0)
        self.zeros = np.array(zeros, dtype=complex)
        self._tables: dict[int, np.ndarray] = {}

    @property
    def degree(self) -> int:
        return len(self.zeros)

    def __call__(self, z) -> np.ndarray:
        """``e_k(z)`` stacked along the first axis."""
        return kernels.tm_table(self.zeros, z)

    @functools.cached_property
    def min_grid(self) -> int:
        return required_grid_size(self.zeros)

    def default_grid(self) -> CircleGrid:
        return circle_grid(self.min_grid)

    def check_grid(self, grid: CircleGrid) -> None:
        if grid.size < self.min_grid:
            raise GridMismatchError(f"grid N={grid.size} below the resolution policy N={self.min_grid} for these zeros")

    def table(self, grid: CircleGrid) -> np.ndarray:
        tab = self._tables.get(grid.size)
        if tab is None:
            tab = self(grid.points)
            tab.setflags(write=False)
            self._tables[grid.size] = tab
        return tab

    def gram(self, grid: CircleGrid | None = None) -> np.ndarray:
        grid = grid or self.default_grid()
        tab = self.table(grid)
        return tab.conj() @ tab.T / grid.size

    def __repr__(self):
        return f"TMBasis(degree={self.degree})"


@functools.lru_cache(maxsize=128)
def tm_basis(inner: InnerFunction) -> TMBasis:
    return TMBasis(inner)


@dataclass(frozen=True)
class ModelSpaceElement:
    basis: TMBasis
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != (self.basis.degree,):
            raise ValueError(f"expected {self.basis.degree} coefficients, got shape {c.shape}")
        object.__setattr__(self, "coeffs", c)

    def __call__(self, z):
        out = np.tensordot(self.coeffs, self.basis(z), axes=1)
        return complex(out) if np.ndim(out) == 0 else out

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def samples(self, grid: CircleGrid | None = None) -> BoundaryFunction:
        grid = grid or self.basis.default_grid()
        return BoundaryFunction(grid, self.coeffs @ self.basis.table(grid))


def kernel_eval(I: InnerFunction, lam: complex, z):
    """``k_lam^I(z) = (1 - conj(I(lam)) I(z)) / (1 - conj(lam) z)``."""
    lam = complex(lam)
    if abs(lam) >= 1.0:
        raise DomainError("kernel base point must lie in the open disk")
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) > 1.0 + 1e-12):
        raise DomainError("kernel argument must lie in the closed disk")
    il = np.conj(I(lam))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (1.0 - il * I(z)) / (1.0 - np.conj(lam) * z)
    diag = z == lam
    if np.any(diag):
        out = np.where(diag, kernel_norm_sq(I, lam), out)
    return complex(out) if out.ndim == 0 else out


def kernel_coords(basis: TMBasis, lam) -> np.ndarray:
    """Coordinates of ``k_lam^I`` (interior or boundary point): ``conj(e_k(lam))``."""
    return np.conj(basis(complex(lam)))


def boundary_kernel(I: InnerFunction, zeta: complex) -> ModelSpaceElement:
    """``k_zeta^I`` for ``|zeta| = 1``; reproduces ``f(zeta)`` on K_I."""
    zeta = complex(zeta)
    if abs(abs(zeta) - 1.0) > 1e-12:
        raise DomainError("boundary kernel needs a unimodular point")
    basis = tm_basis(I)
    return ModelSpaceElement(basis, kernel_coords(basis, zeta))


def interior_kernel(I: InnerFunction, lam: complex) -> ModelSpaceElement:
    basis = tm_basis(I)
    return ModelSpaceElement(basis, kernel_coords(basis, lam))


def project(I: InnerFunction, f: BoundaryFunction) -> ModelSpaceElement:
    """``P_I f`` with coordinates ``<f, e_k>``."""
    basis = tm_basis(I)
    basis.check_grid(f.grid)
    tab = basis.table(f.grid)
    return ModelSpaceElement(basis, tab.conj() @ f.samples / f.size)


def eval_element(x: ModelSpaceElement, z):
    return x(z)


def element(I: InnerFunction, coeffs) -> ModelSpaceElement:
    return ModelSpaceElement(tm_basis(I), coeffs)
