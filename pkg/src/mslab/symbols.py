"""Random test objects: symbols, inner functions, disk points, model-space elements."""
from __future__ import annotations

import numpy as np

from .boundary import BoundaryFunction
from .disk import CircleGrid, circle_grid
from .inner import InnerFunction
from .model_space import tm_basis


def _grid(grid) -> CircleGrid:
    return grid if isinstance(grid, CircleGrid) else circle_grid(int(grid))


def _cnormal(rng, size):
    return rng.normal(size=size) + 1j * rng.normal(size=size)


def trig_polynomial(grid, rng, degree: int = 3) -> BoundaryFunction:
    """``sum_{|k| <= degree} c_k z^k`` with complex Gaussian coefficients, unit L2 norm."""
    c = _cnormal(rng, 2 * degree + 1)
    c /= np.linalg.norm(c)
    return BoundaryFunction.from_coefficients(_grid(grid), {k: c[k + degree] for k in range(-degree, degree + 1)})


def standard_symbols(grid, rng, count: int = 5, degree: int = 3) -> dict:
    """``1, z, conj(z)`` plus ``count`` random trigonometric polynomials."""
    grid = _grid(grid)
    z = grid.points
    out = {
        "one": BoundaryFunction(grid, np.ones(grid.size, dtype=complex)),
        "z": BoundaryFunction(grid, z.copy()),
        "zbar": BoundaryFunction(grid, z.conj()),
    }
    for j in range(count):
        out[f"trig{j}"] = trig_polynomial(grid, rng, degree)
    return out


def null_symbol(I: InnerFunction, grid, rng, degree: int = 4) -> BoundaryFunction:
    """``I h1 + conj(I h2)`` with analytic polynomials ``h1, h2``: A_phi = 0."""
    grid = _grid(grid)
    z = grid.points
    h1 = np.polyval(_cnormal(rng, degree + 1), z)
    h2 = np.polyval(_cnormal(rng, degree + 1), z)
    Iz = I(z)
    phi = Iz * h1 + np.conj(Iz * h2)
    return BoundaryFunction(grid, phi / np.sqrt(np.mean(np.abs(phi) ** 2)))


def model_space_symbol(I: InnerFunction, grid, rng) -> BoundaryFunction:
    """Unit-norm random element of K_I, used as a symbol."""
    grid = _grid(grid)
    tab = tm_basis(I).table(grid)
    c = _cnormal(rng, tab.shape[0])
    c /= np.linalg.norm(c)
    return BoundaryFunction(grid, c @ tab)


def random_disk_points(rng, count: int, rmax: float = 0.95) -> np.ndarray:
    """Area-uniform points in the disk of radius ``rmax``."""
    r = rmax * np.sqrt(rng.uniform(size=count))
    return r * np.exp(2j * np.pi * rng.uniform(size=count))


def random_blaschke(rng, degree: int, rmax: float = 0.9, origin: bool = True) -> InnerFunction:
    """Finite Blaschke product of ``degree``; one zero at the origin when ``origin``."""
    if degree < 1:
        raise ValueError("degree must be positive")
    free = degree - 1 if origin else degree
    zeros = list(random_disk_points(rng, free, rmax))
    if origin:
        zeros.insert(0, 0.0)
    return InnerFunction.blaschke(zeros)


def random_coeffs(rng, n: int, count: int | None = None) -> np.ndarray:
    shape = n if count is None else (count, n)
    return _cnormal(rng, shape)


def boundary_points(rng, count: int) -> np.ndarray:
    return np.exp(2j * np.pi * rng.uniform(size=count))
