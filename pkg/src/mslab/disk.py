"""Geometry of the unit disk: pseudohyperbolic distance, Stolz regions, circle grids."""
from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

MIN_GRID = 16
UNIMODULAR_TOL = 1e-14
# Rays stay this fraction inside the limiting approach sector.
SECTOR_MARGIN = 0.05
# 1 - |z| loses all accuracy past this gap.
MIN_BOUNDARY_GAP = 1e-13


def _require_disk(*points):
    for p in points:
        if np.any(np.abs(np.asarray(p)) >= 1.0):
            raise DomainError(f"point(s) not in the open unit disk: {p!r}")


def pseudohyperbolic_distance(z, w):
    """``|z - w| / |1 - conj(w) z|`` for ``z, w`` in the open disk (broadcasts)."""
    _require_disk(z, w)
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    out = np.abs(z - w) / np.abs(1.0 - np.conj(w) * z)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class StolzRegion:
    """``{z : |z - vertex| / (1 - |z|) < aperture}``."""

    vertex: complex
    aperture: float

    def __post_init__(self):
        object.__setattr__(self, "vertex", complex(self.vertex))
        if abs(abs(self.vertex) - 1.0) > UNIMODULAR_TOL:
            raise DomainError(f"Stolz vertex must be unimodular, got {self.vertex!r}")
        if not self.aperture > 1.0:
            raise DomainError(f"Stolz aperture must exceed 1, got {self.aperture!r}")

    @property
    def half_angle(self) -> float:
        """Limiting half-angle of the approach sector at the vertex."""
        return float(np.arccos(1.0 / self.aperture))

    def ratio(self, z):
        z = np.asarray(z, dtype=complex)
        return np.abs(z - self.vertex) / (1.0 - np.abs(z))


def stolz_contains(region: StolzRegion, z) -> bool:
    _require_disk(z)
    return bool(region.ratio(z) < region.aperture)


@dataclass(frozen=True)
class ApproachSequence:
    points: np.ndarray
    vertex: complex

    def __post_init__(self):
        d = np.abs(self.points - self.vertex)
        if np.any(np.diff(d) >= 0):
            raise DomainError("approach sequence must move strictly toward its vertex")

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


@dataclass(frozen=True)
class StolzSweep:
    """Deterministic family of approach rays inside one Stolz region.

    ``points[k, i]`` lies on ray ``k`` at modulus ``depths[i]``; ray ``k``
    is the level set ``|z - vertex| / (1 - |z|) = 1 / cos(angles[k])``, so
    ``angles[k]`` is its limiting approach angle and ``angles[0] == 0`` is
    the radius.
    """

    region: StolzRegion
    angles: np.ndarray
    depths: np.ndarray
    points: np.ndarray

    def ray(self, k: int) -> ApproachSequence:
        return ApproachSequence(self.points[k], self.region.vertex)

    @property
    def rays(self) -> list[ApproachSequence]:
        return [self.ray(k) for k in range(len(self.angles))]

    @property
    def radial(self) -> np.ndarray:
        return self.points[0]

    def flat(self) -> np.ndarray:
        return self.points.ravel()


def ray_angles(region: StolzRegion, rays: int, shallowest: float | None = None) -> np.ndarray:
    """Radial ray first, then alternating +h, -h, +2h, -2h, ... up to the sector margin.

    A level-set ray of ratio ``rho`` meets the circle ``|z| = r`` only when
    ``rho <= (1 + r) / (1 - r)``; passing the ``shallowest`` depth narrows
    the fan so that every ray exists at every depth.
    """
    if rays < 1:
        raise ValueError("need at least one ray")
    half = region.half_angle
    if shallowest is not None:
        half = min(half, float(np.arccos((1.0 - shallowest) / (1.0 + shallowest))))
    top = (1.0 - SECTOR_MARGIN) * half
    if rays == 1:
        return np.zeros(1)
    h = top / (rays // 2)
    out = [0.0]
    for j in range(1, rays):
        step = (j + 1) // 2
        out.append(step * h if j % 2 else -step * h)
    return np.asarray(out)


def stolz_sample(region: StolzRegion, rays: int, depths) -> StolzSweep:
    depths = np.asarray(depths, dtype=float)
    if depths.ndim != 1 or depths.size == 0:
        raise ValueError("depths must be a non-empty 1-d sequence")
    if np.any(depths <= 0) or np.any(depths >= 1):
        raise DomainError("depths must lie in (0, 1)")
    if np.any(1.0 - depths < MIN_BOUNDARY_GAP):
        raise DomainError(f"depths closer than {MIN_BOUNDARY_GAP:g} to the circle are not resolved in double precision")
    if np.any(np.diff(depths) <= 0):
        raise ValueError("depths must increase strictly toward 1")
    angles = ray_angles(region, rays, float(depths[0]))
    rho = 1.0 / np.cos(angles)
    t = 1.0 - depths
    # |r e^{ipsi} - 1| = rho (1 - r)  <=>  sin^2(psi/2) = (rho^2 - 1) t^2 / (4 r)
    half = t[None, :] * np.sqrt((rho[:, None] ** 2 - 1.0) / (4.0 * depths[None, :]))
    if np.any(half > 1.0):
        raise DomainError("internal: Stolz ray does not reach the requested depth")
    psi = 2.0 * np.arcsin(half) * np.sign(angles)[:, None]
    points = region.vertex * depths[None, :] * np.exp(1j * psi)
    # radial ray exactly on the radius
    points[0] = region.vertex * depths
    ratio = region.ratio(points)
    if np.any(ratio >= region.aperture):
        raise DomainError("internal: generated Stolz sample left its region")
    return StolzSweep(region, angles, depths, points)


def geometric_depths(q: float = 0.5, count: int = 40, start: int = 1) -> np.ndarray:
    """Depth schedule ``1 - q**n`` for ``n = start .. start + count - 1``."""
    if not 0.0 < q < 1.0:
        raise ValueError("q must lie in (0, 1)")
    n = np.arange(start, start + count, dtype=float)
    return 1.0 - q ** n


@dataclass(frozen=True)
class CircleGrid:
    """Uniform nodes ``theta_j = 2 pi j / size`` on the unit circle."""

    size: int

    def __post_init__(self):
        n = int(self.size)
        if n < MIN_GRID or n & (n - 1):
            raise ValueError(f"grid size must be a power of two >= {MIN_GRID}, got {self.size}")
        object.__setattr__(self, "size", n)

    @functools.cached_property
    def theta(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.size) / self.size

    @functools.cached_property
    def points(self) -> np.ndarray:
        # exact values at the quarter nodes keep symmetric test data symmetric
        pts = np.exp(1j * self.theta)
        q = self.size // 4
        pts[0], pts[q], pts[2 * q], pts[3 * q] = 1, 1j, -1, -1j
        return pts

    def doubled(self) -> "CircleGrid":
        return circle_grid(2 * self.size)


@functools.lru_cache(maxsize=None)
def circle_grid(size: int) -> CircleGrid:
    return CircleGrid(size)
