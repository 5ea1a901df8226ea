import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mslab.disk import (
    ApproachSequence,
    CircleGrid,
    StolzRegion,
    circle_grid,
    geometric_depths,
    pseudohyperbolic_distance,
    stolz_contains,
    stolz_sample,
)
from mslab.errors import DomainError

disk_pts = st.builds(lambda r, t: r * np.exp(1j * t), st.floats(0, 0.999), st.floats(0, 2 * np.pi))


@pytest.mark.parametrize("z, w, expected", [(0, 0, 0.0), (0, 0.5, 0.5), (0.75, 0.9375, 0.1875 / 0.296875)])
def test_pseudohyperbolic_distance(z, w, expected):
    assert pseudohyperbolic_distance(z, w) == pytest.approx(expected, abs=1e-15)


@given(disk_pts, disk_pts)
def test_distance_symmetric_and_bounded(z, w):
    d = pseudohyperbolic_distance(z, w)
    assert 0 <= d < 1
    assert d == pytest.approx(pseudohyperbolic_distance(w, z), abs=1e-12)


def test_distance_rejects_outside():
    with pytest.raises(DomainError):
        pseudohyperbolic_distance(0.0, 1.0)


@pytest.mark.parametrize("zeta, alpha, z, inside", [
    (1, 2, 0, True),
    (1, 2, 0.9, True),
    (1, 1.5, 0.9j, False),
])
def test_stolz_contains(zeta, alpha, z, inside):
    assert stolz_contains(StolzRegion(zeta, alpha), z) is inside


def test_stolz_region_validation():
    with pytest.raises(DomainError):
        StolzRegion(0.5, 2.0)
    with pytest.raises(DomainError):
        StolzRegion(1.0, 1.0)


def test_single_ray_is_radial():
    s = stolz_sample(StolzRegion(1, 2), 1, [0.5, 0.9])
    assert np.allclose(s.points[0], [0.5, 0.9], atol=1e-15)
    s = stolz_sample(StolzRegion(1j, 2), 1, [0.5])
    assert np.allclose(s.points[0], [0.5j], atol=1e-15)


def test_three_rays_inside():
    region = StolzRegion(1, 4)
    s = stolz_sample(region, 3, [0.9])
    assert s.points.shape == (3, 1)
    assert all(stolz_contains(region, p) for p in s.flat())


@settings(max_examples=50)
@given(st.floats(1.05, 20), st.integers(1, 9), st.floats(0, 2 * np.pi))
def test_sweep_stays_inside_and_approaches(alpha, rays, t):
    zeta = np.exp(1j * t)
    region = StolzRegion(zeta, alpha)
    depths = geometric_depths(0.5, 40)
    s = stolz_sample(region, rays, depths)
    assert np.all(region.ratio(s.points) < alpha)
    for seq in s.rays:
        assert isinstance(seq, ApproachSequence)
        assert np.all(np.diff(np.abs(seq.points - zeta)) < 0)


def test_depth_cap():
    with pytest.raises(DomainError):
        stolz_sample(StolzRegion(1, 2), 1, [1 - 1e-14])


def test_approach_sequence_must_approach():
    with pytest.raises(ValueError):
        ApproachSequence(np.array([0.9, 0.5]), 1.0)


def test_geometric_depths():
    assert np.allclose(geometric_depths(0.5, 3), [0.5, 0.75, 0.875])


def test_circle_grid():
    g = circle_grid(16)
    assert g is circle_grid(16)
    assert g.points[4] == 1j and g.points[8] == -1 and g.points[0] == 1
    assert g.doubled().size == 32
    with pytest.raises(ValueError):
        CircleGrid(24)
    with pytest.raises(ValueError):
        CircleGrid(8)


@settings(max_examples=30)
@given(st.floats(0, 2 * np.pi), st.floats(1.1, 8), st.integers(1, 7))
def test_sweep_rotation_equivariant(t, alpha, rays):
    zeta = np.exp(1j * t)
    depths = geometric_depths(0.5, 20)
    base = stolz_sample(StolzRegion(1.0, alpha), rays, depths).points
    rot = stolz_sample(StolzRegion(zeta, alpha), rays, depths).points
    assert np.max(np.abs(rot - zeta * base)) < 1e-14


@given(st.floats(1.0001, 50), st.floats(0.001, 0.999))
def test_radial_points_always_inside(alpha, r):
    assert stolz_contains(StolzRegion(1.0, alpha), r)
