import json

import numpy as np
import pytest

from mslab import InnerFunction, io
from mslab.boundary import BoundaryFunction
from mslab.disk import circle_grid
from mslab.errors import GridMismatchError
from mslab.nearly_invariant import build_space, trivial_pair
from mslab.toeplitz import compressed_shift


def test_samples_roundtrip(tmp_path, rng):
    f = BoundaryFunction(circle_grid(32), rng.normal(size=32) + 1j * rng.normal(size=32))
    io.write_samples_csv(tmp_path / "f.csv", f)
    assert (tmp_path / "f.csv").read_text().splitlines()[0] == "j,theta,re,im"
    g = io.read_samples_csv(tmp_path / "f.csv")
    assert np.array_equal(g.samples, f.samples)


def test_samples_reject_wrong_theta(tmp_path):
    (tmp_path / "bad.csv").write_text("j,theta,re,im\n" + "".join(f"{j},0.5,1,0\n" for j in range(16)))
    with pytest.raises(GridMismatchError):
        io.read_samples_csv(tmp_path / "bad.csv")


def test_header_checked(tmp_path):
    (tmp_path / "x.csv").write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        io.read_coeffs_csv(tmp_path / "x.csv")


def test_coeffs_and_matrix_roundtrip(tmp_path, rng):
    c = rng.normal(size=5) + 1j * rng.normal(size=5)
    io.write_coeffs_csv(tmp_path / "c.csv", c)
    assert np.array_equal(io.read_coeffs_csv(tmp_path / "c.csv"), c)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    io.write_matrix_csv(tmp_path / "a.csv", a)
    assert np.array_equal(io.read_matrix_csv(tmp_path / "a.csv"), a)


def test_matrix_bundle(tmp_path):
    op = compressed_shift(InnerFunction.monomial(2))
    bundle = io.matrix_bundle(op)
    io.write_json(tmp_path / "m.json", bundle)
    loaded = json.loads((tmp_path / "m.json").read_text())
    assert set(loaded) == {"basis", "entries"}
    assert np.allclose(io.matrix_from_bundle(loaded), [[0, 0], [1, 0]])


def test_space_bundle(tmp_path):
    M = build_space(InnerFunction.monomial(2), trivial_pair(circle_grid(16)))
    bundle = io.write_space(tmp_path, M, {"isometry": 0.0})
    assert bundle["grid_size"] == 16 and bundle["g_zero"] == 1.0
    a = io.read_samples_csv(tmp_path / bundle["a_samples_ref"])
    assert np.allclose(a.samples, 1)


def test_atomic_write_leaves_no_temp_on_failure(tmp_path):
    with pytest.raises(RuntimeError):
        with io.atomic_open(tmp_path / "x.txt") as fh:
            fh.write("partial")
            raise RuntimeError
    assert list(tmp_path.iterdir()) == []
