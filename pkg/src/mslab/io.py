"""CSV / JSON interchange formats.

* sampled boundary functions: ``j, theta, re, im``
* coefficient vectors: ``k, re, im``
* matrices: ``row, col, re, im`` or a JSON bundle ``{basis, entries}``
* probe tables: ``depth, ray, re, im, norm_sq``

All writers are atomic (temporary file, then rename).
"""
from __future__ import annotations

import csv
import json
import os
import tempfile
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from .boundary import BoundaryFunction
from .disk import circle_grid
from .errors import GridMismatchError

SAMPLE_HEADER = ["j", "theta", "re", "im"]
COEFF_HEADER = ["k", "re", "im"]
MATRIX_HEADER = ["row", "col", "re", "im"]
PROBE_HEADER = ["depth", "ray", "re", "im", "norm_sq"]


@contextmanager
def atomic_open(path, mode="w"):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, mode, newline="" if "b" not in mode else None) as fh:
            yield fh
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_rows(path, header, rows):
    with atomic_open(path) as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def _read_rows(path, header):
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        got = next(r, None)
        if got is None or [h.strip() for h in got] != header:
            raise ValueError(f"{path}: expected header {','.join(header)}, got {got}")
        return [row for row in r if row]


def write_json(path, obj) -> None:
    with atomic_open(path) as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")


def _json_default(obj):
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.generic):
        return _json_default(obj.item()) if isinstance(obj.item(), complex) else obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def write_samples_csv(path, f: BoundaryFunction) -> None:
    theta = f.grid.theta
    _write_rows(path, SAMPLE_HEADER,
                ([j, repr(float(theta[j])), repr(float(v.real)), repr(float(v.imag))] for j, v in enumerate(f.samples)))


def read_samples_csv(path) -> BoundaryFunction:
    rows = _read_rows(path, SAMPLE_HEADER)
    n = len(rows)
    grid = circle_grid(n)
    samples = np.empty(n, dtype=complex)
    seen = np.zeros(n, dtype=bool)
    for row in rows:
        j = int(row[0])
        if not 0 <= j < n or seen[j]:
            raise GridMismatchError(f"{path}: bad or repeated node index {j}")
        if abs(float(row[1]) - grid.theta[j]) > 1e-9:
            raise GridMismatchError(f"{path}: node {j} has theta {row[1]}, expected {grid.theta[j]!r}")
        seen[j] = True
        samples[j] = complex(float(row[2]), float(row[3]))
    return BoundaryFunction(grid, samples)


def write_coeffs_csv(path, coeffs) -> None:
    _write_rows(path, COEFF_HEADER, ([k, repr(float(c.real)), repr(float(c.imag))] for k, c in enumerate(coeffs)))


def read_coeffs_csv(path) -> np.ndarray:
    rows = _read_rows(path, COEFF_HEADER)
    out = np.zeros(len(rows), dtype=complex)
    for row in rows:
        out[int(row[0])] = complex(float(row[1]), float(row[2]))
    return out


def write_matrix_csv(path, a) -> None:
    a = np.asarray(a)
    _write_rows(path, MATRIX_HEADER,
                ([i, j, repr(float(a[i, j].real)), repr(float(a[i, j].imag))] for i in range(a.shape[0]) for j in range(a.shape[1])))


def read_matrix_csv(path) -> np.ndarray:
    rows = _read_rows(path, MATRIX_HEADER)
    n = 1 + max(max(int(r[0]), int(r[1])) for r in rows)
    out = np.zeros((n, n), dtype=complex)
    for r in rows:
        out[int(r[0]), int(r[1])] = complex(float(r[2]), float(r[3]))
    return out


def matrix_bundle(op) -> dict:
    """JSON bundle for an :class:`~mslab.toeplitz.OperatorMatrix`."""
    basis = op.basis
    return {
        "basis": {
            "kind": "takenaka-malmquist",
            "space": op.space,
            "zeros": [[a.real, a.imag] for a in basis.zeros],
            "inner": basis.inner.to_config(),
        },
        "entries": [[[v.real, v.imag] for v in row] for row in op.entries],
    }


def matrix_from_bundle(bundle: dict) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in bundle["entries"]], dtype=complex)


def write_probe_csv(path, rows) -> None:
    """``rows`` of ``(depth, ray, point, norm_sq)``."""
    _write_rows(path, PROBE_HEADER,
                ([repr(float(d)), k, repr(float(p.real)), repr(float(p.imag)), repr(float(v))] for d, k, p, v in rows))


def space_bundle(space, a_ref: str, b_ref: str, residuals: dict) -> dict:
    return {
        "inner": space.inner.to_config(),
        "a_samples_ref": a_ref,
        "b_samples_ref": b_ref,
        "grid_size": space.grid.size,
        "g_zero": space.g0,
        "residuals": residuals,
    }


def write_space(out_dir, space, residuals: dict, stem: str = "space") -> dict:
    """Space bundle plus the pair's sample CSVs."""
    out_dir = Path(out_dir)
    a_ref, b_ref = f"{stem}_a_samples.csv", f"{stem}_b_samples.csv"
    write_samples_csv(out_dir / a_ref, space.pair.a.source)
    write_samples_csv(out_dir / b_ref, space.pair.b.source)
    bundle = space_bundle(space, a_ref, b_ref, residuals)
    write_json(out_dir / f"{stem}.json", bundle)
    return bundle
