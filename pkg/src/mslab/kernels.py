"""Kernel dispatch: compiled extension when importable, numpy otherwise.

Set ``MSLAB_PURE_PYTHON=1`` before import to force the numpy kernels.
All entry points accept array-likes and return arrays of the input shape
(``tm_table`` prepends the basis axis).
"""
import logging
import os

import numpy as np

from . import _pykernels

logger = logging.getLogger(__name__)

_compiled = None
if not os.environ.get("MSLAB_PURE_PYTHON"):
    try:
        from . import _speedups as _compiled
    except ImportError:  # extension not built
        logger.debug("mslab._speedups unavailable, using numpy kernels")

BACKEND = "cython" if _compiled is not None else "python"
_impl = _compiled if _compiled is not None else _pykernels


def _flat(z):
    z = np.asarray(z, dtype=np.complex128)
    return z.shape, np.ascontiguousarray(z.ravel())


def _zeros(zeros):
    return np.ascontiguousarray(np.asarray(zeros, dtype=np.complex128).ravel())


def blaschke_product(zeros, z, impl=None):
    """Product of ``b_a(z) = (conj(a)/|a|)(a - z)/(1 - conj(a) z)`` over ``zeros`` (``b_0(z) = z``)."""
    shape, flat = _flat(z)
    return (impl or _impl).blaschke_product(_zeros(zeros), flat).reshape(shape)


def blaschke_log_modsq(zeros, z, impl=None):
    """``log |B(z)|^2`` from ``1 - |b_a(z)|^2 = (1-|a|^2)(1-|z|^2)/|1-conj(a)z|^2``.

    Accurate for points near the circle, where forming ``|B|`` first would
    cancel catastrophically.
    """
    shape, flat = _flat(z)
    return (impl or _impl).blaschke_log_modsq(_zeros(zeros), flat).reshape(shape)


def tm_table(zeros, z, impl=None):
    """Takenaka-Malmquist functions ``e_k(z)`` for the ordered ``zeros``; shape ``(n,) + z.shape``."""
    shape, flat = _flat(z)
    zs = _zeros(zeros)
    return (impl or _impl).tm_table(zs, flat).reshape((zs.shape[0],) + shape)


def horner(coeffs, z, impl=None):
    """Evaluate the power series ``sum_j coeffs[j] z**j``.

    Defaults to the numpy kernel on every backend: its blocked form runs on
    BLAS and beats the compiled scalar loop (see ``benchmarks/``).
    """
    shape, flat = _flat(z)
    c = np.ascontiguousarray(np.asarray(coeffs, dtype=np.complex128))
    return (impl or _pykernels).horner(c, flat).reshape(shape)


def implementations():
    """Available backends by name, for benchmarks and cross-checks."""
    out = {"python": _pykernels}
    if _compiled is not None:
        out["cython"] = _compiled
    return out
