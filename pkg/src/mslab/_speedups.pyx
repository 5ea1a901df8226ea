# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops for Blaschke products, Takenaka-Malmquist tables and power series.

Every function mirrors its counterpart in :mod:`mslab._pykernels`;
:mod:`mslab.kernels` decides which one is used. Complex quotients are
written as ``x * conj(y) / |y|^2`` to stay on plain double arithmetic.
"""
import numpy as np

from libc.math cimport log1p, sqrt, hypot


cdef inline double _abs2(double complex z) noexcept nogil:
    return z.real * z.real + z.imag * z.imag


cdef inline double complex _mul(double complex x, double complex y) noexcept nogil:
    return (x.real * y.real - x.imag * y.imag) + 1j * (x.real * y.imag + x.imag * y.real)


cdef inline double complex _factor(double complex a, double complex ca, double complex u,
                                   bint origin, double complex zi) noexcept nogil:
    # b_a(z) = u (a - z) / (1 - ca z),  u = ca / |a|
    cdef double complex den, num
    cdef double inv
    if origin:
        return zi
    den = 1.0 - _mul(ca, zi)
    num = _mul(u, a - zi)
    inv = 1.0 / _abs2(den)
    return _mul(num, den.conjugate()) * inv


cdef _prepare(const double complex[::1] zeros):
    cdef Py_ssize_t n = zeros.shape[0], k
    ca = np.empty(n, dtype=np.complex128)
    u = np.empty(n, dtype=np.complex128)
    origin = np.empty(n, dtype=np.uint8)
    cdef double complex[::1] ca_v = ca, u_v = u
    cdef unsigned char[::1] o_v = origin
    cdef double r
    for k in range(n):
        ca_v[k] = zeros[k].conjugate()
        o_v[k] = zeros[k].real == 0.0 and zeros[k].imag == 0.0
        r = hypot(zeros[k].real, zeros[k].imag)
        u_v[k] = ca_v[k] / r if not o_v[k] else 1.0
    return ca, u, origin


def blaschke_product(const double complex[::1] zeros, const double complex[::1] z):
    cdef Py_ssize_t n = zeros.shape[0], m = z.shape[0], i, k
    cdef double complex acc, zi
    ca_a, u_a, or_a = _prepare(zeros)
    cdef double complex[::1] ca = ca_a, u = u_a
    cdef unsigned char[::1] origin = or_a
    out = np.empty(m, dtype=np.complex128)
    cdef double complex[::1] o = out
    with nogil:
        for i in range(m):
            zi = z[i]
            acc = 1.0
            for k in range(n):
                acc = _mul(acc, _factor(zeros[k], ca[k], u[k], origin[k], zi))
            o[i] = acc
    return out


def blaschke_log_modsq(const double complex[::1] zeros, const double complex[::1] z):
    cdef Py_ssize_t n = zeros.shape[0], m = z.shape[0], i, k
    cdef double s, rz, d
    cdef double complex zi, w
    scale_a = np.empty(n, dtype=np.float64)
    cdef double[::1] scale = scale_a
    for k in range(n):
        scale[k] = 1.0 - _abs2(zeros[k])
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(m):
            zi = z[i]
            rz = hypot(zi.real, zi.imag)
            d = (1.0 - rz) * (1.0 + rz)
            s = 0.0
            for k in range(n):
                w = 1.0 - _mul(zeros[k].conjugate(), zi)
                s += log1p(-scale[k] * d / _abs2(w))
            o[i] = s
    return out


def tm_table(const double complex[::1] zeros, const double complex[::1] z):
    cdef Py_ssize_t n = zeros.shape[0], m = z.shape[0], i, k
    cdef double complex partial, zi, den
    cdef double inv
    ca_a, u_a, or_a = _prepare(zeros)
    cdef double complex[::1] ca = ca_a, u = u_a
    cdef unsigned char[::1] origin = or_a
    scale_a = np.sqrt(1.0 - np.abs(np.asarray(zeros)) ** 2)
    cdef double[::1] scale = scale_a
    out = np.empty((n, m), dtype=np.complex128)
    cdef double complex[:, ::1] o = out
    with nogil:
        for i in range(m):
            zi = z[i]
            partial = 1.0
            for k in range(n):
                den = 1.0 - _mul(ca[k], zi)
                inv = scale[k] / _abs2(den)
                o[k, i] = _mul(partial, den.conjugate()) * inv
                partial = _mul(partial, _factor(zeros[k], ca[k], u[k], origin[k], zi))
    return out


def horner(const double complex[::1] coeffs, const double complex[::1] z):
    cdef Py_ssize_t n = coeffs.shape[0], m = z.shape[0], i, j
    cdef double complex acc, zi
    out = np.empty(m, dtype=np.complex128)
    cdef double complex[::1] o = out
    with nogil:
        for i in range(m):
            zi = z[i]
            acc = 0.0
            for j in range(n - 1, -1, -1):
                acc = _mul(acc, zi) + coeffs[j]
            o[i] = acc
    return out
