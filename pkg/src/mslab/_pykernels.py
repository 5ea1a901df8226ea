"""Pure numpy implementations of the hot kernels.

Semantics match :mod:`mslab._speedups` function for function.
"""
import numpy as np

# Upper bound on the size of the power table built by ``horner``.
_HORNER_BLOCK = 1 << 20


def _factor(a, z):
    if a == 0:
        return z
    ca = np.conj(a)
    return (ca / abs(a)) * (a - z) / (1.0 - ca * z)


def blaschke_product(zeros, z):
    out = np.ones(z.shape, dtype=np.complex128)
    for a in zeros:
        out *= _factor(a, z)
    return out


def blaschke_log_modsq(zeros, z):
    r = np.abs(z)
    d = (1.0 - r) * (1.0 + r)
    out = np.zeros(z.shape, dtype=np.float64)
    with np.errstate(divide="ignore"):
        for a in zeros:
            t = (1.0 - abs(a) ** 2) * d / np.abs(1.0 - np.conj(a) * z) ** 2
            out += np.log1p(-t)
    return out


def tm_table(zeros, z):
    out = np.empty((len(zeros), z.shape[0]), dtype=np.complex128)
    partial = np.ones(z.shape, dtype=np.complex128)
    for k, a in enumerate(zeros):
        out[k] = np.sqrt(1.0 - abs(a) ** 2) * partial / (1.0 - np.conj(a) * z)
        partial = partial * _factor(a, z)
    return out


def horner(coeffs, z):
    n, m = coeffs.shape[0], z.shape[0]
    if n == 0:
        return np.zeros(z.shape, dtype=np.complex128)
    if n <= 32 or m >= n:
        acc = np.zeros(z.shape, dtype=np.complex128)
        for c in coeffs[::-1]:
            acc = acc * z + c
        return acc
    # few points, long series: Horner in z**B over blocks of B coefficients
    B = int(min(n, max(32, _HORNER_BLOCK // max(m, 1))))
    powers = np.empty((B, m), dtype=np.complex128)
    powers[0] = 1.0
    powers[1:] = z
    np.cumprod(powers, axis=0, out=powers)
    zB = powers[-1] * z
    blocks = -(-n // B)
    padded = np.zeros(blocks * B, dtype=np.complex128)
    padded[:n] = coeffs
    acc = np.zeros(m, dtype=np.complex128)
    for blk in padded.reshape(blocks, B)[::-1]:
        acc = acc * zB + blk @ powers
    return acc
