"""numba versions of the hot kernels; same contracts as ``_numpy``."""

import math

import numpy as np
from numba import njit

from ._constants import (
    A_CENTRAL, B_CENTRAL, C_TAIL, D_TAIL, E_FAR, F_FAR,
    GOLDEN, MIX1, MIX2, TWO_POW_M53,
)

_A = np.array(A_CENTRAL)
_B = np.array(B_CENTRAL)
_C = np.array(C_TAIL)
_D = np.array(D_TAIL)
_E = np.array(E_FAR)
_F = np.array(F_FAR)

_S11 = np.uint64(11)
_S27 = np.uint64(27)
_S30 = np.uint64(30)
_S31 = np.uint64(31)
_ONE = np.uint64(1)


@njit(cache=True)
def _horner(coeffs, r):
    acc = coeffs[coeffs.shape[0] - 1]
    for i in range(coeffs.shape[0] - 2, -1, -1):
        acc = acc * r + coeffs[i]
    return acc


@njit(cache=True)
def _mix(z):
    z = z ^ (z >> _S30)
    z = z * MIX1
    z = z ^ (z >> _S27)
    z = z * MIX2
    return z ^ (z >> _S31)


@njit(cache=True)
def _ndtri_scalar(p):
    q = p - 0.5
    if abs(q) <= 0.425:
        r = 0.180625 - q * q
        return q * _horner(_A, r) / _horner(_B, r)
    r = math.sqrt(-math.log(min(p, 1.0 - p)))
    if r <= 5.0:
        r -= 1.6
        val = _horner(_C, r) / _horner(_D, r)
    else:
        r -= 5.0
        val = _horner(_E, r) / _horner(_F, r)
    return -val if q < 0.0 else val


@njit(cache=True)
def splitmix64(z):
    out = np.empty_like(z)
    for i in range(z.shape[0]):
        out[i] = _mix(z[i])
    return out


@njit(cache=True)
def counter_uniforms(key, start, count):
    out = np.empty(count, dtype=np.float64)
    base = np.uint64(key) + (np.uint64(start) + _ONE) * GOLDEN
    for i in range(count):
        z = base + np.uint64(i) * GOLDEN
        out[i] = (np.float64(_mix(z) >> _S11) + 0.5) * TWO_POW_M53
    return out


@njit(cache=True)
def ndtri(p):
    out = np.empty_like(p)
    for i in range(p.shape[0]):
        out[i] = _ndtri_scalar(p[i])
    return out


@njit(cache=True)
def counter_normals(key, start_row, n_rows, n_cols):
    out = np.empty((n_rows, n_cols), dtype=np.float64)
    base = np.uint64(key) + (np.uint64(start_row) * np.uint64(n_cols) + _ONE) * GOLDEN
    for i in range(n_rows):
        for j in range(n_cols):
            z = base + np.uint64(i * n_cols + j) * GOLDEN
            u = (np.float64(_mix(z) >> _S11) + 0.5) * TWO_POW_M53
            out[i, j] = _ndtri_scalar(u)
    return out


@njit(cache=True)
def _neumaier_moments(x, shift):
    s1 = 0.0
    c1 = 0.0
    s2 = 0.0
    c2 = 0.0
    for i in range(x.shape[0]):
        d = x[i] - shift
        t = s1 + d
        if abs(s1) >= abs(d):
            c1 += (s1 - t) + d
        else:
            c1 += (d - t) + s1
        s1 = t
        d2 = d * d
        t = s2 + d2
        if s2 >= d2:
            c2 += (s2 - t) + d2
        else:
            c2 += (d2 - t) + s2
        s2 = t
    return s1 + c1, s2 + c2


def shifted_moments(x, shift):
    return _neumaier_moments(np.ascontiguousarray(x, dtype=np.float64), float(shift))


@njit(cache=True)
def _hermite_loop(n, x, u2):
    out = np.empty_like(x)
    for i in range(x.shape[0]):
        xi = x[i]
        prev = 1.0
        cur = xi
        if n == 0:
            cur = 1.0
        for k in range(1, n):
            nxt = xi * cur - k * u2 * prev
            prev = cur
            cur = nxt
        out[i] = cur
    return out


def hermite_values(n, x, u2):
    x = np.asarray(x, dtype=np.float64)
    flat = np.ascontiguousarray(x.ravel())
    return _hermite_loop(int(n), flat, float(u2)).reshape(x.shape)
