"""Pure-numpy versions of the hot kernels.

Selected when numba is missing or ``WIENER_RADON_DISABLE_NUMBA=1``.  The
integer hashing is bit-identical to the numba path; floating results agree
to within a few ulps (libm ``log`` may differ by one ulp).
"""

import numpy as np

from ._constants import (
    A_CENTRAL, B_CENTRAL, C_TAIL, D_TAIL, E_FAR, F_FAR,
    GOLDEN, MIX1, MIX2, TWO_POW_M53,
)


def _poly(coeffs, r):
    # Horner, highest degree last in ``coeffs``
    acc = np.full_like(r, coeffs[-1])
    for c in coeffs[-2::-1]:
        acc = acc * r + c
    return acc


def splitmix64(z):
    z = z ^ (z >> np.uint64(30))
    z = z * MIX1
    z = z ^ (z >> np.uint64(27))
    z = z * MIX2
    return z ^ (z >> np.uint64(31))


def counter_uniforms(key, start, count):
    ctr = np.arange(count, dtype=np.uint64) + np.uint64(start) + np.uint64(1)
    z = np.uint64(key) + ctr * GOLDEN
    bits = splitmix64(z) >> np.uint64(11)
    return (bits.astype(np.float64) + 0.5) * TWO_POW_M53


def ndtri(p):
    p = np.asarray(p, dtype=np.float64)
    q = p - 0.5
    out = np.empty_like(p)

    central = np.abs(q) <= 0.425
    qc = q[central]
    r = 0.180625 - qc * qc
    out[central] = qc * _poly(A_CENTRAL, r) / _poly(B_CENTRAL, r)

    tail = ~central
    qt = q[tail]
    r = np.sqrt(-np.log(np.minimum(p[tail], 1.0 - p[tail])))
    near = r <= 5.0
    val = np.empty_like(r)
    rn = r[near] - 1.6
    val[near] = _poly(C_TAIL, rn) / _poly(D_TAIL, rn)
    rf = r[~near] - 5.0
    val[~near] = _poly(E_FAR, rf) / _poly(F_FAR, rf)
    out[tail] = np.where(qt < 0.0, -val, val)
    return out


def counter_normals(key, start_row, n_rows, n_cols):
    u = counter_uniforms(key, start_row * n_cols, n_rows * n_cols)
    return ndtri(u).reshape(n_rows, n_cols)


def shifted_moments(x, shift):
    d = np.asarray(x, dtype=np.float64) - shift
    return float(np.sum(d)), float(np.sum(d * d))


def hermite_values(n, x, u2):
    x = np.asarray(x, dtype=np.float64)
    prev = np.ones_like(x)
    if n == 0:
        return prev
    cur = x.copy()
    for k in range(1, n):
        prev, cur = cur, x * cur - k * u2 * prev
    return cur
