"""Closed-form Gaussian Radon transforms of Wiener integrals.

Under the law conditioned to ``L``, ``I_L(h)`` is Gaussian with mean
``<h_L, h>`` and variance ``||P h||^2`` where ``P`` projects onto ``L_0``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .affine import ConditionedLaw, _check_times
from .cm_space import CmVector, derivative_matrix, inner_product
from .errors import GridMismatch, NumericalInconsistency

VARIANCE_CLAMP = 1e-12


@dataclass(frozen=True)
class GaussianLaw1D:
    mean: float
    variance: float

    def to_json(self) -> dict:
        return {"mean": self.mean, "variance": self.variance}


def _clamp(var: float, scale: float) -> float:
    if var >= 0.0:
        return var
    if var >= -VARIANCE_CLAMP * max(1.0, scale):
        return 0.0
    raise NumericalInconsistency(f"variance {var:.3e} is negative beyond rounding (scale {scale:.3e})")


def grt_linear(law: ConditionedLaw, h: CmVector) -> float:
    """``GI(h)|_L = <h_L, h>``."""
    if h.grid != law.grid:
        raise GridMismatch(f"vector on {h.grid.n_steps}-step grid, law on {law.grid.n_steps}")
    return inner_product(law.h_L, h)


def conditioned_cov(law: ConditionedLaw, h1: CmVector, h2: CmVector) -> float:
    """``Cov(I_L(h1), I_L(h2)) = <P h1, P h2>`` in coordinates.

    Uses ``<h1, h2> - F(h1)^T (FF*)^{-1} F(h2)``; the diagonal case is
    clamped at zero for tiny negative rounding.
    """
    F1 = law.constraint_values(h1)
    F2 = law.constraint_values(h2)
    raw = inner_product(h1, h2)
    cov = raw - float(F1 @ law.gram_inverse @ F2) if F1.size else raw
    if h1 is h2:
        return _clamp(cov, raw)
    return cov


def conditioned_law(law: ConditionedLaw, h: CmVector) -> GaussianLaw1D:
    return GaussianLaw1D(grt_linear(law, h), conditioned_cov(law, h, h))


def conditioned_cov_matrix(law: ConditionedLaw, vectors) -> np.ndarray:
    """Covariance matrix of ``I_L(h_i)`` for a list of vectors at once."""
    H = derivative_matrix(vectors)
    if H.shape[1] != law.grid.n_steps:
        raise GridMismatch("vectors and law live on different grids")
    n = law.grid.n_steps
    C = H @ H.T / n
    if law.codim:
        FH = law._vmat @ H.T / n
        C = C - FH.T @ law.gram_inverse @ FH
    return 0.5 * (C + C.T)


def exponential_moment(law: ConditionedLaw, h: CmVector, z: complex) -> complex:
    """``E exp(z I_L(h)) = exp(z <h_L, h> + z^2/2 ||P h||^2)`` for complex ``z``."""
    g = conditioned_law(law, h)
    return cmath.exp(z * g.mean + 0.5 * z * z * g.variance)


def multi_bridge_mean(times, levels, f: CmVector) -> float:
    """Mean of ``int f dB`` given ``B(T_k) = c_k`` by piecewise integration of ``f``.

    Deliberately independent of :func:`grt_linear`: each slope
    ``(c_k - c_{k-1})/(T_k - T_{k-1})`` multiplies ``int_{T_{k-1}}^{T_k} f``.
    """
    times = _check_times(times)
    levels = np.asarray(levels, dtype=np.float64).reshape(-1)
    if levels.shape[0] != len(times):
        raise ValueError(f"{len(times)} times but {levels.shape[0]} levels")
    grid = f.grid
    n = grid.n_steps
    total = 0.0
    prev_i, prev_T, prev_c = 0, 0.0, 0.0
    for T, c in zip(times, levels):
        i = grid.knot_index(T)
        piece = float(np.sum(f.deriv[prev_i:i])) / n
        total += (c - prev_c) / (T - prev_T) * piece
        prev_i, prev_T, prev_c = i, T, c
    return total
