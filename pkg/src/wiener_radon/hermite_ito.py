"""Hermite polynomials with a variance parameter and transforms of multiple Ito integrals.

``H_n(x; u2)`` is defined by ``exp(t x - u2 t^2 / 2) = sum_n t^n/n! H_n(x; u2)``
and evaluated by the recurrence ``H_{k+1} = x H_k - k u2 H_{k-1}``.

For a single pinning constraint ``B(T) = c`` the transform of
``J_n(f_1 (x) ... (x) f_n)`` is ``prod_j (int_0^T f_j) * H_n(c/T; 1/T)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.hermite_e import hermegauss

from . import kernels
from .affine import bridge_subspace, closest_point
from .cm_space import CmVector, Grid, inner_product
from .errors import BadT, DegreeTooLarge, GridMismatch, VarianceOrder
from .grt_core import conditioned_law

MAX_DEGREE = 60


def _check_degree(n: int) -> int:
    if int(n) != n or n < 0:
        raise ValueError(f"degree must be a non-negative integer, got {n!r}")
    if n > MAX_DEGREE:
        raise DegreeTooLarge(f"degree {n} exceeds the limit {MAX_DEGREE}")
    return int(n)


def hermite(n: int, x, u2: float):
    """``H_n(x; u2)``; ``x`` may be a scalar or an array."""
    n = _check_degree(n)
    if u2 < 0:
        raise ValueError(f"variance parameter must be >= 0, got {u2!r}")
    if np.ndim(x) == 0:
        prev, cur = 1.0, float(x)
        if n == 0:
            return 1.0
        for k in range(1, n):
            prev, cur = cur, x * cur - k * u2 * prev
        return float(cur)
    return kernels.hermite_values(n, x, u2)


def shift_of_variance_check(n: int, mean: float, var_x: float, u2: float):
    """Both sides of ``E H_n(X; u2) = H_n(E X; u2 - var X)`` for Gaussian ``X``.

    The left side is Gauss-Hermite quadrature with ``ceil((n+2)/2) + 4``
    nodes, exact for the polynomial integrand.
    """
    n = _check_degree(n)
    if var_x < 0:
        raise ValueError(f"var_x must be >= 0, got {var_x!r}")
    if u2 < var_x:
        raise VarianceOrder(f"need u2 >= var_x, got u2={u2!r} < var_x={var_x!r}")
    nodes, weights = hermegauss(math.ceil((n + 2) / 2) + 4)
    xs = mean + math.sqrt(var_x) * nodes
    lhs = float(np.dot(weights, hermite(n, xs, u2))) / math.sqrt(2.0 * math.pi)
    rhs = hermite(n, mean, u2 - var_x)
    return lhs, rhs


def _integral_to(f: CmVector, T: float) -> float:
    if T <= 0.0:
        raise BadT(f"T must lie in (0, 1], got {T!r}")
    if T > 1.0:
        raise BadT(f"T must lie in (0, 1], got {T!r}")
    i = f.grid.knot_index(T)
    return float(np.sum(f.deriv[:i])) / f.grid.n_steps


def grt_power_ito(f: CmVector, n: int, T: float, c: float) -> float:
    """Transform of ``J_n(f^{(x)n})`` on ``{B(T) = c}``: ``(int_0^T f)^n H_n(c/T; 1/T)``."""
    n = _check_degree(n)
    a = _integral_to(f, T)
    return a ** n * hermite(n, c / T, 1.0 / T)


@dataclass(frozen=True, eq=False)
class ProductFunctional:
    """Symmetrized tensor product ``f_1 (x) ... (x) f_n`` of step functions."""

    factors: tuple
    symmetrized: bool = True

    def __post_init__(self):
        factors = tuple(self.factors)
        if not factors:
            raise ValueError("a product functional needs at least one factor")
        grid = factors[0].grid
        if any(f.grid != grid for f in factors[1:]):
            raise GridMismatch("all factors must share one grid")
        object.__setattr__(self, "factors", factors)

    @property
    def order(self) -> int:
        return len(self.factors)

    @property
    def grid(self) -> Grid:
        return self.factors[0].grid

    @classmethod
    def power(cls, f: CmVector, n: int) -> "ProductFunctional":
        return cls((f,) * n)


def grt_symmetric_ito(F, T: float, c: float) -> float:
    """Transform of ``J_n(F)`` on ``{B(T) = c}``.

    ``F`` is a :class:`ProductFunctional` or a sequence of
    ``(coefficient, ProductFunctional)`` pairs read as a linear combination.
    """
    if isinstance(F, ProductFunctional):
        terms = [(1.0, F)]
    else:
        terms = [(float(a), P) for a, P in F]
    total = 0.0
    for a, P in terms:
        n = _check_degree(P.order)
        integral = math.prod(_integral_to(f, T) for f in P.factors)
        total += a * integral * hermite(n, c / T, 1.0 / T)
    return total


def chaos_expansion_coeffs(h: CmVector, N: int, T: float, c: float) -> list:
    """Transforms of the chaos terms ``J_n(hdot^{(x)n}) / n!`` for ``n = 0..N``.

    Their partial sums converge to the transform of ``exp(I(h) - ||h||^2/2)``
    on ``{B(T) = c}``, see :func:`exp_martingale_grt`.
    """
    N = _check_degree(N)
    a = _integral_to(h, T)
    x, u2 = c / T, 1.0 / T
    out = []
    # s_k = a^k H_k(x; u2) / k!, advanced by the Hermite recurrence so that
    # neither a^k nor k! is formed
    s_prev, s = 0.0, 1.0
    for k in range(N + 1):
        out.append(s)
        s_prev, s = s, a / (k + 1) * (x * s - u2 * a * s_prev)
    return out


def exp_martingale_grt(h: CmVector, T: float, c: float) -> float:
    """Closed-form transform of ``exp(I(h) - ||h||^2/2)`` on ``{B(T) = c}``."""
    law = closest_point(bridge_subspace([T], [c], h.grid))
    g = conditioned_law(law, h)
    return math.exp(g.mean + 0.5 * g.variance - 0.5 * inner_product(h, h))
