"""Truncated symmetric Fock space over a finite orthonormal base of ``L_0``.

Order-``n`` symmetric tensors are stored in the occupation-number basis
``S_alpha = sym(e_{i_1} (x) ... (x) e_{i_n})``, one coefficient per multiset
``alpha``, with ``<S_alpha, S_beta>_n = delta_{alpha beta} alpha! / n!``.  In
that basis ``v^{(x)n}`` has coefficients ``v^alpha n! / alpha!``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .affine import ConditionedLaw, project
from .cm_space import CmVector, derivative_matrix, inner_product, norm
from .errors import BaseMismatch, NotInL0
from .grt_core import conditioned_law, exponential_moment
from .mc_oracle import Composite, WienerIntegral, compare, DEFAULT_SAMPLES
from .reports import Check, exact_check

MAX_MODES = 8
MAX_ORDER = 30
MAX_COEFFS = 5_000_000
ORTHO_TOL = 1e-10
L0_TOL = 1e-9


@lru_cache(maxsize=None)
def occupation_table(d: int, n: int):
    """Occupation vectors of all multisets of size ``n`` over ``d`` modes and their ``alpha!``."""
    rows = []
    for combo in itertools.combinations_with_replacement(range(d), n):
        occ = [0] * d
        for i in combo:
            occ[i] += 1
        rows.append(occ)
    occ = np.array(rows, dtype=np.int64).reshape(-1, d)
    fact = np.array([math.prod(math.factorial(k) for k in row) for row in occ], dtype=np.float64)
    occ.flags.writeable = False
    fact.flags.writeable = False
    return occ, fact


def _total_coeffs(d: int, N: int) -> int:
    return math.comb(N + d, d)


@dataclass(frozen=True, eq=False)
class TruncatedFock:
    """Element ``sum_{n<=N} x_n`` of the truncated Fock space over ``base``."""

    base: tuple
    max_order: int
    coeffs: tuple

    def __post_init__(self):
        base = tuple(self.base)
        d, N = len(base), int(self.max_order)
        if not 1 <= d <= MAX_MODES:
            raise ValueError(f"need 1..{MAX_MODES} base vectors, got {d}")
        if not 0 <= N <= MAX_ORDER:
            raise ValueError(f"max_order must be in 0..{MAX_ORDER}, got {N}")
        if _total_coeffs(d, N) > MAX_COEFFS:
            raise ValueError(f"{d} modes to order {N} needs {_total_coeffs(d, N)} coefficients")
        if len(self.coeffs) != N + 1:
            raise ValueError(f"need {N + 1} coefficient blocks, got {len(self.coeffs)}")
        for n, c in enumerate(self.coeffs):
            if len(c) != math.comb(n + d - 1, n):
                raise ValueError(f"order {n} needs {math.comb(n + d - 1, n)} coefficients")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "coeffs", tuple(np.asarray(c, dtype=np.float64) for c in self.coeffs))

    @property
    def modes(self) -> int:
        return len(self.base)


def check_orthonormal(base) -> None:
    B = derivative_matrix(base)
    G = B @ B.T / base[0].grid.n_steps
    err = np.max(np.abs(G - np.eye(len(base))))
    if err > ORTHO_TOL:
        raise ValueError(f"base is not orthonormal (max Gram deviation {err:.2e})")


def orthonormal_base(law: ConditionedLaw, vectors) -> tuple:
    """Orthonormal base of ``span(P v_i)`` inside ``L_0`` (null directions dropped)."""
    projected = [project(law, v) for v in vectors]
    n = law.grid.n_steps
    M = derivative_matrix(projected) / math.sqrt(n)
    Q, R = np.linalg.qr(M.T)
    keep = np.abs(np.diag(R)) > 1e-12 * max(1.0, np.max(np.abs(np.diag(R))))
    Q = Q[:, keep]
    base = tuple(CmVector(law.grid, q * math.sqrt(n)) for q in Q.T)
    check_orthonormal(base)
    return base


def coordinates(base, v: CmVector) -> np.ndarray:
    return np.array([inner_product(b, v) for b in base])


def _same_space(x: TruncatedFock, y: TruncatedFock) -> None:
    if x.max_order != y.max_order or x.modes != y.modes:
        raise BaseMismatch("Fock elements have different truncation or mode count")
    if x.base is y.base:
        return
    for a, b in zip(x.base, y.base):
        if a.grid != b.grid or not np.array_equal(a.deriv, b.deriv):
            raise BaseMismatch("Fock elements are built over different bases")


def fock_inner(x: TruncatedFock, y: TruncatedFock) -> float:
    """``sum_n n! <x_n, y_n>_n = sum_n sum_alpha x_alpha y_alpha alpha!``."""
    _same_space(x, y)
    total = 0.0
    for n, (a, b) in enumerate(zip(x.coeffs, y.coeffs)):
        _, fact = occupation_table(x.modes, n)
        total += float(np.sum(a * b * fact))
    return total


def tensor_power(base, v, n: int, max_order: int) -> TruncatedFock:
    """``v^{(x)n}`` as a Fock element (zero in all other orders)."""
    v = np.asarray(v, dtype=np.float64)
    d = len(base)
    blocks = [np.zeros(math.comb(k + d - 1, k)) for k in range(max_order + 1)]
    occ, fact = occupation_table(d, n)
    blocks[n] = np.prod(v ** occ, axis=1) * math.factorial(n) / fact
    return TruncatedFock(base, max_order, tuple(blocks))


def exp_vector(base, v, N: int) -> TruncatedFock:
    """Truncated coherent vector ``sum_{n<=N} v^{(x)n}/n!``; order ``n`` coefficient is ``v^alpha/alpha!``."""
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (len(base),):
        raise ValueError(f"need {len(base)} coordinates, got shape {v.shape}")
    blocks = []
    for n in range(N + 1):
        occ, fact = occupation_table(len(base), n)
        blocks.append(np.prod(v ** occ, axis=1) / fact)
    return TruncatedFock(base, N, tuple(blocks))


def exp_truncation_bound(s: float, N: int) -> float:
    """``sum_{n>N} |s|^n / n!``, the remainder bound for ``<Exp v, Exp w>``."""
    a = abs(s)
    term = a ** (N + 1) / math.factorial(N + 1)
    total, k = 0.0, N + 1
    while term > 0.0 and term > 1e-300 and term > total * 1e-18:
        total += term
        k += 1
        term *= a / k
    return total


def _require_l0(law: ConditionedLaw, v: CmVector, name: str) -> None:
    gap = norm(project(law, v) - v)
    if gap > L0_TOL * max(1.0, norm(v)):
        raise NotInL0(f"{name} is not in L_0 (projection moves it by {gap:.2e})")


def coherent_l2_inner(law: ConditionedLaw, v: CmVector, w: CmVector) -> float:
    """``E[exp(I_L(v) - |v|^2/2) exp(I_L(w) - |w|^2/2)]`` in closed form."""
    m = exponential_moment(law, v + w, 1.0).real
    return math.exp(-0.5 * (inner_product(v, v) + inner_product(w, w))) * m


def verify_UL_isometry(law: ConditionedLaw, v: CmVector, w: CmVector,
                       n_samples: int = DEFAULT_SAMPLES, seed: int = 0) -> list:
    """Closed-form and Monte Carlo checks of ``<U_L Exp v, U_L Exp w> = exp(<v, w>)``."""
    _require_l0(law, v, "v")
    _require_l0(law, w, "w")
    target = math.exp(inner_product(v, w))
    nv, nw = inner_product(v, v), inner_product(w, w)
    closed = exact_check("isometry.closed_form", coherent_l2_inner(law, v, w), target)
    product = Composite(
        lambda a, b: np.exp(a - 0.5 * nv) * np.exp(b - 0.5 * nw),
        (WienerIntegral(v), WienerIntegral(w)),
    )
    mc = compare(law, product, target, n_samples, seed, name="isometry.mc")
    return [closed, mc]


def verify_UL_linear_term(law: ConditionedLaw, v: CmVector,
                          n_samples: int = DEFAULT_SAMPLES, seed: int = 0) -> list:
    """``I_L(v)`` has mean 0 and variance ``||v||^2`` for ``v`` in ``L_0``."""
    _require_l0(law, v, "v")
    nv = inner_product(v, v)
    g = conditioned_law(law, v)
    checks = [
        exact_check("linear.closed_mean", g.mean, 0.0),
        exact_check("linear.closed_variance", g.variance, nv),
    ]
    wi = WienerIntegral(v)
    checks.append(compare(law, wi, 0.0, n_samples, seed, name="linear.mc_mean"))
    checks.append(compare(law, Composite(np.square, (wi,)), nv, n_samples, seed,
                          name="linear.mc_second_moment"))
    return checks


def coherent_gram_certificate(law: ConditionedLaw, vectors, N: int = MAX_ORDER) -> tuple:
    """Gram matrices of ``Exp(v_i)`` in truncated Fock space and of their images in ``L2``.

    Vectors must already lie in ``L_0``.  Returns ``(fock_gram, l2_gram, max_rel_err)``.
    """
    vectors = list(vectors)
    for i, v in enumerate(vectors):
        _require_l0(law, v, f"vectors[{i}]")
    base = orthonormal_base(law, vectors)
    coords = [coordinates(base, v) for v in vectors]
    exps = [exp_vector(base, c, N) for c in coords]
    k = len(vectors)
    fock = np.empty((k, k))
    l2 = np.empty((k, k))
    for i in range(k):
        for j in range(k):
            fock[i, j] = fock_inner(exps[i], exps[j])
            l2[i, j] = coherent_l2_inner(law, vectors[i], vectors[j])
    err = float(np.max(np.abs(fock - l2) / np.maximum(1.0, np.abs(l2))))
    return fock, l2, err


def gram_certificate_check(law: ConditionedLaw, vectors, N: int = MAX_ORDER,
                           rtol: float = 1e-8) -> Check:
    fock, l2, err = coherent_gram_certificate(law, vectors, N)
    i, j = np.unravel_index(np.argmax(np.abs(fock - l2)), fock.shape)
    ok = err <= rtol
    return Check("fock.gram_certificate", float(l2[i, j]), float(fock[i, j]), 0.0,
                 0.0 if ok else math.inf, bool(ok))
