"""Monte Carlo oracle: conditioned Gaussian paths on the grid.

The law is rebuilt from scratch at grid level (Brownian covariance
``min(t_i, t_j)`` conditioned on linear constraints of the increments) so it
checks the Hilbert-space formulas rather than reusing them.  Sampling uses the
counter-based streams from :mod:`wiener_radon.rng`; results do not depend on
the chunk size or on the number of threads beyond summation rounding.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from . import kernels, rng
from .affine import ConditionedLaw, SINGULAR_RTOL
from .cm_space import CmVector, Grid, inner_product, kernel_vector
from .errors import GridMismatch, IndefiniteCovariance, SingularGram, UnknownFunctional
from .grt_core import conditioned_cov_matrix
from .hermite_ito import ProductFunctional, hermite
from .reports import Check

DEFAULT_GRID = 256
DEFAULT_SAMPLES = 100_000
DEFAULT_CHUNK = 4096
NEGATIVE_EIG_RTOL = 1e-9
NULL_EIG_RTOL = 1e-12
Z_PASS = 4.0
DEGENERATE_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class PathSample:
    """Path values at knots ``t_1 .. t_n`` (``t_0 = 0`` is implicit)."""

    grid: Grid
    values: np.ndarray


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    n_samples: int
    seed: int


class DiscreteGaussian(NamedTuple):
    mean: np.ndarray
    cov: np.ndarray


def _threads() -> int:
    raw = os.environ.get("WIENER_RADON_THREADS", "").strip()
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


def discretize_law(law: ConditionedLaw) -> DiscreteGaussian:
    """Mean and covariance of ``(B(t_1), ..., B(t_n))`` under the conditioned law.

    Row ``j`` of the constraint matrix ``A`` applies ``<v_j, .>`` to the path
    through its increments: ``A = V D`` with ``D`` the differencing matrix.
    """
    grid = law.grid
    n = grid.n_steps
    t = grid.knots[1:]
    prior = np.minimum.outer(t, t)
    if law.codim == 0:
        return DiscreteGaussian(np.zeros(n), prior)
    V = np.vstack([v.deriv for v in law.subspace.constraints])
    D = np.eye(n) - np.eye(n, k=-1)
    A = V @ D
    S = prior @ A.T
    G = A @ S
    G = 0.5 * (G + G.T)
    w, Q = np.linalg.eigh(G)
    if w[0] <= SINGULAR_RTOL * w[-1]:
        raise SingularGram(float(w[0]), float(w[-1]))
    Ginv = (Q / w) @ Q.T
    mean = S @ (Ginv @ law.levels)
    cov = prior - S @ Ginv @ S.T
    return DiscreteGaussian(mean, 0.5 * (cov + cov.T))


def discrete_consistency(law: ConditionedLaw) -> tuple:
    """Max abs deviations of the grid law from ``h_L(t_i)`` and ``<P K_{t_i}, P K_{t_j}>``."""
    disc = discretize_law(law)
    grid = law.grid
    kernels_ = [kernel_vector(s, grid) for s in grid.knots[1:]]
    mean_err = float(np.max(np.abs(disc.mean - law.h_L.values()[1:])))
    cov_err = float(np.max(np.abs(disc.cov - conditioned_cov_matrix(law, kernels_))))
    return mean_err, cov_err


class PathSampler:
    """Draws conditioned paths as ``mean + Z @ factor.T`` with ``Z`` from a seeded stream."""

    def __init__(self, law: ConditionedLaw, seed: int):
        self.grid = law.grid
        self.seed = int(seed)
        mean, cov = discretize_law(law)
        w, Q = np.linalg.eigh(cov)
        top = max(float(w[-1]), 0.0)
        if w[0] < -NEGATIVE_EIG_RTOL * top:
            raise IndefiniteCovariance(
                f"covariance eigenvalue {w[0]:.3e} below -{NEGATIVE_EIG_RTOL:g} * {top:.3e}"
            )
        # rounding leaves ~eps * top on pinned directions; treat as exact zeros
        w = np.where(w <= NULL_EIG_RTOL * top, 0.0, w)
        self.mean = mean
        self.factor_t = np.ascontiguousarray((Q * np.sqrt(w)).T)

    def block(self, start: int, count: int) -> np.ndarray:
        Z = rng.normal_block(self.seed, start, count, self.grid.n_steps)
        return Z @ self.factor_t + self.mean


def sample_paths(law: ConditionedLaw, n_samples: int, seed: int, chunk_size: int = DEFAULT_CHUNK):
    """Yield ``n_samples`` :class:`PathSample` objects, deterministic in ``seed``."""
    sampler = PathSampler(law, seed)
    for start in range(0, n_samples, chunk_size):
        block = sampler.block(start, min(chunk_size, n_samples - start))
        for row in block:
            row.flags.writeable = False
            yield PathSample(law.grid, row)


# --------------------------------------------------------------------------
# functionals of a block of paths (rows = samples, columns = t_1 .. t_n)


def _increment_weights(f: CmVector, grid: Grid) -> np.ndarray:
    if f.grid != grid:
        raise GridMismatch(f"functional on {f.grid.n_steps}-step grid, law on {grid.n_steps}")
    d = f.deriv
    return d - np.append(d[1:], 0.0)


class Functional:
    def values(self, paths: np.ndarray, grid: Grid) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class WienerIntegral(Functional):
    """``sum_i f_i (B(t_i) - B(t_{i-1}))``."""

    f: CmVector

    def values(self, paths, grid):
        return paths @ _increment_weights(self.f, grid)


@dataclass(frozen=True, eq=False)
class HermiteOfWiener(Functional):
    """``H_n(int f dB; u2)``; ``u2`` defaults to ``||f||^2``."""

    n: int
    f: CmVector
    u2: float | None = None

    def values(self, paths, grid):
        u2 = inner_product(self.f, self.f) if self.u2 is None else self.u2
        return hermite(self.n, WienerIntegral(self.f).values(paths, grid), u2)


@dataclass(frozen=True, eq=False)
class ExpOfWiener(Functional):
    """``exp(z int f dB)`` for real ``z``."""

    z: float
    f: CmVector

    def values(self, paths, grid):
        return np.exp(self.z * WienerIntegral(self.f).values(paths, grid))


@dataclass(frozen=True, eq=False)
class PathEval(Functional):
    """``B(t)`` at a knot ``t``."""

    t: float

    def values(self, paths, grid):
        i = grid.knot_index(self.t)
        if i == 0:
            return np.zeros(paths.shape[0])
        return paths[:, i - 1].copy()


@dataclass(frozen=True, eq=False)
class SymmetricIto(Functional):
    """``J_n(f_1 (x)^ ... (x)^ f_n)`` by polarization into Hermite functions.

    Uses ``f_1 (x)^ ... (x)^ f_n = (2^n n!)^{-1} sum_eps (prod eps) g_eps^{(x)n}``
    with ``g_eps = sum_j eps_j f_j`` and ``J_n(g^{(x)n}) = H_n(int g dB; ||g||^2)``.
    """

    product: ProductFunctional

    def values(self, paths, grid):
        fs = self.product.factors
        n = len(fs)
        total = np.zeros(paths.shape[0])
        for tail in itertools.product((1.0, -1.0), repeat=n - 1):
            eps = (1.0,) + tail  # eps and -eps give equal terms
            g = fs[0]
            for e, f in zip(tail, fs[1:]):
                g = g + e * f
            total += math.prod(eps) * HermiteOfWiener(n, g).values(paths, grid)
        return total * (2.0 / (2.0 ** n * math.factorial(n)))


@dataclass(frozen=True, eq=False)
class Composite(Functional):
    """Pointwise ``fn(*parts)`` of finitely many other functionals."""

    fn: Callable
    parts: tuple

    def values(self, paths, grid):
        return np.asarray(self.fn(*[p.values(paths, grid) for p in self.parts]), dtype=np.float64)


def _evaluate(functional, paths, grid) -> np.ndarray:
    if not isinstance(functional, Functional):
        raise UnknownFunctional(f"unsupported functional {functional!r}")
    return functional.values(paths, grid)


def estimate_many(law: ConditionedLaw, functionals, n_samples: int, seed: int,
                  chunk_size: int = DEFAULT_CHUNK, threads: int | None = None) -> list:
    """Estimate several functionals from one shared set of sampled paths."""
    functionals = list(functionals)
    for fn in functionals:
        if not isinstance(fn, Functional):
            raise UnknownFunctional(f"unsupported functional {fn!r}")
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    sampler = PathSampler(law, seed)
    grid = law.grid
    first = sampler.block(0, 1)
    # shift by the first sample's value to keep the second moment well conditioned
    shifts = [float(_evaluate(fn, first, grid)[0]) for fn in functionals]

    def work(start):
        block = sampler.block(start, min(chunk_size, n_samples - start))
        return [kernels.shifted_moments(_evaluate(fn, block, grid), s)
                for fn, s in zip(functionals, shifts)]

    starts = range(0, n_samples, chunk_size)
    workers = min(threads or _threads(), len(starts))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, starts))
    else:
        parts = [work(s) for s in starts]

    out = []
    for k, shift in enumerate(shifts):
        s1 = math.fsum(p[k][0] for p in parts)
        s2 = math.fsum(p[k][1] for p in parts)
        mean = shift + s1 / n_samples
        if n_samples > 1:
            var = max((s2 - s1 * s1 / n_samples) / (n_samples - 1), 0.0)
            se = math.sqrt(var / n_samples)
        else:
            se = 0.0
        out.append(McEstimate(mean, se, n_samples, int(seed)))
    return out


def estimate(law: ConditionedLaw, functional, n_samples: int = DEFAULT_SAMPLES, seed: int = 0,
             chunk_size: int = DEFAULT_CHUNK, threads: int | None = None) -> McEstimate:
    """Sample-mean estimate of ``E functional`` with its standard error."""
    return estimate_many(law, [functional], n_samples, seed, chunk_size, threads)[0]


def judge(name: str, closed_form: float, est: McEstimate, z_pass: float = Z_PASS) -> Check:
    """Turn an estimate into a pass/fail record.

    A numerically zero standard error means a deterministic functional: then
    ``z`` is 0 when the values agree within 1e-9 (relative), else infinite.
    """
    diff = est.mean - closed_form
    scale = max(1.0, abs(closed_form))
    if est.std_error <= 1e-12 * max(1.0, abs(est.mean)):
        ok = abs(diff) <= DEGENERATE_RTOL * scale
        z = 0.0 if ok else math.inf
    else:
        z = diff / est.std_error
        ok = abs(z) <= z_pass
    return Check(name, float(closed_form), est.mean, est.std_error, float(z), bool(ok))


def compare(law: ConditionedLaw, functional, closed_form: float, n_samples: int = DEFAULT_SAMPLES,
            seed: int = 0, name: str = "compare", **kwargs) -> Check:
    """Estimate ``functional`` and judge it against ``closed_form`` (pass iff ``|z| <= 4``)."""
    return judge(name, closed_form, estimate(law, functional, n_samples, seed, **kwargs))
