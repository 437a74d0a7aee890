"""Named verification suites: closed forms checked against independent routes.

Each suite returns a list of :class:`~wiener_radon.reports.Check` records in a
fixed order, so repeated runs with the same seed serialize byte-identically.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.polynomial.hermite_e import hermeval

from .affine import (
    AffineSubspace, bridge_subspace, closest_point, orthonormal_bridge_basis, project,
)
from .cm_space import CmVector, Grid, grid_for_times, kernel_vector, norm
from .fock_check import (
    exp_truncation_bound, exp_vector, fock_inner, gram_certificate_check,
    orthonormal_base, verify_UL_isometry, verify_UL_linear_term,
)
from .grt_core import (
    conditioned_cov, conditioned_law, exponential_moment, grt_linear, multi_bridge_mean,
)
from .hermite_ito import (
    ProductFunctional, grt_power_ito, grt_symmetric_ito, hermite, shift_of_variance_check,
)
from .mc_oracle import (
    Composite, ExpOfWiener, HermiteOfWiener, PathEval, PathSampler, SymmetricIto,
    discrete_consistency, estimate_many, judge,
)
from .reports import Check, exact_check


def fit_grid(times, requested: int) -> Grid:
    """Largest multiple of the coarsest grid holding ``times`` not above ``requested``."""
    base = grid_for_times(times).n_steps
    return Grid(base * max(1, requested // base))


def indicator(a: float, b: float, grid: Grid) -> CmVector:
    """Step function ``1_[a, b)`` as a derivative (``a``, ``b`` knots)."""
    d = np.zeros(grid.n_steps)
    d[grid.knot_index(a):grid.knot_index(b)] = 1.0
    return CmVector(grid, d)


def bridge_suite(grid_steps: int = 256, n_samples: int = 100_000, seed: int = 0,
                 T: float = 0.5, c: float = 1.0) -> list:
    grid = fit_grid([T, 0.125], grid_steps)
    law = closest_point(bridge_subspace([T], [c], grid))
    times = [0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0]
    checks = []
    mean_err, cov_err = discrete_consistency(law)
    checks.append(exact_check("bridge.discrete_mean", 0.0, mean_err, rtol=0.0, atol=1e-8))
    checks.append(exact_check("bridge.discrete_cov", 0.0, cov_err, rtol=0.0, atol=1e-8))

    funcs, closed, names = [], [], []
    for t in times:
        K = kernel_vector(t, grid)
        g = conditioned_law(law, K)
        checks.append(exact_check(f"bridge.mean_formula[t={t:g}]", g.mean, c / T * min(T, t)))
        checks.append(exact_check(f"bridge.var_formula[t={t:g}]", g.variance, t - min(t, T) ** 2 / T))
        funcs.append(PathEval(t))
        closed.append(g.mean)
        names.append(f"bridge.mc_mean[t={t:g}]")
        funcs.append(Composite(lambda x, m=g.mean: (x - m) ** 2, (PathEval(t),)))
        closed.append(g.variance)
        names.append(f"bridge.mc_var[t={t:g}]")
    for s, t in [(0.25, 0.75), (0.375, 0.625), (0.625, 0.875)]:
        Ks, Kt = kernel_vector(s, grid), kernel_vector(t, grid)
        ms, mt = grt_linear(law, Ks), grt_linear(law, Kt)
        cov = conditioned_cov(law, Ks, Kt)
        checks.append(exact_check(f"bridge.cov_formula[{s:g},{t:g}]", cov,
                                  min(s, t) - min(t, T) * min(s, T) / T))
        funcs.append(Composite(lambda a, b, ms=ms, mt=mt: (a - ms) * (b - mt), (PathEval(s), PathEval(t))))
        closed.append(cov)
        names.append(f"bridge.mc_cov[{s:g},{t:g}]")
    K = kernel_vector(0.75, grid)
    funcs.append(ExpOfWiener(1.0, K))
    closed.append(exponential_moment(law, K, 1.0).real)
    names.append("bridge.mc_exp_moment[t=0.75]")

    ests = estimate_many(law, funcs, n_samples, seed)
    checks.extend(judge(n, cf, e) for n, cf, e in zip(names, closed, ests))
    return checks


def multi_bridge_suite(grid_steps: int = 256, n_samples: int = 100_000, seed: int = 0,
                       times=(0.2, 0.5, 0.9), levels=(1.0, -1.0, 0.0)) -> list:
    grid = fit_grid(list(times), grid_steps)
    sub = bridge_subspace(times, levels, grid)
    law = closest_point(sub)
    checks = []
    for j, (T, cj) in enumerate(zip(times, levels)):
        f = indicator(0.0, T, grid)
        checks.append(exact_check(f"multi.direct_mean[T{j + 1}]", multi_bridge_mean(times, levels, f), cj))
        checks.append(exact_check(f"multi.grt_linear[T{j + 1}]", grt_linear(law, f), cj, rtol=1e-9))
    w, b = orthonormal_bridge_basis(times, levels, grid)
    ortho = closest_point(AffineSubspace(tuple(w), b))
    checks.append(exact_check("multi.orthonormal_route", 0.0, norm(ortho.h_L - law.h_L), rtol=0.0, atol=1e-9))
    mean_err, cov_err = discrete_consistency(law)
    checks.append(exact_check("multi.discrete_mean", 0.0, mean_err, rtol=0.0, atol=1e-8))
    checks.append(exact_check("multi.discrete_cov", 0.0, cov_err, rtol=0.0, atol=1e-8))

    paths = PathSampler(law, seed).block(0, min(n_samples, 10_000))
    idx = [grid.knot_index(T) - 1 for T in times]
    dev = float(np.max(np.abs(paths[:, idx] - np.asarray(levels))))
    checks.append(exact_check("multi.paths_pinned", 0.0, dev, rtol=0.0, atol=1e-7))

    funcs, closed, names = [], [], []
    for t in (0.1, 0.3, 0.7, 1.0):
        f = kernel_vector(t, grid)
        m = multi_bridge_mean(times, levels, f)
        funcs.append(PathEval(t))
        closed.append(m)
        names.append(f"multi.mc_mean[t={t:g}]")
    f = indicator(0.1, 0.6, grid) - 2.0 * indicator(0.4, 1.0, grid)
    funcs.append(HermiteOfWiener(1, f))
    closed.append(multi_bridge_mean(times, levels, f))
    names.append("multi.mc_wiener_integral")
    ests = estimate_many(law, funcs, n_samples, seed)
    checks.extend(judge(n, cf, e) for n, cf, e in zip(names, closed, ests))
    return checks


def ito_suite(grid_steps: int = 256, n_samples: int = 100_000, seed: int = 0,
              orders=(1, 2, 3, 4), Ts=(0.5, 1.0), cs=(0.0, 1.0)) -> list:
    grid = fit_grid([0.5], min(grid_steps, 64))
    fs = {"1": indicator(0.0, 1.0, grid), "1[0,0.5]": indicator(0.0, 0.5, grid)}
    checks = []
    for n in orders:
        for c in cs:
            classical = float(hermeval(c, [0.0] * n + [1.0]))
            checks.append(exact_check(f"ito.classical[n={n},c={c:g}]",
                                      grt_power_ito(fs["1"], n, 1.0, c), classical))
    for T in Ts:
        for c in cs:
            law = closest_point(bridge_subspace([T], [c], grid))
            funcs, closed, names = [], [], []
            for fname, f in fs.items():
                for n in orders:
                    funcs.append(HermiteOfWiener(n, f))
                    closed.append(grt_power_ito(f, n, T, c))
                    names.append(f"ito.mc[n={n},T={T:g},c={c:g},f={fname}]")
                    if n == 1:
                        checks.append(exact_check(f"ito.n1_vs_linear[T={T:g},c={c:g},f={fname}]",
                                                  grt_power_ito(f, 1, T, c), grt_linear(law, f)))
            P = ProductFunctional((fs["1[0,0.5]"], fs["1"]))
            funcs.append(SymmetricIto(P))
            closed.append(grt_symmetric_ito(P, T, c))
            names.append(f"ito.mc_symmetric[n=2,T={T:g},c={c:g}]")
            ests = estimate_many(law, funcs, n_samples, seed)
            checks.extend(judge(nm, cf, e) for nm, cf, e in zip(names, closed, ests))
    return checks


def taylor_hermite(n: int, x: float, u2: float) -> tuple:
    """``n!`` times the ``t^n`` coefficient of ``exp(t x) * exp(-u2 t^2 / 2)``.

    Multiplies the two power series explicitly.  Returns ``(value, scale)``
    where ``scale`` is the sum of absolute contributions.
    """
    ex = [x ** k / math.factorial(k) for k in range(n + 1)]
    gauss = [0.0] * (n + 1)
    for j in range(n // 2 + 1):
        gauss[2 * j] = (-u2 / 2.0) ** j / math.factorial(j)
    terms = [ex[n - k] * gauss[k] for k in range(n + 1)]
    fact = math.factorial(n)
    return fact * math.fsum(terms), fact * math.fsum(abs(t) for t in terms)


def hermite_suite(seed: int = 0, max_degree: int = 12) -> list:
    rs = np.random.default_rng(seed)
    checks = []
    for n in range(max_degree + 1):
        for x, u2 in [(0.0, 1.0), (1.5, 0.25), tuple(rs.uniform([-3, 0], [3, 4]))]:
            ref, scale = taylor_hermite(n, x, u2)
            ok_err = abs(hermite(n, x, u2) - ref)
            ok = ok_err <= 1e-10 * max(scale, 1e-300)
            checks.append(Check(f"hermite.generating[n={n},x={x:.4g},u2={u2:.4g}]", hermite(n, x, u2),
                                ref, 0.0, 0.0 if ok else math.inf, ok))
    for lam in (-1.0, 0.5, 2.0, 10.0):
        for n in range(11):
            x, u2 = rs.uniform(-2, 2), rs.uniform(0, 2)
            lhs = hermite(n, lam * x, lam * lam * u2)
            rhs = lam ** n * hermite(n, x, u2)
            _, scale = taylor_hermite(n, lam * x, lam * lam * u2)
            ok = abs(lhs - rhs) <= 1e-10 * scale
            checks.append(Check(f"hermite.scaling[lambda={lam:g},n={n}]", lhs, rhs, 0.0,
                                0.0 if ok else math.inf, ok))
    for n in range(11):
        mean, var_x = rs.uniform(-2, 2), rs.uniform(0, 1)
        u2 = var_x + rs.uniform(0, 1)
        lhs, rhs = shift_of_variance_check(n, mean, var_x, u2)
        _, scale = taylor_hermite(n, abs(mean) + 3 * math.sqrt(var_x), u2)
        ok = abs(lhs - rhs) <= 1e-10 * scale
        checks.append(Check(f"hermite.shift_of_variance[n={n}]", lhs, rhs, 0.0,
                            0.0 if ok else math.inf, ok))
    return checks


def fock_suite(grid_steps: int = 64, n_samples: int = 100_000, seed: int = 0,
               T: float = 0.5, c: float = 1.0) -> list:
    grid = fit_grid([T, 0.125], min(grid_steps, 64))
    law = closest_point(bridge_subspace([T], [c], grid))
    rs = np.random.default_rng(seed)
    checks = []
    raw = [CmVector(grid, rs.normal(size=grid.n_steps)) for _ in range(4)]
    vs = []
    for v in raw:
        p = project(law, v)
        vs.append(p * (rs.uniform(0.3, 1.0) / norm(p)))
    checks.append(gram_certificate_check(law, vs))
    base = orthonormal_base(law, vs[:2])
    for s_target, N in [(1.0, 20), (-1.0, 20), (3.0, 5), (3.0, 10), (3.0, 20), (-2.5, 10)]:
        v = np.array([1.0, 0.0])
        w = np.array([s_target, 0.0])
        got = fock_inner(exp_vector(base, v, N), exp_vector(base, w, N))
        bound = exp_truncation_bound(s_target, N)
        err = abs(got - math.exp(s_target))
        ok = err <= bound * (1 + 1e-9) + 1e-15 * math.exp(abs(s_target))
        checks.append(Check(f"fock.exp_inner[s={s_target:g},N={N}]", math.exp(s_target), got,
                            0.0, 0.0 if ok else math.inf, ok))
    checks.extend(verify_UL_isometry(law, vs[0], vs[1], n_samples, seed))
    checks.extend(verify_UL_linear_term(law, project(law, kernel_vector(0.75, grid)), n_samples, seed))
    return checks


def closest_point_suite(seed: int = 0, trials: int = 20) -> list:
    rs = np.random.default_rng(seed)
    checks = []
    for k in range(trials):
        n = int(rs.integers(4, 17))
        m = int(rs.integers(1, min(4, n) + 1))
        grid = Grid(n)
        sub = AffineSubspace(tuple(CmVector(grid, rs.normal(size=n)) for _ in range(m)),
                             rs.normal(size=m))
        law = closest_point(sub)
        oracle = least_norm_oracle(sub)
        err = float(np.max(np.abs(law.h_L.deriv - oracle)))
        checks.append(exact_check(f"closest.vs_kkt[{k}]", 0.0, err, rtol=0.0, atol=1e-8))
        worst = math.inf
        hn = norm(law.h_L)
        for _ in range(100):
            w = law.h_L + project(law, CmVector(grid, rs.normal(size=n)))
            worst = min(worst, norm(w) - hn)
        checks.append(exact_check(f"closest.minimal[{k}]", 0.0, min(worst, 0.0), rtol=0.0, atol=1e-12))
    return checks


def least_norm_oracle(sub: AffineSubspace) -> np.ndarray:
    """Minimum-norm derivative by a dense KKT solve over the ``n`` cell values.

    Minimizes ``sum d_i^2 / n`` subject to ``V d / n = c``.
    """
    n = sub.grid.n_steps
    V = np.vstack([v.deriv for v in sub.constraints]) / n
    m = V.shape[0]
    K = np.zeros((n + m, n + m))
    K[:n, :n] = 2.0 * np.eye(n) / n
    K[:n, n:] = V.T
    K[n:, :n] = V
    rhs = np.concatenate([np.zeros(n), sub.levels])
    return np.linalg.lstsq(K, rhs, rcond=None)[0][:n]


SUITES = {
    "bridge": lambda a: bridge_suite(a.grid or 256, a.samples, a.seed),
    "multi-bridge": lambda a: multi_bridge_suite(a.grid or 256, a.samples, a.seed),
    "ito": lambda a: ito_suite(a.grid or 256, a.samples, a.seed),
    "hermite": lambda a: hermite_suite(a.seed),
    "fock": lambda a: fock_suite(a.grid or 64, a.samples, a.seed),
    "closest-point": lambda a: closest_point_suite(a.seed),
}


def run_suite(name: str, config) -> list:
    if name == "all":
        out = []
        for key in SUITES:
            out.extend(SUITES[key](config))
        return out
    return SUITES[name](config)
