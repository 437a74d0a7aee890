import os
import subprocess
import sys

import numpy as np
import pytest
from scipy.special import ndtri as scipy_ndtri

from wiener_radon import kernels, rng
from wiener_radon.kernels import _numpy, backend_module

numba = pytest.importorskip("numba")
NB = backend_module("numba")


def test_ndtri_matches_scipy():
    p = np.concatenate([np.linspace(1e-12, 1 - 1e-12, 2001), [1e-300, 1e-20, 0.5, 1 - 1e-16]])
    for mod in (_numpy, NB):
        np.testing.assert_allclose(mod.ndtri(p), scipy_ndtri(p), rtol=1e-14, atol=1e-15)


def test_uniforms_in_open_interval():
    u = _numpy.counter_uniforms(rng.stream_key(0), 0, 100_000)
    assert u.min() > 0.0 and u.max() < 1.0
    assert abs(u.mean() - 0.5) < 0.005


def test_backends_share_uniforms():
    key = rng.stream_key(123)
    np.testing.assert_array_equal(_numpy.counter_uniforms(key, 10**9, 50_000),
                                  NB.counter_uniforms(key, 10**9, 50_000))


def test_backends_agree_on_normals():
    # libm log and numpy's vectorized log may round differently in the last bit
    key = rng.stream_key(123)
    a = _numpy.counter_normals(key, 7, 2000, 130)
    b = NB.counter_normals(key, 7, 2000, 130)
    np.testing.assert_allclose(a, b, rtol=1e-14, atol=0)
    assert np.mean(a == b) > 0.99


def test_counter_layout():
    key = rng.stream_key(5)
    whole = _numpy.counter_normals(key, 0, 10, 4)
    np.testing.assert_array_equal(whole[3:7], _numpy.counter_normals(key, 3, 4, 4))
    np.testing.assert_array_equal(whole.ravel(), _numpy.ndtri(_numpy.counter_uniforms(key, 0, 40)))


def test_moments_agree():
    x = np.random.default_rng(0).normal(5.0, 1.0, 10_001)
    s1a, s2a = _numpy.shifted_moments(x, 5.0)
    s1b, s2b = NB.shifted_moments(x, 5.0)
    assert abs(s1a - s1b) < 1e-10 and abs(s2a - s2b) < 1e-9
    assert abs(s1a - (x - 5.0).sum()) < 1e-10


def test_hermite_agree():
    x = np.linspace(-3, 3, 41)
    for n in (0, 1, 2, 7, 20):
        np.testing.assert_allclose(_numpy.hermite_values(n, x, 0.7), NB.hermite_values(n, x, 0.7),
                                   rtol=1e-13, atol=1e-13)


def test_unknown_backend():
    with pytest.raises(ValueError):
        backend_module("cuda")


@pytest.mark.parametrize("flag,expected", [("1", "numpy"), ("0", "numba")])
def test_env_flag(flag, expected):
    env = dict(os.environ, WIENER_RADON_DISABLE_NUMBA=flag)
    out = subprocess.run([sys.executable, "-c", "from wiener_radon import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == expected


def test_default_backend_is_numba():
    if os.environ.get("WIENER_RADON_DISABLE_NUMBA", "") in ("1", "true", "yes"):
        pytest.skip("numpy backend forced")
    assert kernels.BACKEND == "numba"


def test_benchmark_script_runs(capsys):
    import runpy

    path = os.path.join(os.path.dirname(__file__), os.pardir, "benchmarks", "bench_kernels.py")
    bench = runpy.run_path(path)
    bench["main"](["--repeat", "1", "--rows", "100", "--cols", "16"])
    assert "backends agree" in capsys.readouterr().out
