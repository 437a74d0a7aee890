"""Hot numeric kernels with a numba backend and a pure-numpy fallback.

The backend is chosen once at import time.  Set ``WIENER_RADON_DISABLE_NUMBA=1``
to force the numpy path; it is also used when numba cannot be imported.
Both backends expose the same functions:

``counter_uniforms(key, start, count)``
    Uniforms in (0, 1) at counters ``start .. start+count-1`` of stream ``key``.
``counter_normals(key, start_row, n_rows, n_cols)``
    Standard normals by inverse CDF; entry ``(i, j)`` uses counter
    ``(start_row + i) * n_cols + j`` so any row chunking gives identical values.
``ndtri(p)``
    Inverse standard normal CDF (AS241).
``shifted_moments(x, shift)``
    Compensated ``(sum(x - shift), sum((x - shift)**2))``.
``hermite_values(n, x, u2)``
    ``H_n(x; u2)`` elementwise by three-term recurrence.
"""

import os

from . import _numpy

BACKEND = "numpy"
_impl = _numpy

if os.environ.get("WIENER_RADON_DISABLE_NUMBA", "").strip() not in ("1", "true", "yes"):
    try:
        from . import _numba as _impl  # noqa: F811
        BACKEND = "numba"
    except ImportError:  # pragma: no cover - numba is optional
        _impl = _numpy


counter_uniforms = _impl.counter_uniforms
counter_normals = _impl.counter_normals
ndtri = _impl.ndtri
shifted_moments = _impl.shifted_moments
hermite_values = _impl.hermite_values


def backend_module(name):
    """Return the kernel module for ``name`` ("numpy" or "numba")."""
    if name == "numpy":
        return _numpy
    if name == "numba":
        from . import _numba
        return _numba
    raise ValueError(f"unknown backend {name!r}")
