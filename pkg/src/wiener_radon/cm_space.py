"""Cameron-Martin vectors on a uniform grid of [0, 1].

A vector ``h`` is stored through its derivative, a step function with one
value per cell ``[t_{i-1}, t_i)``.  The inner product is the L2 product of
derivatives, so with step derivatives every kernel inner product is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GridMismatch, NotARefinement, SchemaError, SNotOnGrid

KNOT_TOL = 1e-9


@dataclass(frozen=True)
class Grid:
    """Uniform grid with knots ``t_i = i / n_steps``."""

    n_steps: int

    def __post_init__(self):
        if int(self.n_steps) != self.n_steps or self.n_steps < 1:
            raise ValueError(f"n_steps must be a positive integer, got {self.n_steps!r}")
        object.__setattr__(self, "n_steps", int(self.n_steps))

    @property
    def dt(self) -> float:
        return 1.0 / self.n_steps

    @property
    def knots(self) -> np.ndarray:
        return np.arange(self.n_steps + 1) / self.n_steps

    def knot_index(self, s: float) -> int:
        """Index ``i`` with ``t_i == s``; raises :class:`SNotOnGrid` otherwise."""
        if not 0.0 <= s <= 1.0:
            raise SNotOnGrid(f"time {s!r} is outside [0, 1]")
        x = s * self.n_steps
        i = int(round(x))
        if abs(x - i) > KNOT_TOL:
            raise SNotOnGrid(
                f"time {s!r} is not a knot of the {self.n_steps}-step grid; refine the grid"
            )
        return i

    def is_knot(self, s: float) -> bool:
        try:
            self.knot_index(s)
        except SNotOnGrid:
            return False
        return True


def grid_for_times(times, min_steps: int = 1, max_steps: int = 10**6) -> Grid:
    """Smallest uniform grid (a multiple of ``min_steps``) with every time on a knot."""
    from fractions import Fraction

    n = 1
    for s in times:
        frac = Fraction(float(s)).limit_denominator(max_steps)
        if abs(float(frac) - s) > KNOT_TOL / max_steps:
            raise SNotOnGrid(f"time {s!r} has no knot on grids up to {max_steps} steps")
        n = n * frac.denominator // math.gcd(n, frac.denominator)
    n = n * min_steps // math.gcd(n, min_steps)
    if n > max_steps:
        raise SNotOnGrid(f"times {list(times)} need a grid finer than {max_steps} steps")
    return Grid(n)


class CmVector:
    """Element of the Cameron-Martin space with step derivative ``deriv``.

    Immutable: the derivative array is copied and made read-only.
    Supports ``+``, ``-``, negation and scalar multiplication.
    """

    __slots__ = ("grid", "deriv")

    def __init__(self, grid: Grid, deriv):
        d = np.array(deriv, dtype=np.float64).reshape(-1)
        if d.shape[0] != grid.n_steps:
            raise ValueError(f"deriv has {d.shape[0]} cells, grid has {grid.n_steps}")
        if not np.all(np.isfinite(d)):
            raise ValueError("deriv must be finite")
        d.flags.writeable = False
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "deriv", d)

    def __setattr__(self, name, value):
        raise AttributeError("CmVector is immutable")

    def __repr__(self):
        return f"CmVector(n_steps={self.grid.n_steps}, norm={math.sqrt(inner_product(self, self)):.6g})"

    def _check(self, other):
        if not isinstance(other, CmVector):
            return NotImplemented
        if other.grid != self.grid:
            raise GridMismatch(f"grids differ: {self.grid.n_steps} vs {other.grid.n_steps} steps")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return CmVector(self.grid, self.deriv + other.deriv)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return CmVector(self.grid, self.deriv - other.deriv)

    def __neg__(self):
        return CmVector(self.grid, -self.deriv)

    def __mul__(self, a):
        if isinstance(a, (int, float, np.floating, np.integer)):
            return CmVector(self.grid, float(a) * self.deriv)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, a):
        return self * (1.0 / a)

    def values(self) -> np.ndarray:
        """``h(t_i)`` at all knots, including ``h(0) = 0``."""
        return np.concatenate(([0.0], np.cumsum(self.deriv) / self.grid.n_steps))

    def to_json(self) -> dict:
        return {"n_steps": self.grid.n_steps, "deriv": [float(x) for x in self.deriv]}

    @classmethod
    def from_json(cls, obj) -> "CmVector":
        try:
            return cls(Grid(int(obj["n_steps"])), [float(x) for x in obj["deriv"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad CmVector JSON: {exc}") from exc


def zero_vector(grid: Grid) -> CmVector:
    return CmVector(grid, np.zeros(grid.n_steps))


def kernel_vector(s: float, grid: Grid) -> CmVector:
    """``K_s(t) = min(s, t)``; derivative is the indicator of ``[0, s]``."""
    i = grid.knot_index(s)
    d = np.zeros(grid.n_steps)
    d[:i] = 1.0
    return CmVector(grid, d)


def _common(h: CmVector, k: CmVector, refine_to_common: bool):
    if h.grid == k.grid:
        return h, k
    if not refine_to_common:
        raise GridMismatch(f"grids differ: {h.grid.n_steps} vs {k.grid.n_steps} steps")
    n = h.grid.n_steps * k.grid.n_steps // math.gcd(h.grid.n_steps, k.grid.n_steps)
    target = Grid(n)
    return refine(h, target), refine(k, target)


def inner_product(h: CmVector, k: CmVector, refine_to_common: bool = False) -> float:
    """``<h, k> = sum_i hdot_i * kdot_i * dt``.

    With ``refine_to_common=True`` vectors on different grids are first
    refined to the least common multiple grid; otherwise :class:`GridMismatch`.
    """
    h, k = _common(h, k, refine_to_common)
    return float(np.dot(h.deriv, k.deriv)) / h.grid.n_steps


def norm(h: CmVector) -> float:
    return math.sqrt(inner_product(h, h))


def evaluate(h: CmVector, s: float) -> float:
    """``h(s)`` by exact integration of the step derivative; ``s`` need not be a knot."""
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"time {s!r} is outside [0, 1]")
    n = h.grid.n_steps
    x = s * n
    i = int(round(x))
    if abs(x - i) <= KNOT_TOL:
        return float(np.sum(h.deriv[:i])) / n
    i = int(math.floor(x))
    head = float(np.sum(h.deriv[:i])) / n
    return head + h.deriv[i] * (s - i / n)


def refine(h: CmVector, target: Grid) -> CmVector:
    """Same function on a finer uniform grid (``target.n_steps`` a multiple)."""
    n, m = h.grid.n_steps, target.n_steps
    if m % n:
        raise NotARefinement(f"{m}-step grid does not refine {n}-step grid")
    return CmVector(target, np.repeat(h.deriv, m // n))


def derivative_matrix(vectors) -> np.ndarray:
    """Stack derivatives of vectors sharing one grid as rows."""
    vectors = list(vectors)
    grid = vectors[0].grid
    for v in vectors[1:]:
        if v.grid != grid:
            raise GridMismatch(f"grids differ: {grid.n_steps} vs {v.grid.n_steps} steps")
    return np.vstack([v.deriv for v in vectors])


def vector_from_json(obj, grid: Grid | None = None) -> CmVector:
    """Parse ``{"kind": "kernel", "s": t}`` or ``{"deriv": [...]}`` (kind optional)."""
    if not isinstance(obj, dict):
        raise SchemaError(f"vector spec must be an object, got {type(obj).__name__}")
    kind = obj.get("kind", "deriv")
    if kind in ("kernel", "kernel_deriv"):
        if grid is None:
            raise SchemaError("kernel vector needs a grid")
        if "s" not in obj:
            raise SchemaError(f"{kind} vector needs field 's'")
        try:
            s = float(obj["s"])
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"field 's' must be a number: {exc}") from exc
        return kernel_vector(s, grid)
    if kind == "deriv":
        if "deriv" not in obj:
            raise SchemaError("deriv vector needs field 'deriv'")
        try:
            d = [float(x) for x in obj["deriv"]]
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"field 'deriv' must be a list of numbers: {exc}") from exc
        g = grid if grid is not None else Grid(len(d))
        if len(d) == 0 or g.n_steps % len(d):
            raise SchemaError(f"deriv of length {len(d)} does not fit a {g.n_steps}-step grid")
        return refine(CmVector(Grid(len(d)), d), g)
    raise SchemaError(f"unknown vector kind {kind!r}")
