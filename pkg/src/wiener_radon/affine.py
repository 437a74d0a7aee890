"""Finite-codimension affine subspaces ``L_c = {h : <v_j, h> = c_j}``.

``closest_point`` solves for the minimum-norm point ``h_L = F*(FF*)^{-1} c``
and packages everything needed downstream (Gram matrix, its inverse, the
expansion coefficients) as a :class:`ConditionedLaw`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cm_space import (
    CmVector, Grid, derivative_matrix, kernel_vector, vector_from_json, zero_vector,
)
from .errors import GridMismatch, SchemaError, SingularGram, TimesNotIncreasing

SINGULAR_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class AffineSubspace:
    constraints: tuple
    levels: np.ndarray

    def __post_init__(self):
        cons = tuple(self.constraints)
        levels = np.array(self.levels, dtype=np.float64).reshape(-1)
        if len(cons) < 1:
            raise ValueError("an affine subspace needs at least one constraint")
        if len(cons) != levels.shape[0]:
            raise ValueError(f"{len(cons)} constraints but {levels.shape[0]} levels")
        grid = cons[0].grid
        for v in cons[1:]:
            if v.grid != grid:
                raise GridMismatch("all constraints must share one grid")
        levels.flags.writeable = False
        object.__setattr__(self, "constraints", cons)
        object.__setattr__(self, "levels", levels)

    @property
    def grid(self) -> Grid:
        return self.constraints[0].grid

    @property
    def codim(self) -> int:
        return len(self.constraints)

    def with_levels(self, levels) -> "AffineSubspace":
        return AffineSubspace(self.constraints, levels)


@dataclass(frozen=True, eq=False)
class ConditionedLaw:
    """Data fixing the law of every ``I_L(h)`` under the conditioned measure.

    ``subspace`` is ``None`` for plain Wiener measure (no constraints); then
    ``h_L = 0`` and the projection is the identity.
    """

    grid: Grid
    subspace: AffineSubspace | None
    h_L: CmVector
    gram: np.ndarray
    gram_inverse: np.ndarray
    coefficients: np.ndarray
    _vmat: np.ndarray = field(repr=False)

    @property
    def codim(self) -> int:
        return 0 if self.subspace is None else self.subspace.codim

    @property
    def levels(self) -> np.ndarray:
        return np.zeros(0) if self.subspace is None else self.subspace.levels

    def constraint_values(self, h: CmVector) -> np.ndarray:
        """``F(h) = (<v_1, h>, ..., <v_m, h>)``."""
        if h.grid != self.grid:
            raise GridMismatch(f"vector on {h.grid.n_steps}-step grid, law on {self.grid.n_steps}")
        return self._vmat @ h.deriv / self.grid.n_steps


def gram_matrix(sub: AffineSubspace) -> np.ndarray:
    """``(FF*)_{jk} = <v_k, v_j>``."""
    V = derivative_matrix(sub.constraints)
    G = V @ V.T / sub.grid.n_steps
    return 0.5 * (G + G.T)


def _checked_inverse(G: np.ndarray) -> np.ndarray:
    w, Q = np.linalg.eigh(G)
    if w[0] <= SINGULAR_RTOL * w[-1]:
        raise SingularGram(float(w[0]), float(w[-1]))
    return (Q / w) @ Q.T


def closest_point(sub: AffineSubspace) -> ConditionedLaw:
    """Minimum-norm point of ``sub`` together with its Gram data.

    Raises :class:`SingularGram` when the smallest Gram eigenvalue is at most
    ``1e-10`` times the largest.
    """
    G = gram_matrix(sub)
    Ginv = _checked_inverse(G)
    a = Ginv @ sub.levels
    V = derivative_matrix(sub.constraints)
    h_L = CmVector(sub.grid, a @ V)
    V.flags.writeable = False
    return ConditionedLaw(sub.grid, sub, h_L, G, Ginv, a, V)


def unconditioned(grid: Grid) -> ConditionedLaw:
    """Degenerate law with no constraints: plain Wiener measure."""
    empty = np.zeros((0, 0))
    return ConditionedLaw(grid, None, zero_vector(grid), empty, empty, np.zeros(0),
                          np.zeros((0, grid.n_steps)))


def project(law: ConditionedLaw, h: CmVector) -> CmVector:
    """Orthogonal projection onto ``L_0``: ``h - sum_jk Ginv_jk <v_k, h> v_j``."""
    Fh = law.constraint_values(h)
    if Fh.size == 0:
        return h
    return CmVector(h.grid, h.deriv - (law.gram_inverse @ Fh) @ law._vmat)


def bridge_subspace(times, levels, grid: Grid) -> AffineSubspace:
    """``{h : h(T_k) = c_k}`` written with kernel constraints ``K_{T_k}``."""
    times = _check_times(times)
    return AffineSubspace(tuple(kernel_vector(T, grid) for T in times), levels)


def _check_times(times) -> list:
    times = [float(T) for T in np.atleast_1d(times)]
    if not times:
        raise TimesNotIncreasing("need at least one time")
    if times[0] <= 0.0 or times[-1] > 1.0:
        raise TimesNotIncreasing(f"times must lie in (0, 1], got {times}")
    if any(b <= a for a, b in zip(times, times[1:])):
        raise TimesNotIncreasing(f"times must be strictly increasing, got {times}")
    return times


def orthonormal_bridge_basis(times, levels, grid: Grid):
    """Orthonormal description of the multi-bridge subspace.

    ``w_1 = K_{T_1}/sqrt(T_1)``, ``w_k = (K_{T_k} - K_{T_{k-1}})/sqrt(T_k - T_{k-1})``
    and ``b_k = (c_k - c_{k-1})/sqrt(T_k - T_{k-1})`` (with ``T_0 = c_0 = 0``).
    Returns ``(w, b)`` where ``w`` is a list of vectors.
    """
    times = _check_times(times)
    levels = np.asarray(levels, dtype=np.float64).reshape(-1)
    if levels.shape[0] != len(times):
        raise ValueError(f"{len(times)} times but {levels.shape[0]} levels")
    w, b = [], []
    prev_T, prev_c, prev_K = 0.0, 0.0, zero_vector(grid)
    for T, c in zip(times, levels):
        K = kernel_vector(T, grid)
        scale = math.sqrt(T - prev_T)
        w.append((K - prev_K) / scale)
        b.append((c - prev_c) / scale)
        prev_T, prev_c, prev_K = T, c, K
    return w, np.array(b)


def subspace_from_json(obj, grid: Grid | None = None) -> AffineSubspace:
    """Parse ``{"grid": n, "constraints": [...], "levels": [...]}``."""
    if not isinstance(obj, dict):
        raise SchemaError("subspace spec must be a JSON object")
    for key in ("constraints", "levels"):
        if key not in obj:
            raise SchemaError(f"subspace spec is missing field {key!r}")
    if grid is None:
        if "grid" not in obj:
            raise SchemaError("subspace spec is missing field 'grid'")
        try:
            grid = Grid(int(obj["grid"]))
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"field 'grid': {exc}") from exc
    cons = obj["constraints"]
    if not isinstance(cons, list) or not cons:
        raise SchemaError("field 'constraints' must be a non-empty list")
    vectors = []
    for i, c in enumerate(cons):
        try:
            vectors.append(vector_from_json(c, grid))
        except SchemaError as exc:
            raise SchemaError(f"constraints[{i}]: {exc}") from exc
    try:
        levels = [float(x) for x in obj["levels"]]
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"field 'levels' must be a list of numbers: {exc}") from exc
    if len(levels) != len(vectors):
        raise SchemaError(f"{len(vectors)} constraints but {len(levels)} levels")
    return AffineSubspace(tuple(vectors), levels)
