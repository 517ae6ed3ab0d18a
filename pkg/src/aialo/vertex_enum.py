"""Brute-force enumeration of the extreme points of {Ax <= b, x >= 0}.

Every n-subset of the m+n constraint rows (A-rows plus sign constraints) is
solved as a square system; feasible solutions are kept and deduplicated.
Intended for desk-scale instances only; the caps make larger inputs a clean
error instead of an open-ended crunch.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import CombinatorialBlowup
from .lp_model import LPInstance

_FEAS_TOL = 1e-7
_ACTIVE_TOL = 1e-7
_DEDUP_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class VertexSet:
    """Deduplicated extreme points with, per point, the set of active row indices.

    Row indices 0..m-1 are the A-rows; m..m+n-1 are the sign constraints.
    Points are ordered lexicographically by rounded coordinates.
    """

    points: np.ndarray
    active_sets: list[tuple[int, ...]]

    def __len__(self) -> int:
        return self.points.shape[0]


def enumerate_vertices(inst: LPInstance, max_vars: int = 12, max_bases: int = 10**7) -> VertexSet:
    """All extreme points of the instance's feasible region."""
    return enumerate_vertices_arrays(
        inst.constraint_matrix, inst.rhs, max_vars=max_vars, max_bases=max_bases
    )


def enumerate_vertices_arrays(
    A: np.ndarray, b: np.ndarray, max_vars: int = 12, max_bases: int = 10**7
) -> VertexSet:
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    if n > max_vars:
        raise CombinatorialBlowup(f"{n} variables exceeds the cap of {max_vars}")
    if math.comb(m + n, n) > max_bases:
        raise CombinatorialBlowup(
            f"C({m + n},{n}) = {math.comb(m + n, n)} candidate bases exceeds the cap of {max_bases}"
        )
    rows = np.vstack([A, -np.eye(n)])
    rhs = np.concatenate([b, np.zeros(n)])

    combos = np.array(list(itertools.combinations(range(m + n), n)), dtype=np.intp)
    mats = rows[combos]  # (K, n, n)
    vecs = rhs[combos]  # (K, n)
    dets = np.linalg.det(mats)
    # Scale-aware singularity screen; near-singular bases are skipped silently.
    row_scale = np.maximum(np.linalg.norm(mats, axis=2), 1e-30)
    nonsingular = np.abs(dets) > 1e-10 * np.prod(row_scale, axis=1)
    if not np.any(nonsingular):
        return VertexSet(points=np.empty((0, n)), active_sets=[])
    candidates = np.linalg.solve(mats[nonsingular], vecs[nonsingular][..., None])[..., 0]

    feas = np.all(A @ candidates.T <= b[:, None] + _FEAS_TOL, axis=0)
    feas &= np.all(candidates >= -_FEAS_TOL, axis=1)
    candidates = candidates[feas]
    if candidates.shape[0] == 0:
        return VertexSet(points=np.empty((0, n)), active_sets=[])

    order = np.lexsort(np.round(candidates / _DEDUP_TOL).T[::-1])
    candidates = candidates[order]
    kept: list[np.ndarray] = []
    for x in candidates:
        if kept and np.max(np.abs(x - kept[-1])) <= _DEDUP_TOL:
            continue
        # Lex-sorted near-duplicates may not be adjacent; check all kept points.
        if any(np.max(np.abs(x - p)) <= _DEDUP_TOL for p in kept):
            continue
        kept.append(x)
    points = np.array(kept)
    active_sets = [
        tuple(np.flatnonzero(np.abs(rows @ x - rhs) <= _ACTIVE_TOL).tolist()) for x in points
    ]
    return VertexSet(points=points, active_sets=active_sets)
