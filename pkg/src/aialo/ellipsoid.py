"""Central-cut ellipsoid machinery and a deterministic LP solver built on it.

An ellipsoid is stored as E = {x : (x-z)^T Q^{-1} (x-z) <= 1} with center z and
symmetric positive-definite shape matrix Q.  Every update is a central cut
through the current center, shrinking the volume by at least e^{-1/(2(n+1))}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import IterationCap, NumericalBreakdown
from .lp_model import LPInstance, Solution

# Refuse cuts once the shape matrix has collapsed along the cut direction.
_MIN_DIRECTIONAL_SCALE = 1e-24


@dataclass(frozen=True, eq=False)
class EllipsoidState:
    center: np.ndarray
    shape: np.ndarray
    iteration: int


def initial_ellipsoid(inst: LPInstance) -> EllipsoidState:
    """Origin-centered ball of radius R; contains every candidate solution."""
    n = inst.num_vars
    r = inst.radius_bound
    return EllipsoidState(center=np.zeros(n), shape=(r * r) * np.eye(n), iteration=0)


def central_cut(state: EllipsoidState, y: np.ndarray) -> EllipsoidState:
    """Minimal ellipsoid containing E intersected with {p : y^T p <= y^T center}."""
    y = np.asarray(y, dtype=float)
    norm = np.linalg.norm(y)
    if norm == 0.0:
        raise ValueError("cut direction must be nonzero")
    y = y / norm
    q = state.shape
    n = q.shape[0]
    yqy = float(y @ q @ y)
    if yqy <= _MIN_DIRECTIONAL_SCALE:
        raise NumericalBreakdown(f"shape matrix degenerate along cut direction (y^T Q y = {yqy:.3g})")
    g = (q @ y) / math.sqrt(yqy)
    if n == 1:
        # Interval halving: the general formula degenerates at n=1.
        center = state.center - g / 2.0
        shape = q / 4.0
    else:
        center = state.center - g / (n + 1.0)
        shape = (n * n / (n * n - 1.0)) * (q - (2.0 / (n + 1.0)) * np.outer(g, g))
        shape = 0.5 * (shape + shape.T)
    return EllipsoidState(center=center, shape=shape, iteration=state.iteration + 1)


def should_stop(state: EllipsoidState, c: np.ndarray, eps: float) -> bool:
    """Objective variation over the ellipsoid is at most eps: sqrt(c^T Q c) <= eps."""
    c = np.asarray(c, dtype=float)
    return math.sqrt(max(float(c @ state.shape @ c), 0.0)) <= eps


def iteration_cap(n: int, radius: float, c_norm: float, eps: float) -> int:
    """Standard ellipsoid iteration bound with slack: 2n(n+1)ln(R|c|sqrt(n)/eps) + 10n."""
    arg = radius * c_norm * math.sqrt(n) / eps if eps > 0 else math.inf
    if not math.isfinite(arg) or arg <= 1.0:
        return 10 * n if math.isfinite(arg) else np.iinfo(np.int64).max
    return math.ceil(2 * n * (n + 1) * math.log(arg)) + 10 * n


def solve_lp_arrays(
    A: np.ndarray,
    b: np.ndarray,
    c: np.ndarray,
    radius: float,
    eps: float,
    feas_tol: float = 1e-9,
) -> tuple[np.ndarray, float]:
    """Run the central-cut method with directly known b; no sampling involved.

    Returns a feasible point whose objective is within eps of the optimum over
    {Ax <= b, x >= 0, |x| <= radius}.  Internally stops at eps/2 because the
    best feasible center trails the optimum by at most twice the stopping
    threshold.  Raises IterationCap when the budget runs out before a feasible
    center is found (e.g. the region is empty).
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = A.shape
    # Sign constraints participate in feasibility cuts like any other row.
    rows = np.vstack([A, -np.eye(n)])
    rhs = np.concatenate([b, np.zeros(n)])
    state = EllipsoidState(center=np.zeros(n), shape=(radius * radius) * np.eye(n), iteration=0)
    stop_eps = eps / 2.0
    cap = iteration_cap(n, radius, float(np.linalg.norm(c)), stop_eps)
    best_x = None
    best_val = -math.inf
    while not should_stop(state, c, stop_eps):
        if state.iteration >= cap:
            raise IterationCap(f"ellipsoid solve exceeded {cap} iterations")
        violations = rows @ state.center - rhs
        j = int(np.argmax(violations))
        if violations[j] > feas_tol:
            y = rows[j]
        else:
            val = float(c @ state.center)
            if val > best_val:
                best_val = val
                best_x = state.center.copy()
            y = -c
        state = central_cut(state, y)
    if best_x is None:
        raise IterationCap("no feasible center found before the stopping criterion")
    return best_x, best_val


def solve_lp_ellipsoid(inst: LPInstance, eps: float) -> Solution:
    """Deterministic eps-accurate solve of the instance's true LP."""
    x, value = solve_lp_arrays(
        inst.constraint_matrix, inst.rhs, inst.objective, inst.radius_bound, eps
    )
    return Solution(point=x, objective_value=value)
