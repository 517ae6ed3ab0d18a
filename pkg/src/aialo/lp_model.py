"""LP instance model, the exact reference solver, and approximate-optimality checks.

All instances are maximization problems  max c^T x  s.t.  A x <= b, x >= 0,
known a priori to have an optimal solution of Euclidean norm at most R.
Either the right-hand sides b or the objective c are hidden from algorithms
and only observable through the noisy sampling oracle.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import linprog

from .errors import InfeasibleOrUnbounded

# Options that push HiGHS well past the 1e-9 objective accuracy we promise.
_LINPROG_OPTS = {
    "presolve": True,
    "primal_feasibility_tolerance": 1e-10,
    "dual_feasibility_tolerance": 1e-10,
}


class UnknownSet(enum.Enum):
    """Which component of the instance is hidden from algorithms."""

    B = "b"
    C = "c"


@dataclass(frozen=True, eq=False)
class Solution:
    """A candidate point together with its objective value under the true c."""

    point: np.ndarray
    objective_value: float


@dataclass(frozen=True)
class ToleranceParams:
    """Failure probability delta and the optimality/feasibility relaxations."""

    delta: float
    eps_opt: float
    eps_feas: float

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (0,1), got {self.delta}")
        if self.eps_opt < 0.0 or self.eps_feas < 0.0:
            raise ValueError("tolerances must be nonnegative")


def _reference_solve(A: np.ndarray, b: np.ndarray, c: np.ndarray) -> tuple[np.ndarray, float]:
    """Exact solve of max c^T x s.t. Ax <= b, x >= 0 via HiGHS."""
    res = linprog(-c, A_ub=A, b_ub=b, bounds=(0, None), method="highs", options=_LINPROG_OPTS)
    if res.status != 0 or res.x is None:
        raise InfeasibleOrUnbounded(f"reference LP solve failed: {res.message}")
    x = np.asarray(res.x, dtype=float)
    return x, float(c @ x)


def _as_readonly(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class LPInstance:
    """The triple (A, b, c) plus which parameters are unknown and their noise scale.

    ``noise_scale`` holds one positive sigma per unknown parameter (length m
    when b is unknown, length n when c is unknown).
    """

    objective: np.ndarray
    constraint_matrix: np.ndarray
    rhs: np.ndarray
    radius_bound: float
    unknown_set: UnknownSet
    noise_scale: np.ndarray

    def __post_init__(self):
        c = _as_readonly(np.atleast_1d(self.objective))
        A = _as_readonly(np.atleast_2d(self.constraint_matrix))
        b = _as_readonly(np.atleast_1d(self.rhs))
        m, n = A.shape
        if c.shape != (n,) or b.shape != (m,):
            raise ValueError(f"inconsistent dimensions: A is {m}x{n}, |c|={c.shape}, |b|={b.shape}")
        num_unknown = m if self.unknown_set is UnknownSet.B else n
        sigma = np.broadcast_to(np.asarray(self.noise_scale, dtype=float), (num_unknown,))
        sigma = _as_readonly(sigma)
        if np.any(sigma <= 0.0):
            raise ValueError("noise scales must be positive")
        if self.radius_bound <= 0.0:
            raise ValueError("radius bound must be positive")
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "constraint_matrix", A)
        object.__setattr__(self, "rhs", b)
        object.__setattr__(self, "radius_bound", float(self.radius_bound))
        object.__setattr__(self, "noise_scale", sigma)
        # Feasibility/boundedness and the norm bound are construction invariants.
        sol = self.exact_solution
        norm = float(np.linalg.norm(sol.point))
        if norm > self.radius_bound * (1.0 + 1e-9) + 1e-9:
            raise InfeasibleOrUnbounded(
                f"exact optimum has norm {norm:.6g} > radius bound {self.radius_bound:.6g}"
            )

    @property
    def num_vars(self) -> int:
        return self.constraint_matrix.shape[1]

    @property
    def num_constraints(self) -> int:
        return self.constraint_matrix.shape[0]

    @cached_property
    def exact_solution(self) -> Solution:
        x, value = _reference_solve(self.constraint_matrix, self.rhs, self.objective)
        return Solution(point=_as_readonly(x), objective_value=value)


def solve_exact(inst: LPInstance) -> Solution:
    """Reference optimum over the true parameters (exact up to solver tolerance)."""
    return inst.exact_solution


def check_opt_membership(inst: LPInstance, x: np.ndarray, tol: ToleranceParams) -> bool:
    """True iff x is eps_opt-optimal and violates every constraint by at most eps_feas.

    The sign constraint x >= 0 is relaxed by the same eps_feas as the A-rows.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (inst.num_vars,):
        raise ValueError(f"point has shape {x.shape}, expected ({inst.num_vars},)")
    best = inst.exact_solution.objective_value
    if float(inst.objective @ x) < best - tol.eps_opt:
        return False
    if np.any(inst.constraint_matrix @ x > inst.rhs + tol.eps_feas):
        return False
    return bool(np.all(x >= -tol.eps_feas))


def binding_set(inst: LPInstance, x_star: np.ndarray, tol: float) -> set[int]:
    """Indices of constraints tight at x_star: {i : |A_i x* - b_i| <= tol}."""
    residual = np.abs(inst.constraint_matrix @ np.asarray(x_star, dtype=float) - inst.rhs)
    return set(np.flatnonzero(residual <= tol).tolist())


def instance_to_json_dict(inst: LPInstance) -> dict:
    sigma = inst.noise_scale
    sigma_out = float(sigma[0]) if np.all(sigma == sigma[0]) else sigma.tolist()
    return {
        "n": inst.num_vars,
        "m": inst.num_constraints,
        "c": inst.objective.tolist(),
        "A": inst.constraint_matrix.tolist(),
        "b": inst.rhs.tolist(),
        "R": inst.radius_bound,
        "unknown": inst.unknown_set.value,
        "sigma": sigma_out,
    }


def instance_to_json(inst: LPInstance) -> str:
    return json.dumps(instance_to_json_dict(inst))


def instance_from_json(data: str | dict) -> LPInstance:
    if isinstance(data, str):
        data = json.loads(data)
    inst = LPInstance(
        objective=np.asarray(data["c"], dtype=float),
        constraint_matrix=np.asarray(data["A"], dtype=float),
        rhs=np.asarray(data["b"], dtype=float),
        radius_bound=float(data["R"]),
        unknown_set=UnknownSet(data["unknown"]),
        noise_scale=np.asarray(data["sigma"], dtype=float),
    )
    if inst.num_vars != int(data["n"]) or inst.num_constraints != int(data["m"]):
        raise ValueError("stored n/m disagree with array shapes")
    return inst
