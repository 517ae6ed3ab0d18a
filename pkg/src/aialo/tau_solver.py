"""Solver for the structured sample-allocation programs.

The programs minimize the total sample budget  sum_i tau_i  subject to
inverse-weighted quadratic rows  sum_i a_i^(k)/tau_i <= B_k.  Substituting
u_i = 1/tau_i turns every row into a linear constraint, so the problem is
solved by plain log-barrier path following with damped Newton steps.  Each
solve is certified a posteriori through its KKT conditions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import nnls

from .errors import NonUniqueOptimum
from .lp_model import LPInstance
from .vertex_enum import VertexSet

_STATIONARITY_TARGET = 1e-7
_BARRIER_GROWTH = 5.0
_INNER_TOL = 1e-10  # on the squared Newton decrement / 2
_T_CAP = 1e18


@dataclass(frozen=True, eq=False)
class AllocationProblem:
    """Rows of nonnegative weights a^(k) with positive bounds B_k."""

    weights: np.ndarray
    bounds: np.ndarray

    def __post_init__(self):
        W = np.atleast_2d(np.asarray(self.weights, dtype=float))
        B = np.atleast_1d(np.asarray(self.bounds, dtype=float))
        if W.shape[0] != B.shape[0]:
            raise ValueError("one bound per weight row is required")
        if W.shape[0] == 0:
            raise ValueError("at least one constraint row is required")
        if np.any(W < 0.0):
            raise ValueError("weights must be nonnegative")
        if np.any(B <= 0.0):
            raise ValueError("bounds must be positive")
        object.__setattr__(self, "weights", W)
        object.__setattr__(self, "bounds", B)


@dataclass(frozen=True, eq=False)
class TauAllocation:
    tau: np.ndarray
    objective: float
    kkt_residual: float


def _prune_rows(W: np.ndarray, B: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Drop vacuous, duplicate and dominated rows (a <= a' componentwise, B >= B')."""
    keep = np.any(W > 0.0, axis=1)
    W, B = W[keep], B[keep]
    if W.shape[0] == 0:
        return W, B
    seen: dict[bytes, int] = {}
    idx = []
    for k in range(W.shape[0]):
        key = W[k].tobytes() + B[k].tobytes()
        if key not in seen:
            seen[key] = k
            idx.append(k)
    W, B = W[idx], B[idx]
    r = W.shape[0]
    dominated = np.zeros(r, dtype=bool)
    for k in range(r):
        if dominated[k]:
            continue
        for l in range(r):
            if l == k or dominated[l]:
                continue
            if np.all(W[k] <= W[l]) and B[k] >= B[l]:
                dominated[k] = True
                break
    return W[~dominated], B[~dominated]


def _barrier_value(G: np.ndarray, u: np.ndarray, t: float) -> float:
    s = 1.0 - G @ u
    if np.any(s <= 0.0) or np.any(u <= 0.0):
        return math.inf
    return t * float(np.sum(1.0 / u)) - float(np.sum(np.log(s))) - float(np.sum(np.log(u)))


def _newton_center(G: np.ndarray, u: np.ndarray, t: float, max_iter: int = 60) -> np.ndarray:
    for _ in range(max_iter):
        s = 1.0 - G @ u
        inv_u = 1.0 / u
        grad = -t * inv_u**2 + G.T @ (1.0 / s) - inv_u
        hess = G.T @ ((1.0 / s**2)[:, None] * G) + np.diag(2.0 * t * inv_u**3 + inv_u**2)
        try:
            step = -np.linalg.solve(hess, grad)
        except np.linalg.LinAlgError:
            step = -np.linalg.lstsq(hess, grad, rcond=None)[0]
        decrement_sq = float(-grad @ step)
        if decrement_sq <= 2.0 * _INNER_TOL:
            break
        alpha = 1.0
        neg = step < 0.0
        if np.any(neg):
            alpha = min(alpha, 0.99 * float(np.min(-u[neg] / step[neg])))
        climb = G @ step
        pos = climb > 0.0
        if np.any(pos):
            alpha = min(alpha, 0.99 * float(np.min(s[pos] / climb[pos])))
        f0 = _barrier_value(G, u, t)
        while alpha > 1e-18 and _barrier_value(G, u + alpha * step, t) > f0 - 1e-4 * alpha * decrement_sq:
            alpha *= 0.5
        if alpha <= 1e-18:
            break
        u = u + alpha * step
    return u


def _kkt_residual(W: np.ndarray, B: np.ndarray, tau: np.ndarray, lam: np.ndarray) -> float:
    """max of stationarity |1 - sum_k lam_k a_ki / tau_i^2| and per-row lam_k |g_k|."""
    M = W.T / tau[:, None] ** 2  # (d, r)
    stationarity = float(np.max(np.abs(1.0 - M @ lam)))
    slack = W @ (1.0 / tau) - B
    comp = float(np.max(lam * np.abs(slack))) if lam.size else 0.0
    return max(stationarity, comp)


def solve_allocation(prob: AllocationProblem) -> TauAllocation:
    """Minimize sum tau subject to the problem's rows; certified by KKT residual.

    Coordinates with zero weight in every row are fixed to tau_i = 0 and the
    convention a_i = 0 => a_i/tau_i = 0 applies throughout.  A problem whose
    rows are all vacuous yields the all-zero allocation.
    """
    n = prob.weights.shape[1]
    W, B = _prune_rows(prob.weights, prob.bounds)
    if W.shape[0] == 0:
        return TauAllocation(tau=np.zeros(n), objective=0.0, kkt_residual=0.0)
    cols = np.flatnonzero(np.any(W > 0.0, axis=0))
    Wr = W[:, cols]
    G = Wr / B[:, None]  # normalized rows: G u <= 1
    d = cols.size
    u = np.full(d, 0.5 / float(np.max(G.sum(axis=1))))
    t = 1.0
    while True:
        u = _newton_center(G, u, t)
        objective = float(np.sum(1.0 / u))
        stationarity_est = float(np.max(u)) / t
        gap_est = (G.shape[0] + d) / t
        if (stationarity_est <= _STATIONARITY_TARGET and 1.0 / t <= _STATIONARITY_TARGET
                and gap_est <= 1e-6 * max(1.0, objective)) or t >= _T_CAP:
            break
        t *= _BARRIER_GROWTH

    tau_r = 1.0 / u
    s = 1.0 - G @ u
    lam = 1.0 / (t * s * B)  # barrier multiplier estimates, original row scale
    residual = _kkt_residual(Wr, B, tau_r, lam)
    if residual > 1e-6:
        # Rescue pass: recover multipliers for the near-active rows by NNLS.
        active = np.flatnonzero(s <= 1e-5)
        if active.size:
            M = Wr.T[:, active] / tau_r[:, None] ** 2
            lam_a, _ = nnls(M, np.ones(d))
            lam2 = np.zeros(G.shape[0])
            lam2[active] = lam_a
            residual = min(residual, _kkt_residual(Wr, B, tau_r, lam2))

    tau = np.zeros(n)
    tau[cols] = tau_r
    return TauAllocation(tau=tau, objective=float(tau.sum()), kkt_residual=residual)


def low_of_instance(inst: LPInstance, vertices: VertexSet) -> tuple[TauAllocation, float]:
    """Instance-wise allocation lower bound over all non-optimal extreme points.

    Row k compares the optimal vertex x* against vertex s^(k):
    weights (s^(k)_i - x*_i)^2 and bound (c^T(x* - s^(k)))^2.
    """
    values = vertices.points @ inst.objective
    best = int(np.argmax(values))
    gaps = values[best] - values
    others = np.arange(len(values)) != best
    if np.any(gaps[others] <= 1e-9):
        raise NonUniqueOptimum("two extreme points tie for the best objective value")
    x_star = vertices.points[best]
    W = (vertices.points[others] - x_star) ** 2
    B = gaps[others] ** 2
    alloc = solve_allocation(AllocationProblem(weights=W, bounds=B))
    return alloc, alloc.objective


def lowall(S, eps: float, delta: float) -> TauAllocation:
    """Allocation making every pairwise objective difference within S estimable.

    All unordered pairs share the common bound eps^2 / (2 ln(2/delta)).
    A point set with no two distinct members yields the all-zero allocation.
    """
    S = np.atleast_2d(np.asarray(S, dtype=float))
    if S.shape[0] < 2:
        raise ValueError("at least two points are required")
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0,1)")
    k, n = S.shape
    bound = eps * eps / (2.0 * math.log(2.0 / delta))
    rows = []
    for i in range(k):
        diff = (S[i + 1 :] - S[i]) ** 2
        rows.append(diff)
    W = np.vstack(rows)
    nonzero = np.any(W > 0.0, axis=1)
    if not np.any(nonzero):
        return TauAllocation(tau=np.zeros(n), objective=0.0, kkt_residual=0.0)
    W = W[nonzero]
    return solve_allocation(AllocationProblem(weights=W, bounds=np.full(W.shape[0], bound)))
