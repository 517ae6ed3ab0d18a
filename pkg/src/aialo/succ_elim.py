"""Successive elimination over extreme points for the unknown-c setting.

Round r estimates all pairwise objective differences among the surviving
extreme points to accuracy eps_r/lambda (eps_r halving each round), then
discards every point whose estimated value trails the round leader by more
than eps_r/2 + 2*eps_r/lambda.  Sampling budgets come from the pairwise
allocation program; each round draws fresh samples.
"""

from __future__ import annotations

import math

import numpy as np

from .lp_model import LPInstance, UnknownSet
from .reports import RunReport
from .sampling import NoisyOracle, SampleLedger, draw_batch
from .tau_solver import lowall
from .vertex_enum import VertexSet, enumerate_vertices

ELIMINATION_SCALE = 10.0  # the lambda of the elimination rule
ROUND_CAP = 60  # eps_r below 2^-60 means the optimum is not uniquely identifiable

_CONST_COORD_TOL = 1e-9


def objective_gap(inst: LPInstance, vertices: VertexSet) -> float:
    """Gap between the best and second-best extreme-point objective values."""
    values = vertices.points @ inst.objective
    if len(values) < 2:
        raise ValueError("at least two vertices are required")
    order = np.sort(values)
    return float(order[-1] - order[-2])


def run_successive_elimination(
    inst: LPInstance,
    delta: float,
    seed: int,
    eps_opt: float | None = None,
) -> RunReport:
    """Identify the optimal extreme point from noisy objective samples.

    With ``eps_opt`` set, the loop instead stops once eps_r < eps_opt/2 and
    returns the current empirical leader (the eps-suboptimal variant that
    tolerates non-unique optima).  Failure is reported when the round cap is
    exhausted with several survivors left.
    """
    if inst.unknown_set is not UnknownSet.C:
        raise ValueError("successive elimination requires the unknown-c setting")
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0,1)")
    n = inst.num_vars
    vertices = enumerate_vertices(inst)
    points = vertices.points
    k_initial = len(vertices)
    if k_initial == 0:
        raise ValueError("feasible region has no extreme points")
    oracle = NoisyOracle(inst.objective, inst.noise_scale, seed)
    sigma2 = np.asarray(inst.noise_scale, dtype=float) ** 2

    survivors = np.arange(k_initial)
    total_counts = np.zeros(n, dtype=np.int64)
    round_samples: list[int] = []
    failed = False
    output: np.ndarray | None = None
    leader_global = survivors[0]
    r = 0
    while survivors.size > 1:
        r += 1
        if r > ROUND_CAP:
            failed = True
            break
        eps_r = 2.0**-r
        if eps_opt is not None and eps_r < eps_opt / 2.0:
            # Suboptimality variant: every survivor is already within eps_opt
            # of optimal, so the previous round's leader is good enough.
            output = points[leader_global]
            break
        delta_r = delta / (10.0 * r * r * k_initial * k_initial)
        alloc = lowall(points[survivors], eps_r / ELIMINATION_SCALE, delta_r)
        draws = np.ceil(sigma2 * alloc.tau).astype(np.int64)
        # A zero budget is only sound for coordinates constant across the
        # survivors; otherwise force one sample so the mean is defined.
        sub = points[survivors]
        spread = sub.max(axis=0) - sub.min(axis=0)
        draws[(draws == 0) & (spread > _CONST_COORD_TOL)] = 1

        ledger = SampleLedger(n)
        c_hat = np.zeros(n)
        for i in range(n):
            if draws[i] > 0:
                draw_batch(oracle, ledger, i, int(draws[i]))
                c_hat[i] = ledger.mean(i)
        total_counts += ledger.counts
        round_samples.append(int(ledger.total))

        est_values = sub @ c_hat
        leader = int(np.argmax(est_values))
        leader_global = survivors[leader]
        threshold = est_values[leader] - eps_r / 2.0 - 2.0 * eps_r / ELIMINATION_SCALE
        survivors = survivors[est_values >= threshold]
    if output is None:
        if survivors.size == 1 and not failed:
            output = points[survivors[0]]
        else:
            failed = True
    return RunReport(
        algorithm="succ_elim",
        seed=seed,
        total_samples=int(total_counts.sum()),
        per_parameter_samples=total_counts,
        output=None if output is None else output.copy(),
        failed=failed,
        iterations=r,
        round_samples=round_samples,
    )
