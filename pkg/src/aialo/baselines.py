"""Non-adaptive reference algorithms for the unknown-b setting.

The static approach samples every constraint to uniform precision before
solving once.  The binding-oracle baseline is not a legal algorithm: it is
told the true optimum's binding set (and the true b of everything else) and
embodies the information-theoretic floor the adaptive method is compared to.
"""

from __future__ import annotations

import math

import numpy as np

from .ellipsoid import solve_lp_arrays
from .errors import IterationCap
from .lp_model import LPInstance, ToleranceParams, UnknownSet, binding_set, solve_exact
from .reports import RunReport
from .sampling import NoisyOracle, SampleLedger, draw_batch

# Headroom over the instance's radius bound: empirical right-hand sides can
# push the optimum slightly outside the nominal ball.
_EMPIRICAL_RADIUS_SLACK = 1.05

_BINDING_TOL = 1e-6


def _static_count(sigma: float, m: int, tol: ToleranceParams) -> int:
    return math.ceil(4.0 * sigma * sigma * math.log(m / tol.delta) / tol.eps_feas**2)


def _solve_empirical(inst: LPInstance, b_emp: np.ndarray, tol: ToleranceParams):
    eps = min(tol.eps_opt, tol.eps_feas) / 2.0
    radius = inst.radius_bound * _EMPIRICAL_RADIUS_SLACK
    x, _ = solve_lp_arrays(inst.constraint_matrix, b_emp, inst.objective, radius, eps)
    return x


def run_static(inst: LPInstance, tol: ToleranceParams, seed: int) -> RunReport:
    """Draw ceil(4 sigma_i^2 ln(m/delta)/eps_feas^2) samples of every b_i, then
    solve the LP built from the empirical means."""
    if inst.unknown_set is not UnknownSet.B:
        raise ValueError("the static baseline requires the unknown-b setting")
    m = inst.num_constraints
    oracle = NoisyOracle(inst.rhs, inst.noise_scale, seed)
    ledger = SampleLedger(m)
    for i in range(m):
        draw_batch(oracle, ledger, i, _static_count(float(inst.noise_scale[i]), m, tol))
    output = None
    failed = False
    try:
        output = _solve_empirical(inst, ledger.means(), tol)
    except IterationCap:
        failed = True
    return RunReport(
        algorithm="static",
        seed=seed,
        total_samples=ledger.total,
        per_parameter_samples=ledger.counts.copy(),
        output=output,
        failed=failed,
        iterations=0,
    )


def run_binding_oracle(inst: LPInstance, tol: ToleranceParams, seed: int) -> RunReport:
    """Sample only the d constraints binding at the true optimum, at the
    static rate computed with d in place of m; every other b_i is taken at its
    true value.  Reported with is_oracle=True so it is never ranked as a real
    algorithm."""
    if inst.unknown_set is not UnknownSet.B:
        raise ValueError("the binding-oracle baseline requires the unknown-b setting")
    m = inst.num_constraints
    x_star = solve_exact(inst).point
    binding = sorted(binding_set(inst, x_star, _BINDING_TOL))
    oracle = NoisyOracle(inst.rhs, inst.noise_scale, seed)
    ledger = SampleLedger(m)
    b_emp = np.array(inst.rhs, dtype=float)
    if binding:
        for i in binding:
            draw_batch(oracle, ledger, i, _static_count(float(inst.noise_scale[i]), len(binding), tol))
            b_emp[i] = ledger.mean(i)
    output = None
    failed = False
    try:
        output = _solve_empirical(inst, b_emp, tol)
    except IterationCap:
        failed = True
    return RunReport(
        algorithm="binding_oracle",
        seed=seed,
        total_samples=ledger.total,
        per_parameter_samples=ledger.counts.copy(),
        output=output,
        failed=failed,
        iterations=0,
        is_oracle=True,
    )
