"""Active information acquisition for linear optimization.

Solve LPs whose right-hand sides or objective coefficients are only
observable through noisy samples, drawing as few samples as possible.
"""

from .baselines import run_binding_oracle, run_static
from .ellipsoid import (
    EllipsoidState,
    central_cut,
    initial_ellipsoid,
    should_stop,
    solve_lp_ellipsoid,
)
from .harness import GeneratorConfig, generate_instance, run_sweep, table1_report
from .lp_model import (
    LPInstance,
    Solution,
    ToleranceParams,
    UnknownSet,
    binding_set,
    check_opt_membership,
    instance_from_json,
    instance_to_json,
    solve_exact,
)
from .reports import RunReport
from .sampling import NoisyOracle, SampleLedger, confidence_radius, delta_prime, draw
from .succ_elim import objective_gap, run_successive_elimination
from .tau_solver import AllocationProblem, TauAllocation, low_of_instance, lowall, solve_allocation
from .ucb_ellipsoid import UcbOutcome, run_ucb_ellipsoid, ucb_subroutine
from .vertex_enum import VertexSet, enumerate_vertices

__all__ = [
    "AllocationProblem",
    "EllipsoidState",
    "GeneratorConfig",
    "LPInstance",
    "NoisyOracle",
    "RunReport",
    "SampleLedger",
    "Solution",
    "TauAllocation",
    "ToleranceParams",
    "UcbOutcome",
    "UnknownSet",
    "VertexSet",
    "binding_set",
    "central_cut",
    "check_opt_membership",
    "confidence_radius",
    "delta_prime",
    "draw",
    "enumerate_vertices",
    "generate_instance",
    "initial_ellipsoid",
    "instance_from_json",
    "instance_to_json",
    "low_of_instance",
    "lowall",
    "objective_gap",
    "run_binding_oracle",
    "run_static",
    "run_successive_elimination",
    "run_sweep",
    "run_ucb_ellipsoid",
    "should_stop",
    "solve_allocation",
    "solve_exact",
    "solve_lp_ellipsoid",
    "table1_report",
    "ucb_subroutine",
]
