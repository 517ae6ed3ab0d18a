"""Random instance generation, seeded trial execution, and benchmark reports.

Seeds for every trial are derived by hashing (base_seed, axis, value, trial,
role), so adding algorithms or reordering execution never perturbs existing
sample streams, and parallel runs aggregate to byte-identical tables.
"""

from __future__ import annotations

import hashlib
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .baselines import run_binding_oracle, run_static
from .errors import GeneratorExhausted, NonUniqueOptimum
from .lp_model import (
    LPInstance,
    ToleranceParams,
    UnknownSet,
    binding_set,
    check_opt_membership,
    solve_exact,
    _reference_solve,
)
from .reports import RunReport
from .succ_elim import run_successive_elimination
from .tau_solver import low_of_instance
from .ucb_ellipsoid import run_ucb_ellipsoid
from .vertex_enum import enumerate_vertices

UNKNOWN_B_ALGORITHMS = ("static", "ucb_ellipsoid", "binding_oracle")

SWEEP_HEADER = [
    "axis", "axis_value", "algorithm", "trials", "mean_samples", "std_samples",
    "correct_rate", "mean_binding", "mean_nonbinding", "failures",
]
TABLE1_HEADER = ["algorithm", "trials", "mean_binding", "mean_nonbinding"]
CDF_HEADER = ["rank", "ratio", "R"]
SUCC_ELIM_HEADER = [
    "trial", "seed", "vertices", "gap", "low", "rounds", "total_samples",
    "budget", "within_budget", "correct",
]

_BINDING_TOL = 1e-6
# Enumerate vertices for the uniqueness test only while it is this cheap.
_ENUM_BUDGET = 50_000


def derive_seed(*parts) -> int:
    """Stable 64-bit seed from a tuple of labels and values."""
    text = "\x1f".join(repr(p) for p in parts)
    return int.from_bytes(hashlib.blake2b(text.encode(), digest_size=8).digest(), "big")


@dataclass(frozen=True)
class GeneratorConfig:
    """Parameters of the random-instance family used by all benchmarks.

    ``m`` counts all constraint rows including the n appended box rows
    x_i <= box_bound, so m - n rows are drawn at random.
    """

    n: int
    m: int
    sigma: float = 1.0
    box_bound: float = 500.0
    c_range: tuple[float, float] = (-10.0, 10.0)
    b_range: tuple[float, float] = (0.0, 10.0)
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.m < self.n:
            raise ValueError("need n >= 1 and m >= n (box rows are part of m)")
        if self.sigma <= 0 or self.box_bound <= 0:
            raise ValueError("sigma and box_bound must be positive")


def _sample_unit_ball_rows(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    direction = rng.normal(size=(count, n))
    direction /= np.maximum(np.linalg.norm(direction, axis=1, keepdims=True), 1e-300)
    radius = rng.uniform(size=(count, 1)) ** (1.0 / n)
    return direction * radius


def _raw_instance_arrays(cfg: GeneratorConfig, rng: np.random.Generator):
    n = cfg.n
    c = rng.uniform(*cfg.c_range, size=n)
    m_random = cfg.m - n
    b_random = rng.uniform(*cfg.b_range, size=m_random)
    A_random = _sample_unit_ball_rows(rng, m_random, n)
    A = np.vstack([A_random, np.eye(n)])
    b = np.concatenate([b_random, np.full(n, cfg.box_bound)])
    return c, A, b


def _optimum_is_unique(A: np.ndarray, b: np.ndarray, c: np.ndarray,
                       x_star: np.ndarray, rng: np.random.Generator) -> bool:
    """Tie detection: a tiny objective perturbation must not move the argmax."""
    try:
        if math.comb(A.shape[0] + A.shape[1], A.shape[1]) <= _ENUM_BUDGET:
            from .vertex_enum import enumerate_vertices_arrays

            vertices = enumerate_vertices_arrays(A, b)
            values = np.sort(vertices.points @ c)
            return len(values) >= 2 and values[-1] - values[-2] >= 1e-6
        g = rng.normal(size=c.size)
        scale = 1e-9 * np.linalg.norm(c) / max(np.linalg.norm(g), 1e-300)
        x_plus, _ = _reference_solve(A, b, c + scale * g)
        x_minus, _ = _reference_solve(A, b, c - scale * g)
        return np.max(np.abs(x_plus - x_minus)) <= 1e-6 and np.max(np.abs(x_plus - x_star)) <= 1e-5
    except Exception:
        return False


def generate_instance(cfg: GeneratorConfig) -> LPInstance:
    """One random unknown-b instance: c ~ U[c_range]^n, b ~ U[b_range], rows
    uniform on the unit ball, box rows appended, R = box_bound * sqrt(n).
    Instances whose exact solve fails or whose optimum is not unique are
    rejected and redrawn."""
    for attempt in range(100):
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(derive_seed(cfg.seed, "gen", attempt))))
        c, A, b = _raw_instance_arrays(cfg, rng)
        try:
            inst = LPInstance(
                objective=c,
                constraint_matrix=A,
                rhs=b,
                radius_bound=cfg.box_bound * math.sqrt(cfg.n),
                unknown_set=UnknownSet.B,
                noise_scale=np.full(cfg.m, cfg.sigma),
            )
        except Exception:
            continue
        if _optimum_is_unique(A, b, c, inst.exact_solution.point, rng):
            return inst
    raise GeneratorExhausted(f"no acceptable instance after 100 attempts (seed {cfg.seed})")


def run_algorithm(algorithm: str, inst: LPInstance, tol: ToleranceParams, seed: int) -> RunReport:
    if algorithm == "static":
        return run_static(inst, tol, seed)
    if algorithm == "ucb_ellipsoid":
        return run_ucb_ellipsoid(inst, tol, seed)
    if algorithm == "binding_oracle":
        return run_binding_oracle(inst, tol, seed)
    if algorithm == "succ_elim":
        return run_successive_elimination(inst, tol.delta, seed, eps_opt=tol.eps_opt or None)
    raise ValueError(f"unknown algorithm id: {algorithm}")


def enrich_report(report: RunReport, inst: LPInstance, tol: ToleranceParams) -> RunReport:
    """Recompute correctness and the binding/non-binding sample means against
    the true instance; algorithms never self-report these."""
    report.correct = report.output is not None and not report.failed and check_opt_membership(
        inst, report.output, tol
    )
    if inst.unknown_set is UnknownSet.B:
        x_star = solve_exact(inst).point
        binding = sorted(binding_set(inst, x_star, _BINDING_TOL))
        counts = report.per_parameter_samples
        others = sorted(set(range(inst.num_constraints)) - set(binding))
        report.binding_mean = float(counts[binding].mean()) if binding else 0.0
        report.nonbinding_mean = float(counts[others].mean()) if others else 0.0
    return report


# ---------------------------------------------------------------------------
# Trial execution (worker functions must stay module-level for process pools)

def _apply_axis(cfg: GeneratorConfig, tol: ToleranceParams, axis: str, value):
    if axis == "m":
        return replace(cfg, m=int(value)), tol
    if axis == "n":
        return replace(cfg, n=int(value)), tol
    if axis == "sigma":
        return replace(cfg, sigma=float(value)), tol
    if axis == "inv_eps":
        eps = 1.0 / float(value)
        return cfg, ToleranceParams(delta=tol.delta, eps_opt=eps, eps_feas=eps)
    raise ValueError(f"unknown sweep axis: {axis}")


def _trial_task(args):
    cfg_kwargs, tol_args, algorithms, base_seed, axis, value, trial = args
    cfg = GeneratorConfig(**cfg_kwargs, seed=derive_seed(base_seed, axis, value, trial, "instance"))
    tol = ToleranceParams(*tol_args)
    inst = generate_instance(cfg)
    out = []
    for algorithm in algorithms:
        run_seed = derive_seed(base_seed, axis, value, trial, algorithm)
        start = time.perf_counter()
        report = run_algorithm(algorithm, inst, tol, run_seed)
        report.wall_time = time.perf_counter() - start
        out.append(enrich_report(report, inst, tol))
    return out


def _run_trials(cfg: GeneratorConfig, tol: ToleranceParams, trials: int, algorithms,
                base_seed: int, threads: int = 1, axis: str = "none", value=0):
    cfg_kwargs = {
        "n": cfg.n, "m": cfg.m, "sigma": cfg.sigma, "box_bound": cfg.box_bound,
        "c_range": cfg.c_range, "b_range": cfg.b_range,
    }
    tasks = [
        (cfg_kwargs, (tol.delta, tol.eps_opt, tol.eps_feas), tuple(algorithms),
         base_seed, axis, value, trial)
        for trial in range(trials)
    ]
    if threads <= 1:
        results = [_trial_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_trial_task, tasks))
    by_algorithm = {alg: [] for alg in algorithms}
    for trial_reports in results:
        for report in trial_reports:
            by_algorithm[report.algorithm].append(report)
    return by_algorithm


def _aggregate(reports: list[RunReport]) -> dict:
    totals = np.array([r.total_samples for r in reports], dtype=float)
    return {
        "trials": len(reports),
        "mean_samples": float(totals.mean()),
        "std_samples": float(totals.std()),
        "correct_rate": float(np.mean([bool(r.correct) for r in reports])),
        "mean_binding": float(np.mean([r.binding_mean for r in reports])),
        "mean_nonbinding": float(np.mean([r.nonbinding_mean for r in reports])),
        "failures": sum(1 for r in reports if r.failed),
    }


# ---------------------------------------------------------------------------
# Reports

def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def rows_to_csv(header: list[str], rows: list[dict]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(row[key]) for key in header))
    return "\n".join(lines) + "\n"


def run_sweep(axis: str, values, trials: int, base_cfg: GeneratorConfig,
              tol: ToleranceParams, base_seed: int, threads: int = 1,
              algorithms=UNKNOWN_B_ALGORITHMS) -> list[dict]:
    """One row per (axis value, algorithm) with aggregate sample counts."""
    rows = []
    for value in values:
        cfg_v, tol_v = _apply_axis(base_cfg, tol, axis, value)
        by_algorithm = _run_trials(cfg_v, tol_v, trials, algorithms, base_seed,
                                   threads=threads, axis=axis, value=value)
        for algorithm in algorithms:
            row = {"axis": axis, "axis_value": value, "algorithm": algorithm}
            row.update(_aggregate(by_algorithm[algorithm]))
            rows.append(row)
    return rows


def table1_report(trials: int = 100, base_seed: int = 0, threads: int = 1,
                  cfg: GeneratorConfig | None = None,
                  tol: ToleranceParams | None = None) -> list[dict]:
    """Binding vs non-binding sample means for the three unknown-b algorithms."""
    cfg = cfg or GeneratorConfig(n=4, m=80, sigma=1.0)
    tol = tol or ToleranceParams(delta=0.1, eps_opt=0.1, eps_feas=0.1)
    by_algorithm = _run_trials(cfg, tol, trials, UNKNOWN_B_ALGORITHMS, base_seed,
                               threads=threads, axis="table1", value=0)
    rows = []
    for algorithm in ("static", "ucb_ellipsoid", "binding_oracle"):
        agg = _aggregate(by_algorithm[algorithm])
        rows.append({
            "algorithm": algorithm,
            "trials": agg["trials"],
            "mean_binding": agg["mean_binding"],
            "mean_nonbinding": agg["mean_nonbinding"],
        })
    return rows


def cdf_report(trials: int = 500, base_seed: int = 0, threads: int = 1,
               cfg: GeneratorConfig | None = None,
               tol: ToleranceParams | None = None) -> list[dict]:
    """Per-trial ratio of adaptive to oracle sample counts, sorted ascending,
    next to R = m ln(m) / (d ln(d)) (the static-to-oracle reference ratio)."""
    cfg = cfg or GeneratorConfig(n=4, m=80, sigma=1.0)
    tol = tol or ToleranceParams(delta=0.1, eps_opt=0.1, eps_feas=0.1)
    by_algorithm = _run_trials(cfg, tol, trials, ("ucb_ellipsoid", "binding_oracle"),
                               base_seed, threads=threads, axis="cdf", value=0)
    entries = []
    for ucb, oracle in zip(by_algorithm["ucb_ellipsoid"], by_algorithm["binding_oracle"]):
        d = int(np.count_nonzero(oracle.per_parameter_samples))
        ratio = ucb.total_samples / oracle.total_samples if oracle.total_samples else math.inf
        r_ref = (cfg.m * math.log(cfg.m)) / (d * math.log(d)) if d > 1 else math.inf
        entries.append((ratio, r_ref))
    entries.sort(key=lambda pair: pair[0])
    return [{"rank": i + 1, "ratio": ratio, "R": r_ref} for i, (ratio, r_ref) in enumerate(entries)]


# ---------------------------------------------------------------------------
# Unknown-c benchmark

def _succ_elim_task(args):
    (n, m, box_bound, sigma, delta, gap_lo, gap_hi, spread_target, base_seed, trial) = args
    inst, vertices = _generate_unknown_c_instance(
        n=n, m=m, box_bound=box_bound, sigma=sigma,
        seed=derive_seed(base_seed, "succ-elim", trial, "instance"),
        gap_band=(gap_lo, gap_hi), spread_target=spread_target,
    )
    gap = float(np.sort(vertices.points @ inst.objective)[-1] - np.sort(vertices.points @ inst.objective)[-2])
    _, low = low_of_instance(inst, vertices)
    report = run_successive_elimination(inst, delta, derive_seed(base_seed, "succ-elim", trial, "run"))
    values = vertices.points @ inst.objective
    x_star = vertices.points[int(np.argmax(values))]
    correct = report.output is not None and not report.failed and bool(
        np.max(np.abs(report.output - x_star)) <= 1e-6
    )
    k = len(vertices)
    budget = 50.0 * low * math.log(1.0 / gap) * (
        math.log(k) + math.log(1.0 / delta) + math.log(math.log(1.0 / gap))
    )
    return {
        "trial": trial,
        "seed": report.seed,
        "vertices": k,
        "gap": gap,
        "low": low,
        "rounds": report.iterations,
        "total_samples": report.total_samples,
        "budget": budget,
        "within_budget": report.total_samples <= budget,
        "correct": correct,
    }


def _generate_unknown_c_instance(n: int, m: int, box_bound: float, sigma: float, seed: int,
                                 gap_band: tuple[float, float], spread_target: float):
    """Unknown-c instance whose vertex objective values span ``spread_target``
    and whose best-vs-second-best gap falls inside ``gap_band``.

    The rescaling keeps every vertex within one unit of optimal in objective
    value, the regime in which the elimination schedule's per-round budgets
    are meaningful."""
    cfg_kwargs = dict(n=n, m=m, sigma=sigma, box_bound=box_bound, b_range=(0.0, box_bound))
    for attempt in range(1000):
        cfg = GeneratorConfig(**cfg_kwargs, seed=derive_seed(seed, "c-attempt", attempt))
        try:
            base = generate_instance(cfg)
        except GeneratorExhausted:
            continue
        vertices = enumerate_vertices(base)
        if len(vertices) < 2:
            continue
        values = vertices.points @ base.objective
        spread = float(values.max() - values.min())
        if spread <= 0.0:
            continue
        c_scaled = base.objective * (spread_target / spread)
        scaled_values = np.sort(vertices.points @ c_scaled)
        gap = float(scaled_values[-1] - scaled_values[-2])
        if not gap_band[0] <= gap <= gap_band[1]:
            continue
        inst = LPInstance(
            objective=c_scaled,
            constraint_matrix=base.constraint_matrix,
            rhs=base.rhs,
            radius_bound=base.radius_bound,
            unknown_set=UnknownSet.C,
            noise_scale=np.full(n, sigma),
        )
        return inst, vertices
    raise GeneratorExhausted(f"no unknown-c instance matched the gap band (seed {seed})")


def succ_elim_bench(trials: int = 100, base_seed: int = 0, threads: int = 1,
                    n: int = 3, m: int = 6, box_bound: float = 10.0, sigma: float = 1.0,
                    delta: float = 0.1, gap_band: tuple[float, float] = (0.05, 0.45),
                    spread_target: float = 0.9) -> list[dict]:
    """Correctness and sample totals of successive elimination against the
    instance-wise allocation bound, one row per generated instance."""
    tasks = [
        (n, m, box_bound, sigma, delta, gap_band[0], gap_band[1], spread_target, base_seed, trial)
        for trial in range(trials)
    ]
    if threads <= 1:
        return [_succ_elim_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_succ_elim_task, tasks))
