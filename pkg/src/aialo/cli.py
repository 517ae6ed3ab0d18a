"""Command-line interface: instance generation, single runs, and benchmarks.

Exit codes: 0 on success, 2 on usage/validation errors, 3 on runtime failure.
All subcommands are byte-reproducible for a fixed --seed, serial or parallel.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import harness
from .errors import AialoError
from .harness import (
    CDF_HEADER,
    SUCC_ELIM_HEADER,
    SWEEP_HEADER,
    TABLE1_HEADER,
    GeneratorConfig,
    derive_seed,
    enrich_report,
    generate_instance,
    rows_to_csv,
    run_algorithm,
)
from .lp_model import ToleranceParams, instance_from_json, instance_to_json_dict

_ALGORITHM_ALIASES = {
    "static": "static",
    "ucb": "ucb_ellipsoid",
    "ucb-ellipsoid": "ucb_ellipsoid",
    "ucb_ellipsoid": "ucb_ellipsoid",
    "binding-oracle": "binding_oracle",
    "binding_oracle": "binding_oracle",
    "succ-elim": "succ_elim",
    "succ_elim": "succ_elim",
}


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--trials", type=int, default=None)
    parser.add_argument("--out", type=str, default=None, help="output path (default: stdout)")
    parser.add_argument("--delta", type=float, default=0.1)
    parser.add_argument("--eps1", type=float, default=0.1, help="optimality tolerance")
    parser.add_argument("--eps2", type=float, default=0.1, help="feasibility tolerance")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker processes (default: 1, or AIALO_THREADS)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aialo")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="emit a random instance as JSON")
    _add_common(p)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--m", type=int, default=80)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--box-bound", type=float, default=500.0)

    p = sub.add_parser("run", help="run one algorithm on a saved instance")
    _add_common(p)
    p.add_argument("--alg", required=True, choices=sorted(_ALGORITHM_ALIASES))
    p.add_argument("--instance", required=True, help="instance JSON path")

    p = sub.add_parser("sweep", help="sample-count sweep along one axis")
    _add_common(p)
    p.add_argument("--axis", required=True, choices=["m", "n", "sigma", "inv_eps"])
    p.add_argument("--values", required=True, help="comma-separated axis values")
    p.add_argument("--m", type=int, default=80)
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--sigma", type=float, default=1.0)

    p = sub.add_parser("table1", help="binding vs non-binding sample means")
    _add_common(p)

    p = sub.add_parser("cdf", help="adaptive-to-oracle sample ratio distribution")
    _add_common(p)

    p = sub.add_parser("succ-elim-bench", help="unknown-c identification benchmark")
    _add_common(p)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--m", type=int, default=6)
    p.add_argument("--box-bound", type=float, default=10.0)

    return parser


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("AIALO_THREADS")
    return max(1, int(env)) if env else 1


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as handle:
            handle.write(text)


def _tolerances(args) -> ToleranceParams:
    return ToleranceParams(delta=args.delta, eps_opt=args.eps1, eps_feas=args.eps2)


def _dispatch(args) -> int:
    tol = _tolerances(args)
    threads = _threads(args)
    if args.command == "generate":
        cfg = GeneratorConfig(n=args.n, m=args.m, sigma=args.sigma,
                              box_bound=args.box_bound, seed=args.seed)
        inst = generate_instance(cfg)
        _emit(json.dumps(instance_to_json_dict(inst)) + "\n", args.out)
        return 0
    if args.command == "run":
        with open(args.instance) as handle:
            inst = instance_from_json(handle.read())
        algorithm = _ALGORITHM_ALIASES[args.alg]
        start = time.perf_counter()
        report = run_algorithm(algorithm, inst, tol, args.seed)
        report.wall_time = time.perf_counter() - start
        enrich_report(report, inst, tol)
        _emit(json.dumps(report.to_json_dict(), indent=2) + "\n", args.out)
        return 0
    if args.command == "sweep":
        values = []
        for chunk in args.values.split(","):
            value = float(chunk)
            values.append(int(value) if args.axis in ("m", "n") else value)
        cfg = GeneratorConfig(n=args.n, m=args.m, sigma=args.sigma)
        rows = harness.run_sweep(args.axis, values, args.trials or 50, cfg, tol,
                                 args.seed, threads=threads)
        _emit(rows_to_csv(SWEEP_HEADER, rows), args.out)
        return 0
    if args.command == "table1":
        rows = harness.table1_report(trials=args.trials or 100, base_seed=args.seed,
                                     threads=threads, tol=tol)
        _emit(rows_to_csv(TABLE1_HEADER, rows), args.out)
        return 0
    if args.command == "cdf":
        rows = harness.cdf_report(trials=args.trials or 500, base_seed=args.seed,
                                  threads=threads, tol=tol)
        _emit(rows_to_csv(CDF_HEADER, rows), args.out)
        return 0
    if args.command == "succ-elim-bench":
        rows = harness.succ_elim_bench(trials=args.trials or 100, base_seed=args.seed,
                                       threads=threads, n=args.n, m=args.m,
                                       box_bound=args.box_bound, delta=args.delta)
        _emit(rows_to_csv(SUCC_ELIM_HEADER, rows), args.out)
        return 0
    raise AssertionError(f"unreachable command {args.command}")


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _dispatch(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AialoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
