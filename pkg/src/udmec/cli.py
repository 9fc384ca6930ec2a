"""Command line front door: single runs, sweeps, and CSV aggregation.

Exit codes: 0 on success, 2 on configuration errors, 3 on I/O errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from .ga import GaConfig
from .harness import SweepSpec, run_sweep, summarize, write_result
from .pso import PsoConfig
from .scenario import ConfigError, ScenarioConfig, dbm_to_watts, generate_scenario
from .solvers import run_has, run_hgp, solve_cm, solve_cmt
from .sysmodel import EvalConfig

EXIT_OK, EXIT_CONFIG, EXIT_IO = 0, 2, 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="udmec",
        description="Energy-aware offloading for ultra-dense edge networks.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="solve one scenario with one solver")
    run.add_argument("--solver", choices=["has", "hgp", "cmt", "cm"], default="has")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--imds", type=int, default=5)
    run.add_argument("--sbs", type=int, default=35)
    run.add_argument("--tasks", type=int, default=3)
    run.add_argument("--pmax-dbm", type=float, default=23.0)
    run.add_argument("--lambda", dest="lam", type=float, default=0.5,
                     help="band split for the cm solver")
    run.add_argument("--ga-iters", type=int, default=200)
    run.add_argument("--pso-iters", type=int, default=200)
    run.add_argument("--pop", type=int, default=64)
    run.add_argument("--out", default=None, help="directory for result.json and trace")

    sweep = sub.add_parser("sweep", help="run a sweep described by a JSON spec")
    sweep.add_argument("--spec", required=True)
    sweep.add_argument("--out", required=True)
    sweep.add_argument("--workers", type=int, default=None,
                       help="override the spec's worker count")

    summ = sub.add_parser("summarize", help="aggregate a sweep CSV per group")
    summ.add_argument("--in", dest="path", required=True)
    summ.add_argument("--by", default="solver", help="comma-separated group columns")
    summ.add_argument("--out", default=None, help="output CSV (default stdout)")
    return parser


def _cmd_run(args) -> int:
    cfg = ScenarioConfig(
        num_imds=args.imds, num_sbs=args.sbs, num_tasks=args.tasks,
        p_max_w=dbm_to_watts(args.pmax_dbm),
        seed=args.seed,
    )
    cfg.validate()
    scenario = generate_scenario(cfg)
    evalcfg = EvalConfig()
    if args.solver == "cmt":
        result = solve_cmt(scenario, evalcfg)
    elif args.solver == "cm":
        result = solve_cm(scenario, evalcfg, band_split=args.lam)
    else:
        gacfg = GaConfig(population_size=args.pop, iterations=args.ga_iters)
        psocfg = PsoConfig(iterations=args.pso_iters)
        runner = run_has if args.solver == "has" else run_hgp
        result = runner(scenario, evalcfg, gacfg, psocfg, args.seed)
    ev = result.evaluation
    print(f"{result.solver}: energy={ev.total_energy_j:.6g} J "
          f"bs_energy={ev.bs_energy_j:.6g} J support={ev.support_ratio:.3f} "
          f"penalty={ev.penalty:.6g} runtime={result.runtime_s:.2f} s")
    if args.out:
        result.seed = args.seed
        write_result(args.out, result)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    spec = SweepSpec.from_json_file(args.spec)
    if args.workers is not None:
        spec.workers = args.workers
        spec.validate()
    info = run_sweep(spec, args.out)
    print(f"wrote {info['rows']} rows over {info['cells']} cells to {info['sweep_csv']}")
    return EXIT_OK


def _cmd_summarize(args) -> int:
    keys = [k.strip() for k in args.by.split(",") if k.strip()]
    header, rows = summarize(args.path, keys)
    if args.out:
        with open(args.out, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(header)
            w.writerows(rows)
    else:
        w = csv.writer(sys.stdout)
        w.writerow(header)
        w.writerows(rows)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        return _cmd_summarize(args)
    except (ConfigError, ValueError, json.JSONDecodeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
