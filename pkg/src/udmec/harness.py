"""Experiment harness: seeded sweeps over device density and power caps.

A sweep walks the grid (device count) x (station count) x (power cap) x
(seed) x (solver), regenerates an independent scenario per cell from a
stable hash of the cell coordinates, and writes one metrics row per run.
Everything a run produced is reproducible from the manifest alone; wall
clock goes to a separate file so the main outputs are byte-stable.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .ga import GaConfig
from .pso import PsoConfig
from .scenario import ConfigError, ScenarioConfig, dbm_to_watts, generate_scenario
from .solvers import SolverResult, run_has, run_hgp, solve_cm, solve_cmt
from .sysmodel import EvalConfig

SWEEP_COLUMNS = ["solver", "seed", "rho_ue", "rho_sbs", "p_max_dbm", "lam",
                 "total_energy_j", "bs_energy_j", "support_ratio", "penalty"]
RUNTIME_COLUMNS = ["solver", "seed", "rho_ue", "rho_sbs", "p_max_dbm", "lam", "runtime_s"]
TRACE_COLUMNS = ["solver", "seed", "stage", "iteration",
                 "best_fitness", "mean_fitness", "diversity", "beta"]
METRIC_COLUMNS = ["total_energy_j", "bs_energy_j", "support_ratio", "penalty"]

KNOWN_SOLVERS = ("has", "hgp", "cmt", "cm")


def fmt(value) -> str:
    """Render a number for CSV: ints verbatim, floats at 17 significant digits."""
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def stable_seed(*parts) -> int:
    """Platform-independent 63-bit seed from a tuple of cell coordinates."""
    text = "|".join(fmt(p) if isinstance(p, (int, float, np.integer)) else str(p)
                    for p in parts)
    digest = hashlib.sha256(text.encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


@dataclass
class SweepSpec:
    rho_ue: list
    rho_sbs: list
    p_max_dbm: list
    seeds: list
    solvers: list = field(default_factory=lambda: list(KNOWN_SOLVERS))
    cm_lambdas: list = field(default_factory=lambda: [0.25, 0.5, 0.75, 1.0])
    base_config: ScenarioConfig = field(default_factory=ScenarioConfig)
    ga: GaConfig = field(default_factory=GaConfig)
    pso: PsoConfig = field(default_factory=PsoConfig)
    alpha: float = 10.0
    trace: bool = True
    workers: int = 1

    def validate(self) -> None:
        for name in ("rho_ue", "rho_sbs", "p_max_dbm", "seeds", "solvers"):
            if not getattr(self, name):
                raise ConfigError(f"sweep field {name} must be a non-empty list")
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigError("sweep seeds must be distinct")
        for s in self.solvers:
            if s not in KNOWN_SOLVERS:
                raise ConfigError(f"unknown solver {s!r}")
        if "cm" in self.solvers and not self.cm_lambdas:
            raise ConfigError("cm_lambdas must be non-empty when cm is swept")
        if any(u < 1 for u in self.rho_ue) or any(s < 1 for s in self.rho_sbs):
            raise ConfigError("rho_ue and rho_sbs entries must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        self.base_config.validate()
        self.ga.validate()
        self.pso.validate()

    @classmethod
    def from_dict(cls, raw: dict) -> "SweepSpec":
        raw = dict(raw)
        base = ScenarioConfig.from_dict(raw.pop("base_config", {}))
        ga = GaConfig(**raw.pop("ga", {}))
        pso = PsoConfig(**raw.pop("pso", {}))
        known = {f for f in cls.__dataclass_fields__}
        for key in raw:
            if key not in known:
                raise ConfigError(f"unknown sweep key {key!r}")
        spec = cls(base_config=base, ga=ga, pso=pso, **raw)
        spec.validate()
        return spec

    @classmethod
    def from_json_file(cls, path: str) -> "SweepSpec":
        with open(path) as f:
            return cls.from_dict(json.load(f))

    def to_manifest(self) -> dict:
        return {
            "rho_ue": list(self.rho_ue),
            "rho_sbs": list(self.rho_sbs),
            "p_max_dbm": list(self.p_max_dbm),
            "seeds": list(self.seeds),
            "solvers": list(self.solvers),
            "cm_lambdas": list(self.cm_lambdas),
            "base_config": self.base_config.to_dict(),
            "ga": asdict(self.ga),
            "pso": asdict(self.pso),
            "alpha": self.alpha,
            "trace": self.trace,
            "workers": self.workers,
        }


def _cell_tag(rho_ue, rho_sbs, p_dbm) -> str:
    return f"ue{rho_ue}_sbs{rho_sbs}_p{p_dbm:g}"


def _config_dict(cfg: ScenarioConfig) -> dict:
    return {k: getattr(cfg, k) for k in cfg.__dataclass_fields__}


def run_cell(spec: SweepSpec, rho_ue: int, rho_sbs: int, p_dbm: float, seed: int):
    """All solver runs for one sweep cell.

    Returns (metric row dicts, trace bundles); the scenario seed depends only
    on the cell coordinates, so adding cells never reshuffles existing ones.
    """
    cfg = ScenarioConfig(**{
        **_config_dict(spec.base_config),
        "num_imds": int(rho_ue),
        "num_sbs": int(rho_sbs),
        "p_max_w": dbm_to_watts(p_dbm),
        "seed": stable_seed(seed, rho_ue, rho_sbs, p_dbm, "scenario"),
    })
    if cfg.num_sbs < cfg.num_imds:
        warnings.warn(f"cell {_cell_tag(rho_ue, rho_sbs, p_dbm)}: fewer small "
                      "stations than devices; densities are usually the other way")
    scenario = generate_scenario(cfg)
    evalcfg = EvalConfig(alpha=spec.alpha)
    solver_seed = stable_seed(seed, rho_ue, rho_sbs, p_dbm, "solver")

    rows, traces = [], []
    for solver in spec.solvers:
        if solver == "cm":
            results = [(lam, solve_cm(scenario, evalcfg, band_split=lam))
                       for lam in spec.cm_lambdas]
        elif solver == "cmt":
            results = [(None, solve_cmt(scenario, evalcfg))]
        elif solver == "has":
            results = [(None, run_has(scenario, evalcfg, spec.ga, spec.pso, solver_seed))]
        else:
            results = [(None, run_hgp(scenario, evalcfg, spec.ga, spec.pso, solver_seed))]
        for lam, res in results:
            ev = res.evaluation
            rows.append({
                "solver": solver, "seed": seed, "rho_ue": rho_ue,
                "rho_sbs": rho_sbs, "p_max_dbm": p_dbm, "lam": lam,
                "total_energy_j": ev.total_energy_j, "bs_energy_j": ev.bs_energy_j,
                "support_ratio": ev.support_ratio, "penalty": ev.penalty,
                "runtime_s": res.runtime_s,
            })
            if spec.trace and res.trace:
                traces.append((solver, seed, res.trace))
    return rows, traces


def _cell_worker(args):
    spec_manifest, rho_ue, rho_sbs, p_dbm, seed = args
    spec = SweepSpec.from_dict(spec_manifest)
    return run_cell(spec, rho_ue, rho_sbs, p_dbm, seed)


def run_sweep(spec: SweepSpec, out_dir: str) -> dict:
    """Run the grid and write sweep.csv, runtimes.csv, manifest.json and traces.

    Cells run independently (optionally in parallel); all files are written
    by this process in grid order, so outputs are byte-identical for a given
    spec no matter the worker count.  Wall clock lives only in runtimes.csv.
    """
    spec.validate()
    os.makedirs(out_dir, exist_ok=True)
    manifest = spec.to_manifest()
    with open(os.path.join(out_dir, "manifest.json"), "w") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)

    cells = [(rho_ue, rho_sbs, p_dbm, seed)
             for rho_ue in spec.rho_ue
             for rho_sbs in spec.rho_sbs
             for p_dbm in spec.p_max_dbm
             for seed in spec.seeds]

    if spec.workers > 1:
        args = [(manifest, *cell) for cell in cells]
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            outcomes = list(pool.map(_cell_worker, args))
    else:
        outcomes = [run_cell(spec, *cell) for cell in cells]

    sweep_path = os.path.join(out_dir, "sweep.csv")
    runtime_path = os.path.join(out_dir, "runtimes.csv")
    with open(sweep_path, "w", newline="") as f_sweep, \
            open(runtime_path, "w", newline="") as f_rt:
        w_sweep = csv.writer(f_sweep)
        w_rt = csv.writer(f_rt)
        w_sweep.writerow(SWEEP_COLUMNS)
        w_rt.writerow(RUNTIME_COLUMNS)
        for cell, (rows, traces) in zip(cells, outcomes):
            for row in rows:
                w_sweep.writerow([row["solver"], fmt(row["seed"]), fmt(row["rho_ue"]),
                                  fmt(row["rho_sbs"]), fmt(row["p_max_dbm"]),
                                  fmt(row["lam"]), fmt(row["total_energy_j"]),
                                  fmt(row["bs_energy_j"]), fmt(row["support_ratio"]),
                                  fmt(row["penalty"])])
                w_rt.writerow([row["solver"], fmt(row["seed"]), fmt(row["rho_ue"]),
                               fmt(row["rho_sbs"]), fmt(row["p_max_dbm"]),
                               fmt(row["lam"]), fmt(row["runtime_s"])])
            tag = _cell_tag(cell[0], cell[1], cell[2])
            for solver, seed, trace in traces:
                tdir = os.path.join(out_dir, "traces", tag)
                os.makedirs(tdir, exist_ok=True)
                write_trace(os.path.join(tdir, f"trace_{solver}_{seed}.csv"),
                            solver, seed, trace)
    return {"cells": len(cells), "rows": sum(len(r) for r, _ in outcomes),
            "sweep_csv": sweep_path}


def write_trace(path: str, solver: str, seed: int, trace: list) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(TRACE_COLUMNS)
        for row in trace:
            w.writerow([solver, fmt(seed), row.stage, fmt(row.iteration),
                        fmt(row.best_fitness), fmt(row.mean_fitness),
                        fmt(row.diversity), fmt(row.beta)])


def write_result(out_dir: str, result: SolverResult) -> None:
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "result.json"), "w") as f:
        f.write(result.to_json())
    if result.trace:
        write_trace(os.path.join(out_dir, f"trace_{result.solver}_{result.seed}.csv"),
                    result.solver, result.seed, result.trace)


def summarize(csv_path: str, group_keys: list[str]):
    """Aggregate sweep rows per group: mean, median, stddev of every metric.

    Returns (header, rows); raises ConfigError naming any missing column.
    """
    with open(csv_path, newline="") as f:
        reader = csv.DictReader(f)
        header_cols = reader.fieldnames or []
        for key in list(group_keys) + METRIC_COLUMNS:
            if key not in header_cols:
                raise ConfigError(f"column {key!r} not present in {csv_path}")
        rows = list(reader)

    groups: dict[tuple, dict[str, list]] = {}
    for row in rows:
        key = tuple(row[k] for k in group_keys)
        bucket = groups.setdefault(key, {m: [] for m in METRIC_COLUMNS})
        for m in METRIC_COLUMNS:
            bucket[m].append(float(row[m]))

    header = list(group_keys) + ["n"]
    for m in METRIC_COLUMNS:
        header += [f"{m}_mean", f"{m}_median", f"{m}_std"]
    out = []
    for key in sorted(groups):
        bucket = groups[key]
        n = len(next(iter(bucket.values())))
        line = list(key) + [str(n)]
        for m in METRIC_COLUMNS:
            vals = np.array(bucket[m])
            line += [fmt(vals.mean()), fmt(float(np.median(vals))), fmt(vals.std())]
        out.append(line)
    return header, out
