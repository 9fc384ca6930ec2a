"""Top-level solvers: the two-stage search and the closed-form baselines.

The hierarchical search runs the genetic stage for coarse structure (which
station, roughly how much to offload) and hands its final population to the
swarm stage for fine numeric polish.  The traditional twin runs the same
pipeline with fixed operator rates, no diversity kick, shared linear inertia
and no global-best resampling.  Two deterministic baselines bracket the
search: compute everything on the devices, or push everything to the macro
station at full power.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, replace

import numpy as np

from .encoding import GeneVector, decode
from .ga import GaConfig, run_ga
from .pso import PsoConfig, run_pso
from .scenario import Scenario
from .sysmodel import EvalConfig, Evaluation, Solution, evaluate


@dataclass
class SolverResult:
    solver: str
    seed: int | None
    solution: Solution
    evaluation: Evaluation
    trace: list          # TraceRows, both stages for the two-stage solvers
    runtime_s: float

    def to_dict(self) -> dict:
        return {
            "solver": self.solver,
            "seed": self.seed,
            "solution": self.solution.to_dict(),
            "evaluation": self.evaluation.to_dict(),
            "runtime_s": self.runtime_s,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _finish(solver: str, seed, scenario, evalcfg, genes_or_solution,
            trace, t0) -> SolverResult:
    if isinstance(genes_or_solution, GeneVector):
        solution = decode(genes_or_solution, scenario)
    else:
        solution = genes_or_solution
    evaluation = evaluate(scenario, solution, evalcfg)
    return SolverResult(solver, seed, solution, evaluation, trace,
                        time.perf_counter() - t0)


def _run_two_stage(solver: str, scenario: Scenario, evalcfg: EvalConfig,
                   gacfg: GaConfig, psocfg: PsoConfig, seed: int) -> SolverResult:
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    population, ga_trace = run_ga(scenario, evalcfg, gacfg, rng)

    # Hand over the final population with the historical best guaranteed in it,
    # so the swarm's global best starts at the genetic stage's best.
    handoff = [g.copy() for g in population.genes]
    if not any(g.same_genes(population.best) for g in handoff):
        handoff[int(np.argmin(population.fitness))] = population.best.copy()
    pso_best, pso_trace = run_pso(scenario, evalcfg, psocfg, handoff, rng)

    # The swarm cannot regress below its seeding, but keep the max explicit.
    ga_fit = population.best_fitness
    pso_fit = evaluate(scenario, decode(pso_best, scenario), evalcfg).fitness
    best = pso_best if pso_fit >= ga_fit else population.best
    return _finish(solver, seed, scenario, evalcfg, best, ga_trace + pso_trace, t0)


def run_has(scenario: Scenario, evalcfg: EvalConfig, gacfg: GaConfig,
            psocfg: PsoConfig, seed: int) -> SolverResult:
    """Adaptive genetic stage, then adaptive swarm stage."""
    return _run_two_stage("has", scenario, evalcfg, gacfg, psocfg, seed)


def run_hgp(scenario: Scenario, evalcfg: EvalConfig, gacfg: GaConfig,
            psocfg: PsoConfig, seed: int) -> SolverResult:
    """Same pipeline with both stages in traditional (non-adaptive) mode."""
    return _run_two_stage(
        "hgp", scenario, evalcfg,
        replace(gacfg, traditional_mode=True),
        replace(psocfg, traditional_mode=True),
        seed,
    )


def solve_cmt(scenario: Scenario, evalcfg: EvalConfig = EvalConfig()) -> SolverResult:
    """Everything computed on the devices; offloads sit at the feasibility floor.

    Association is pinned to the macro station and power to the floor, both
    immaterial up to floor-sized crumbs.
    """
    t0 = time.perf_counter()
    cfg = scenario.config
    u, k = scenario.num_imds, scenario.num_tasks
    floor = np.full((u, k), cfg.theta)
    solution = Solution(
        assoc=np.zeros(u, dtype=int),
        power_w=np.full(u, cfg.theta),
        first_hop_bits=floor.copy(),
        second_hop_bits=floor.copy(),
        band_split=1.0,
    )
    return _finish("cmt", None, scenario, evalcfg, solution, [], t0)


def solve_cm(scenario: Scenario, evalcfg: EvalConfig = EvalConfig(),
             band_split: float = 0.5) -> SolverResult:
    """Everything offloaded to the macro station at full transmit power."""
    cfg = scenario.config
    if not (cfg.theta <= band_split <= 1.0):
        raise ValueError("band_split outside [theta, 1]")
    t0 = time.perf_counter()
    u, k = scenario.num_imds, scenario.num_tasks
    solution = Solution(
        assoc=np.zeros(u, dtype=int),
        power_w=np.full(u, cfg.p_max_w),
        first_hop_bits=scenario.task_bits.copy(),
        second_hop_bits=np.full((u, k), cfg.theta),
        band_split=band_split,
    )
    return _finish("cm", None, scenario, evalcfg, solution, [], t0)
