"""Energy-aware device association, power control and two-step computation
offloading for ultra-dense multi-device, multi-task edge networks."""

from .encoding import (GeneDomain, GeneVector, Velocity, decode, encode,
                       init_genes, project, virtual_index_to_pair)
from .ga import (GaConfig, Population, TraceRow, crossover, crossover_probability,
                 dgm_probability, mutate, mutation_probability,
                 population_diversity, run_ga)
from .harness import SweepSpec, run_sweep, stable_seed, summarize
from .pso import PsoConfig, Swarm, init_swarm, pso_step, resample_gbest, run_pso
from .scenario import (ConfigError, Scenario, ScenarioConfig, dbm_to_watts,
                       generate_scenario, watts_to_dbm)
from .solvers import SolverResult, run_has, run_hgp, solve_cm, solve_cmt
from .sysmodel import (ConstraintError, EvalConfig, Evaluation, Solution,
                       evaluate, local_cpu_allocation, mbs_cpu_allocation,
                       sbs_cpu_allocation, task_time_energy, uplink_rate_mbs,
                       uplink_rate_sbs)

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "ConstraintError", "EvalConfig", "Evaluation", "GaConfig",
    "GeneDomain", "GeneVector", "Population", "PsoConfig", "Scenario",
    "ScenarioConfig", "Solution", "SolverResult", "SweepSpec", "Swarm",
    "TraceRow", "Velocity", "crossover", "crossover_probability", "dbm_to_watts",
    "decode", "dgm_probability", "encode", "evaluate", "generate_scenario",
    "init_genes", "init_swarm", "local_cpu_allocation", "mbs_cpu_allocation",
    "mutate", "mutation_probability", "population_diversity", "project",
    "pso_step", "resample_gbest", "run_ga", "run_has", "run_hgp", "run_pso",
    "run_sweep", "sbs_cpu_allocation", "solve_cm", "solve_cmt", "stable_seed",
    "summarize", "task_time_energy", "uplink_rate_mbs", "uplink_rate_sbs",
    "virtual_index_to_pair", "watts_to_dbm",
]
