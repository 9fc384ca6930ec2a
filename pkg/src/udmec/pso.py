"""Adaptive particle-swarm stage with global-best resampling.

Each particle carries its own inertia weight: the current global best
particle gets heavier (keeps exploring its direction) while everyone else
cools down.  After the ordinary velocity/position sweep, the particle that
owns the global best is re-thrown into a shrinking/growing box around the
global best position, the spread of which doubles after a streak of
successes and halves after a streak of failures.  That resampling is what
keeps the swarm from stalling on a point nobody can improve.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .encoding import GeneDomain, GeneVector, Velocity, decode, project
from .ga import TraceRow, population_diversity
from .scenario import Scenario
from .sysmodel import EvalConfig, evaluate


@dataclass(frozen=True)
class PsoConfig:
    iterations: int = 200
    self_learn: float = 2.0      # pull toward the personal best
    social_learn: float = 2.0    # pull toward the global best
    resample_inertia: float = 0.72
    kappa_max: float = 0.9
    kappa_min: float = 0.4
    beta0: float = 1.0
    success_limit: int = 15      # streak length that doubles the search box
    failure_limit: int = 5       # streak length that halves it
    normalized_beta: bool = True  # scale the box by each gene's domain width
    traditional_mode: bool = False

    def validate(self) -> None:
        if not (self.self_learn > 0 and self.social_learn > 0):
            raise ValueError("learning factors must be > 0")
        if not self.kappa_min < self.kappa_max:
            raise ValueError("kappa_min must be < kappa_max")
        if self.beta0 <= 0:
            raise ValueError("beta0 must be > 0")
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")


@dataclass
class Swarm:
    positions: list                 # Z GeneVectors
    velocities: list                # Z Velocities
    kappa: np.ndarray               # (Z,) per-particle inertia
    fitness: np.ndarray             # (Z,) fitness of current positions
    pbest_pos: list
    pbest_vel: list
    pbest_fit: np.ndarray
    gbest: GeneVector
    gbest_fit: float
    gbest_idx: int
    beta: float
    n_success: int = 0
    n_fail: int = 0
    iteration: int = 0


def init_swarm(scenario: Scenario, evalcfg: EvalConfig, cfg: PsoConfig,
               initial_population: list) -> Swarm:
    """Particles start on the given positions with zero velocities."""
    if not initial_population:
        raise ValueError("initial_population must be non-empty")
    u, k = scenario.num_imds, scenario.num_tasks
    positions = [g.copy() for g in initial_population]
    fit = np.array([evaluate(scenario, decode(g, scenario), evalcfg).fitness
                    for g in positions])
    best = int(np.argmax(fit))
    return Swarm(
        positions=positions,
        velocities=[Velocity.zeros(u, k) for _ in positions],
        kappa=np.full(len(positions), cfg.kappa_max),
        fitness=fit.copy(),
        pbest_pos=[g.copy() for g in positions],
        pbest_vel=[Velocity.zeros(u, k) for _ in positions],
        pbest_fit=fit.copy(),
        gbest=positions[best].copy(),
        gbest_fit=float(fit[best]),
        gbest_idx=best,
        beta=cfg.beta0,
    )


def update_inertia(swarm: Swarm, cfg: PsoConfig, t: int) -> None:
    """Heat the global best particle, cool the rest; clamp to the legal band."""
    step = t * (cfg.kappa_max - cfg.kappa_min) / max(cfg.iterations, 1)
    swarm.kappa -= step
    swarm.kappa[swarm.gbest_idx] += 2.0 * step
    np.clip(swarm.kappa, cfg.kappa_min, cfg.kappa_max, out=swarm.kappa)


def update_velocities(swarm: Swarm, cfg: PsoConfig, rng: np.random.Generator) -> None:
    """Inertia plus random pulls toward the personal and global bests.

    The station and power blocks share one pair of random factors per device,
    the two per-task blocks share another pair, the band split has its own.
    """
    w1, w2 = cfg.self_learn, cfg.social_learn
    gb = swarm.gbest
    for z, (x, v) in enumerate(zip(swarm.positions, swarm.velocities)):
        pb = swarm.pbest_pos[z]
        kap = swarm.kappa[z]
        r, rh = rng.random(x.bs_choice.shape), rng.random(x.bs_choice.shape)
        v.bs_choice = (kap * v.bs_choice
                       + w1 * r * (pb.bs_choice - x.bs_choice)
                       + w2 * rh * (gb.bs_choice - x.bs_choice))
        v.tx_power = (kap * v.tx_power
                      + w1 * r * (pb.tx_power - x.tx_power)
                      + w2 * rh * (gb.tx_power - x.tx_power))
        m, mh = rng.random(x.first_hop.shape), rng.random(x.first_hop.shape)
        v.first_hop = (kap * v.first_hop
                       + w1 * m * (pb.first_hop - x.first_hop)
                       + w2 * mh * (gb.first_hop - x.first_hop))
        v.second_hop = (kap * v.second_hop
                        + w1 * m * (pb.second_hop - x.second_hop)
                        + w2 * mh * (gb.second_hop - x.second_hop))
        g, gh = rng.random(), rng.random()
        v.band_split = (kap * v.band_split
                        + w1 * g * (pb.band_split - x.band_split)
                        + w2 * gh * (gb.band_split - x.band_split))


def update_positions(swarm: Swarm, scenario: Scenario) -> None:
    """Shift every particle by its velocity and project back into the box."""
    for z, (x, v) in enumerate(zip(swarm.positions, swarm.velocities)):
        swarm.positions[z] = project(GeneVector(
            x.bs_choice + v.bs_choice,
            x.tx_power + v.tx_power,
            x.first_hop + v.first_hop,
            x.second_hop + v.second_hop,
            x.band_split + v.band_split,
        ), scenario)


def resample_gbest(swarm: Swarm, cfg: PsoConfig, rng: np.random.Generator,
                   scenario: Scenario) -> None:
    """Re-throw the owning particle into a box of half-width beta around the
    global best, carrying a damped share of its old velocity.

    The same random offsets feed both the new velocity and the new position,
    so the step stays a consistent position delta.  Offsets are scaled by
    each gene's domain width unless ``normalized_beta`` is off.
    """
    zi = swarm.gbest_idx
    x, v = swarm.positions[zi], swarm.velocities[zi]
    gb = swarm.gbest
    domain = GeneDomain.from_scenario(scenario)
    if cfg.normalized_beta:
        w_bs, w_pow, w_first, w_second, w_band = domain.block_widths()
    else:
        w_bs = w_pow = w_band = 1.0
        w_first = w_second = np.ones_like(domain.bits_max)

    d_dev = rng.random(x.bs_choice.shape)      # shared by station and power blocks
    d_task = rng.random(x.first_hop.shape)     # shared by the two per-task blocks
    d_band = rng.random()
    w3, beta = cfg.resample_inertia, swarm.beta

    bs_t = gb.bs_choice + w3 * v.bs_choice + beta * (1.0 - 2.0 * d_dev) * w_bs
    pow_t = gb.tx_power + w3 * v.tx_power + beta * (1.0 - 2.0 * d_dev) * w_pow
    first_t = gb.first_hop + w3 * v.first_hop + beta * (1.0 - 2.0 * d_task) * w_first
    second_t = gb.second_hop + w3 * v.second_hop + beta * (1.0 - 2.0 * d_task) * w_second
    band_t = gb.band_split + w3 * v.band_split + beta * (1.0 - 2.0 * d_band) * w_band

    swarm.velocities[zi] = Velocity(
        bs_t - x.bs_choice,
        pow_t - x.tx_power,
        first_t - x.first_hop,
        second_t - x.second_hop,
        band_t - x.band_split,
    )
    swarm.positions[zi] = project(
        GeneVector(bs_t, pow_t, first_t, second_t, band_t), scenario)


def update_beta(swarm: Swarm, cfg: PsoConfig, improved: bool) -> None:
    """Count the success/failure streak and grow or shrink the search box."""
    if improved:
        swarm.n_success += 1
        swarm.n_fail = 0
    else:
        swarm.n_fail += 1
        swarm.n_success = 0
    if swarm.n_success > cfg.success_limit:
        swarm.beta *= 2.0
    elif swarm.n_fail > cfg.failure_limit:
        swarm.beta *= 0.5


def pso_step(swarm: Swarm, scenario: Scenario, evalcfg: EvalConfig,
             cfg: PsoConfig, rng: np.random.Generator, t: int) -> None:
    """One full iteration; ``t`` runs from 1 to the configured count."""
    if cfg.traditional_mode:
        frac = t / max(cfg.iterations, 1)
        swarm.kappa[:] = cfg.kappa_max - (cfg.kappa_max - cfg.kappa_min) * frac
    else:
        update_inertia(swarm, cfg, t)
    update_velocities(swarm, cfg, rng)
    update_positions(swarm, scenario)

    for z, genes in enumerate(swarm.positions):
        swarm.fitness[z] = evaluate(scenario, decode(genes, scenario), evalcfg).fitness
        if swarm.fitness[z] > swarm.pbest_fit[z]:
            swarm.pbest_fit[z] = swarm.fitness[z]
            swarm.pbest_pos[z] = genes.copy()
            swarm.pbest_vel[z] = swarm.velocities[z].copy()

    prev = swarm.gbest_fit
    swarm.gbest_idx = int(np.argmax(swarm.pbest_fit))
    swarm.gbest_fit = float(swarm.pbest_fit[swarm.gbest_idx])
    swarm.gbest = swarm.pbest_pos[swarm.gbest_idx].copy()

    if not cfg.traditional_mode:
        resample_gbest(swarm, cfg, rng, scenario)
        update_beta(swarm, cfg, improved=swarm.gbest_fit != prev)
    swarm.iteration = t


def run_pso(scenario: Scenario, evalcfg: EvalConfig, cfg: PsoConfig,
            initial_population: list, rng: np.random.Generator,
            ) -> tuple[GeneVector, list[TraceRow]]:
    """Refine a population (typically the genetic stage's) into a single best."""
    cfg.validate()
    swarm = init_swarm(scenario, evalcfg, cfg, initial_population)
    domain = GeneDomain.from_scenario(scenario)
    beta_of = (lambda: swarm.beta) if not cfg.traditional_mode else (lambda: None)
    trace = [TraceRow("pso", 0, swarm.gbest_fit, float(swarm.fitness.mean()),
                      population_diversity(swarm.positions, domain), beta_of())]
    for t in range(1, cfg.iterations + 1):
        pso_step(swarm, scenario, evalcfg, cfg, rng, t)
        trace.append(TraceRow("pso", t, swarm.gbest_fit, float(swarm.fitness.mean()),
                              population_diversity(swarm.positions, domain), beta_of()))
    return swarm.gbest.copy(), trace
