"""Adaptive genetic stage with diversity-guided mutation.

Crossover and mutation probabilities bend with the fitness landscape: pairs
worse than average cross more cautiously, individuals near the maximum mutate
less.  On top of that, an extra mutation pass fires with a probability keyed
to a population diversity measure, so a collapsing population gets kicked
hard and a spread-out one is left alone.  The historical best individual is
re-inserted over the selected worst whenever selection drops it, which makes
the best fitness monotone by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .encoding import GeneDomain, GeneVector, decode, init_genes, project
from .scenario import Scenario
from .sysmodel import EvalConfig, evaluate


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 64
    iterations: int = 200
    cross_low: float = 0.8       # slope for below-average pairs
    cross_high: float = 0.8      # flat rate for at/above-average pairs
    mut_low: float = 0.3         # slope for above-average individuals
    mut_high: float = 0.3        # flat rate for below-average individuals
    dgm_packed: float = 0.6      # diversity-kick probability when collapsed
    dgm_normal: float = 0.03
    dgm_spread: float = 1e-5
    diversity_low: float = 0.01
    diversity_high: float = 0.25
    tournament_size: int = 2
    traditional_mode: bool = False   # fixed rates, no diversity kick
    fixed_pc: float = 0.8
    fixed_pm: float = 0.1

    def validate(self) -> None:
        if self.population_size < 2 or self.population_size % 2:
            raise ValueError("population_size must be even and >= 2")
        if not (0 < self.cross_low <= 1 and 0 < self.cross_high <= 1):
            raise ValueError("crossover coefficients must be in (0, 1]")
        if not (0 < self.mut_low < 1 and 0 < self.mut_high < 1):
            raise ValueError("mutation coefficients must be in (0, 1)")
        if not (0 < self.diversity_low < self.diversity_high < 1):
            raise ValueError("diversity thresholds must satisfy 0 < low < high < 1")
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")


@dataclass
class Population:
    genes: list            # Z GeneVectors
    fitness: np.ndarray    # (Z,)
    best: GeneVector       # historical best
    best_fitness: float
    iteration: int = 0


@dataclass
class TraceRow:
    stage: str
    iteration: int
    best_fitness: float
    mean_fitness: float
    diversity: float
    beta: float | None = None


def crossover_probability(f_pair_min: float, f_min: float, f_avg: float,
                          cfg: GaConfig) -> float:
    """Adaptive crossover rate; the pair is summarized by its weaker member."""
    if not (f_pair_min < f_avg):
        return cfg.cross_high
    denom = f_avg - f_min
    if not np.isfinite(denom) or denom <= 0.0:
        return cfg.cross_high
    return cfg.cross_low * (f_pair_min - f_min) / denom


def mutation_probability(f_z: float, f_max: float, f_avg: float,
                         cfg: GaConfig) -> float:
    """Adaptive mutation rate; the fitter the individual, the gentler."""
    if f_z < f_avg:
        return cfg.mut_high
    denom = f_max - f_avg
    if not np.isfinite(denom) or denom <= 0.0:
        return cfg.mut_low
    return cfg.mut_low * (f_max - f_z) / denom


def dgm_probability(diversity: float, cfg: GaConfig) -> float:
    if diversity < cfg.diversity_low:
        return cfg.dgm_packed
    if diversity < cfg.diversity_high:
        return cfg.dgm_normal
    return cfg.dgm_spread


def population_diversity(genes: list, domain: GeneDomain) -> float:
    """Mean over the five blocks of the normalized spread around the block mean.

    Each block contributes the average Euclidean distance of individuals from
    the block centroid, scaled by the diagonal of the block's feasible box.
    """
    z = len(genes)
    blocks = [
        (np.array([g.bs_choice for g in genes], dtype=float), domain.diag_bs),
        (np.array([g.tx_power for g in genes]), domain.diag_power),
        (np.array([g.first_hop for g in genes]), domain.diag_first_hop),
        (np.array([g.second_hop for g in genes]), domain.diag_second_hop),
        (np.array([[g.band_split] for g in genes]), domain.diag_band),
    ]
    total = 0.0
    for mat, diag in blocks:
        spread = np.sqrt(((mat - mat.mean(axis=0)) ** 2).sum(axis=1)).sum()
        total += spread / (z * diag)
    return total / 5.0


def mutate(genes: GeneVector, scenario: Scenario, rng: np.random.Generator) -> GeneVector:
    """Perturb every gene toward its box maximum or minimum.

    Per gene, one draw sets the magnitude and a second picks the direction:
    above 0.5 the gene moves toward its upper anchor, otherwise toward the
    lower one.  The station block is rounded; the result is re-projected so
    second-hop bits stay under the mutated first-hop bits.
    """
    s = scenario.num_sbs
    cfg = scenario.config
    bits_max = scenario.task_bits.reshape(-1, order="F")

    c1 = rng.random(genes.bs_choice.shape)
    c2 = rng.random(genes.bs_choice.shape)
    bs = np.where(c2 > 0.5,
                  np.rint(c1 * s + (1.0 - c1) * genes.bs_choice),
                  np.rint(c1 + (1.0 - c1) * genes.bs_choice))

    c1 = rng.random(genes.tx_power.shape)
    c2 = rng.random(genes.tx_power.shape)
    power = np.where(c2 > 0.5,
                     c1 * cfg.p_max_w + (1.0 - c1) * genes.tx_power,
                     (1.0 - c1) * genes.tx_power)

    c1 = rng.random(genes.first_hop.shape)
    c2 = rng.random(genes.first_hop.shape)
    first = np.where(c2 > 0.5,
                     c1 * bits_max + (1.0 - c1) * genes.first_hop,
                     (1.0 - c1) * genes.first_hop)

    c1 = rng.random(genes.second_hop.shape)
    c2 = rng.random(genes.second_hop.shape)
    second = np.where(c2 > 0.5,
                      c1 * first + (1.0 - c1) * genes.second_hop,
                      (1.0 - c1) * genes.second_hop)

    c1 = rng.random()
    c2 = rng.random()
    band = c1 + (1.0 - c1) * genes.band_split if c2 > 0.5 else (1.0 - c1) * genes.band_split

    return project(GeneVector(bs, power, first, second, band), scenario)


def crossover(parent_a: GeneVector, parent_b: GeneVector,
              rng: np.random.Generator, scenario: Scenario) -> tuple[GeneVector, GeneVector]:
    """One-point exchange at a common cut fraction.

    The cut fraction is scaled to each block's length; the two per-task
    blocks are cut at identical virtual-device positions and swapped
    together, which keeps each (first-hop, second-hop) pair intact.  The
    band split swaps when the fraction exceeds one half.
    """
    u = rng.random()
    a, b = parent_a.copy(), parent_b.copy()

    cut = int(u * a.bs_choice.size)
    a.bs_choice[:cut], b.bs_choice[:cut] = b.bs_choice[:cut].copy(), a.bs_choice[:cut].copy()
    a.tx_power[:cut], b.tx_power[:cut] = b.tx_power[:cut].copy(), a.tx_power[:cut].copy()

    cut = int(u * a.first_hop.size)
    a.first_hop[:cut], b.first_hop[:cut] = b.first_hop[:cut].copy(), a.first_hop[:cut].copy()
    a.second_hop[:cut], b.second_hop[:cut] = b.second_hop[:cut].copy(), a.second_hop[:cut].copy()

    if u > 0.5:
        a.band_split, b.band_split = b.band_split, a.band_split
    return project(a, scenario), project(b, scenario)


def run_ga(scenario: Scenario, evalcfg: EvalConfig, cfg: GaConfig,
           rng: np.random.Generator) -> tuple[Population, list[TraceRow]]:
    """Evolve a population and keep a per-iteration trace.

    Fitness is re-evaluated only for individuals an operator actually
    touched; evaluation is deterministic so this does not change results.
    """
    cfg.validate()
    z = cfg.population_size
    domain = GeneDomain.from_scenario(scenario)

    def fitness_of(genes: GeneVector) -> float:
        return evaluate(scenario, decode(genes, scenario), evalcfg).fitness

    pop = [init_genes(scenario, rng) for _ in range(z)]
    fit = np.array([fitness_of(g) for g in pop])
    best_idx = int(np.argmax(fit))
    best = pop[best_idx].copy()
    best_fit = float(fit[best_idx])

    trace = [TraceRow("ga", 0, best_fit, float(fit.mean()),
                      population_diversity(pop, domain))]

    for t in range(1, cfg.iterations + 1):
        # Tournament selection, with replacement.
        picks = rng.integers(0, z, size=(z, cfg.tournament_size))
        winners = picks[np.arange(z), np.argmax(fit[picks], axis=1)]
        pop = [pop[w].copy() for w in winners]
        fit = fit[winners].astype(float)

        # Keep the historical best alive over the selected worst.
        if not any(g.same_genes(best) for g in pop):
            worst = int(np.argmin(fit))
            pop[worst] = best.copy()
            fit[worst] = best_fit

        dirty = np.zeros(z, dtype=bool)
        diversity = population_diversity(pop, domain)
        if not cfg.traditional_mode:
            pd = dgm_probability(diversity, cfg)
            for i in range(z):
                if rng.random() < pd:
                    pop[i] = mutate(pop[i], scenario, rng)
                    dirty[i] = True

        for i in np.flatnonzero(dirty):
            fit[i] = fitness_of(pop[i])
        dirty[:] = False

        # Operator rates are driven by this snapshot of the fitness landscape.
        f_min, f_avg, f_max = float(fit.min()), float(fit.mean()), float(fit.max())

        for i in range(0, z - 1, 2):
            pc = cfg.fixed_pc if cfg.traditional_mode else crossover_probability(
                min(fit[i], fit[i + 1]), f_min, f_avg, cfg)
            if rng.random() < pc:
                pop[i], pop[i + 1] = crossover(pop[i], pop[i + 1], rng, scenario)
                dirty[i] = dirty[i + 1] = True

        for i in range(z):
            pm = cfg.fixed_pm if cfg.traditional_mode else mutation_probability(
                fit[i], f_max, f_avg, cfg)
            if rng.random() < pm:
                pop[i] = mutate(pop[i], scenario, rng)
                dirty[i] = True

        for i in np.flatnonzero(dirty):
            fit[i] = fitness_of(pop[i])

        cur = int(np.argmax(fit))
        if fit[cur] > best_fit:
            best = pop[cur].copy()
            best_fit = float(fit[cur])

        trace.append(TraceRow("ga", t, best_fit, float(fit.mean()), diversity))

    return Population(pop, fit, best, best_fit, cfg.iterations), trace
