"""Adaptive pipeline vs its traditional twin on identical seeds.

The traditional twin fixes the crossover/mutation rates, drops the
diversity-guided kick, shares one linearly decaying inertia weight and never
resamples the global best. Same encoding, same evaluator, same seeds --
whatever separates the curves is the adaptivity.
"""

import numpy as np

from udmec import (EvalConfig, GaConfig, PsoConfig, ScenarioConfig,
                   generate_scenario, run_has, run_hgp)

evalcfg = EvalConfig()
gacfg = GaConfig(population_size=32, iterations=80)
psocfg = PsoConfig(iterations=80)

has_e, hgp_e, wins = [], [], 0
for seed in range(1, 6):
    scn = generate_scenario(ScenarioConfig(num_imds=12, num_sbs=16,
                                           num_tasks=3, seed=seed))
    a = run_has(scn, evalcfg, gacfg, psocfg, seed=seed)
    b = run_hgp(scn, evalcfg, gacfg, psocfg, seed=seed)
    has_e.append(a.evaluation.total_energy_j)
    hgp_e.append(b.evaluation.total_energy_j)
    wins += a.evaluation.fitness >= b.evaluation.fitness
    print(f"seed {seed}: adaptive {a.evaluation.total_energy_j:7.2f} J "
          f"(fitness {a.evaluation.fitness:8.2f})   traditional "
          f"{b.evaluation.total_energy_j:7.2f} J (fitness {b.evaluation.fitness:8.2f})")

print(f"\nmedian energy: adaptive {np.median(has_e):.2f} J, "
      f"traditional {np.median(hgp_e):.2f} J; adaptive wins {wins}/5 on fitness")

scn = generate_scenario(ScenarioConfig(num_imds=12, num_sbs=16, num_tasks=3, seed=1))
a = run_has(scn, evalcfg, gacfg, psocfg, seed=1)
b = run_hgp(scn, evalcfg, gacfg, psocfg, seed=1)
print("\ngenetic-stage best at t=0,20,40,60,80 (seed 1):")
for res, tag in ((a, "adaptive"), (b, "traditional")):
    bests = [f"{r.best_fitness:9.2f}" for r in res.trace
             if r.stage == "ga" and r.iteration % 20 == 0]
    print(f"  {tag:>11}: {'  '.join(bests)}")
