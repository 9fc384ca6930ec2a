"""Run the two-stage search and watch it converge.

The genetic stage does the coarse work (which station, roughly how much to
ship), then the swarm stage polishes the continuous knobs starting from the
genetic stage's final population. Both stages keep their best-so-far
monotone, so the trace is a clean convergence curve.
"""

from udmec import (EvalConfig, GaConfig, PsoConfig, ScenarioConfig,
                   generate_scenario, run_has, solve_cm, solve_cmt)

scn = generate_scenario(ScenarioConfig(num_imds=8, num_sbs=12, num_tasks=3, seed=3))
evalcfg = EvalConfig()
gacfg = GaConfig(population_size=32, iterations=60)
psocfg = PsoConfig(iterations=60)

res = run_has(scn, evalcfg, gacfg, psocfg, seed=1)

print("best-fitness trajectory (every 10th iteration):")
for row in res.trace:
    if row.iteration % 10 == 0:
        beta = f"  beta {row.beta:g}" if row.beta is not None else ""
        print(f"  {row.stage:>3} t={row.iteration:3d}  best {row.best_fitness:10.3f}  "
              f"mean {row.mean_fitness:10.4g}  spread {row.diversity:.4f}{beta}")

ev = res.evaluation
print(f"\nsearched plan: {ev.total_energy_j:.2f} J, support {ev.support_ratio:.2f}, "
      f"penalty {ev.penalty:.2f} ({res.runtime_s:.1f} s wall)")

sol = res.solution
macro = int((sol.assoc == 0).sum())
offload_share = float(sol.first_hop_bits.sum() / scn.task_bits.sum())
forward_share = float(sol.second_hop_bits[sol.assoc >= 1].sum()
                      / max(sol.first_hop_bits[sol.assoc >= 1].sum(), 1.0))
print(f"it sends {macro}/{scn.num_imds} devices to the macro station, "
      f"offloads {offload_share:.0%} of all bits, forwards {forward_share:.0%} "
      f"of the small-cell bits on, band split {sol.band_split:.2f}")

print("\nagainst the closed-form baselines:")
cmt = solve_cmt(scn, evalcfg).evaluation
print(f"  all local:    {cmt.total_energy_j:8.2f} J, support {cmt.support_ratio:.2f}")
for lam in (0.25, 0.75):
    cm = solve_cm(scn, evalcfg, band_split=lam).evaluation
    print(f"  all to macro (split {lam}): {cm.total_energy_j:8.2f} J, "
          f"support {cm.support_ratio:.2f}, penalty {cm.penalty:.1f}")
