"""Price offloading plans by hand and feel the trade-offs.

A plan fixes, per device: the serving station, the transmit power, how many
bits of each task go up on the first hop, how many continue over the wire to
the macro server, and the macro/small-cell band split. The evaluator prices
completion time (local and offload pipelines overlap per task) and energy,
and folds deadline violations into a penalty.
"""

import numpy as np

from udmec import EvalConfig, ScenarioConfig, Solution, evaluate, generate_scenario

scn = generate_scenario(ScenarioConfig(num_imds=4, num_sbs=6, num_tasks=2, seed=7))
evalcfg = EvalConfig(alpha=10.0)
theta = scn.config.theta
u, k = scn.num_imds, scn.num_tasks


def report(tag, sol):
    ev = evaluate(scn, sol, evalcfg)
    print(f"{tag:>22}: energy {ev.total_energy_j:8.2f} J "
          f"(stations {ev.bs_energy_j:6.2f} J)  worst time "
          f"{ev.time_s.max():6.2f} s  support {ev.support_ratio:.2f}  "
          f"penalty {ev.penalty:.2f}")
    return ev


# everything on the devices: offloads pinned at the feasibility floor
local = Solution(assoc=np.zeros(u, dtype=int), power_w=np.full(u, theta),
                 first_hop_bits=np.full((u, k), theta),
                 second_hop_bits=np.full((u, k), theta), band_split=1.0)
report("all local", local)

# everything straight to the macro station at full power
to_macro = Solution(assoc=np.zeros(u, dtype=int),
                    power_w=np.full(u, scn.config.p_max_w),
                    first_hop_bits=scn.task_bits.copy(),
                    second_hop_bits=np.full((u, k), theta), band_split=0.5)
report("all to macro", to_macro)

# two-step: each device on its own small station, half the bits forwarded on
two_step = Solution(assoc=np.arange(1, u + 1),
                    power_w=np.full(u, 0.5 * scn.config.p_max_w),
                    first_hop_bits=scn.task_bits * 0.8,
                    second_hop_bits=scn.task_bits * 0.4, band_split=0.3)
report("two-step, split 80/40", two_step)

# the band split steers the macro/small-cell balance both ways
print()
for lam in (0.2, 0.5, 0.8):
    mixed = Solution(assoc=np.array([0, 0, 2, 3]),
                     power_w=np.full(u, 0.1),
                     first_hop_bits=scn.task_bits * 0.6,
                     second_hop_bits=scn.task_bits * 0.1, band_split=lam)
    report(f"mixed, band split {lam}", mixed)

# per-task pipeline view for device 0 of the two-step plan
ev = evaluate(scn, two_step, evalcfg)
print("\ndevice 0, per task: local pipeline vs offload pipeline (s)")
for t in range(k):
    print(f"  task {t}: local {ev.t_local[0, t]:.3f}  offload {ev.t_offload[0, t]:.3f}"
          f"  -> counted {max(ev.t_local[0, t], ev.t_offload[0, t]):.3f}")
print(f"  total {ev.time_s[0]:.3f} s against a {scn.deadline_s[0]:.2f} s deadline")
