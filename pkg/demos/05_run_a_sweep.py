"""Drive a small density sweep through the harness and aggregate it.

The harness regenerates an independent scenario per grid cell from a stable
hash of the cell coordinates, runs every requested solver, and leaves behind
sweep.csv, per-run convergence traces, and a manifest that reproduces the
whole thing byte-for-byte. The desk-scale specs live in sweeps/.
"""

import csv
import tempfile
from pathlib import Path

from udmec import GaConfig, PsoConfig, ScenarioConfig, SweepSpec, run_sweep, summarize

spec = SweepSpec(
    rho_ue=[3, 6, 9],
    rho_sbs=[12],
    p_max_dbm=[23.0],
    seeds=[1, 2, 3],
    solvers=["has", "cmt", "cm"],
    cm_lambdas=[0.25, 0.75],
    base_config=ScenarioConfig(num_tasks=2),
    ga=GaConfig(population_size=24, iterations=40),
    pso=PsoConfig(iterations=40),
    workers=2,
)

out = Path(tempfile.mkdtemp(prefix="udmec_sweep_"))
info = run_sweep(spec, str(out))
print(f"wrote {info['rows']} rows over {info['cells']} cells under {out}\n")

header, rows = summarize(str(out / "sweep.csv"), ["solver", "lam", "rho_ue"])
widths = [10, 6, 7, 3, 16, 14]
cols = ["solver", "lam", "rho_ue", "n", "total_energy_j_median", "support_ratio_median"]
print("  ".join(c.ljust(w) for c, w in zip(cols, widths)))
for row in rows:
    values = dict(zip(header, row))
    cells = [values["solver"], values["lam"] or "-", values["rho_ue"], values["n"],
             f"{float(values['total_energy_j_median']):.3f}",
             f"{float(values['support_ratio_median']):.2f}"]
    print("  ".join(c.ljust(w) for c, w in zip(cells, widths)))

trace = next((out / "traces").rglob("trace_has_1.csv"))
with open(trace, newline="") as f:
    final = list(csv.DictReader(f))[-1]
print(f"\nsample trace {trace.name}: ends at {final['stage']} "
      f"t={final['iteration']} best {float(final['best_fitness']):.3f}")
print(f"rerun `udmec sweep --spec {out/'manifest.json'} --out <dir>` "
      "to reproduce this byte-for-byte")
