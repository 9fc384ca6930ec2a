"""End-to-end acceptance checks (A1-A8), one test per criterion.

Desk scale: 35 small stations, densities 5..35, 3 tasks per device,
population 64, 200 iterations per stage.  The two-stage runs used by the
trend checks are computed once per session and shared.
"""

import os

import numpy as np
import pytest

from udmec import (EvalConfig, GaConfig, PsoConfig, ScenarioConfig, Solution,
                   SweepSpec, decode, evaluate, generate_scenario, init_genes,
                   run_has, run_hgp, run_sweep, solve_cm, solve_cmt, stable_seed)
from udmec.sysmodel import check_constraints
from oracle import brute_force_evaluate

pytestmark = pytest.mark.acceptance

DESK_GA = GaConfig(population_size=64, iterations=200)
DESK_PSO = PsoConfig(iterations=200)
EVALCFG = EvalConfig(alpha=10.0)
DENSITIES = [5, 15, 25, 35]
P_DBM = 23.0
A5_SEEDS = [1, 2, 3, 4, 5]
A6_SEEDS = list(range(1, 11))


def desk_scenario(rho_ue, rho_sbs, seed):
    cfg = ScenarioConfig(
        num_imds=rho_ue, num_sbs=rho_sbs, num_tasks=3,
        seed=stable_seed(seed, rho_ue, rho_sbs, P_DBM, "scenario"))
    return generate_scenario(cfg)


@pytest.fixture(scope="module")
def density_runs():
    """HAS plus baselines over densities x seeds at 23 dBm (feeds A3/A4/A5)."""
    runs = {}
    for rho in DENSITIES:
        for seed in A5_SEEDS:
            scn = desk_scenario(rho, 35, seed)
            solver_seed = stable_seed(seed, rho, 35, P_DBM, "solver")
            runs[(rho, seed)] = {
                "scenario": scn,
                "has": run_has(scn, EVALCFG, DESK_GA, DESK_PSO, solver_seed),
                "cmt": solve_cmt(scn, EVALCFG),
                "cm": {lam: solve_cm(scn, EVALCFG, lam) for lam in (0.25, 0.75)},
            }
    return runs


@pytest.fixture(scope="module")
def head_to_head_runs():
    """HAS vs the traditional pipeline on the dense cell (feeds A3/A6)."""
    runs = {}
    for seed in A6_SEEDS:
        scn = desk_scenario(35, 35, seed)
        solver_seed = stable_seed(seed, 35, 35, P_DBM, "solver")
        runs[seed] = {
            "has": run_has(scn, EVALCFG, DESK_GA, DESK_PSO, solver_seed),
            "hgp": run_hgp(scn, EVALCFG, DESK_GA, DESK_PSO, solver_seed),
        }
    return runs


def test_a1_oracle_equivalence():
    """A1: vectorized evaluation matches the loop-built oracle to 1e-9."""
    checked = 0
    for trial in range(50):
        scn = generate_scenario(ScenarioConfig(
            num_imds=2, num_sbs=2, num_tasks=2, seed=9000 + trial))
        rng = np.random.default_rng(500 + trial)
        sol = decode(init_genes(scn, rng), scn)
        got = evaluate(scn, sol, EVALCFG)
        want = brute_force_evaluate(scn, sol, alpha=10.0)
        assert got.time_s == pytest.approx(want["time_s"], rel=1e-9)
        assert got.energy_j == pytest.approx(want["energy_j"], rel=1e-9)
        assert got.fitness == pytest.approx(want["fitness"], rel=1e-9)
        checked += 1
    assert checked == 50
    print("\nA1 PASS: evaluate matches brute-force oracle on 50 tiny instances")


def test_a2_local_baseline_closed_form():
    """A2: the all-local baseline equals its closed form to 1e-12."""
    rng = np.random.default_rng(7)
    for trial in range(100):
        cfg = ScenarioConfig(
            num_imds=int(rng.integers(1, 6)),
            num_sbs=int(rng.integers(1, 6)),
            num_tasks=int(rng.integers(1, 5)),
            seed=3000 + trial)
        scn = generate_scenario(cfg)
        res = solve_cmt(scn, EVALCFG)
        cycles = scn.task_cycles
        t_expect = scn.num_tasks * cycles.sum(axis=1) / cfg.imd_cpu_hz
        f = cfg.imd_cpu_hz * cycles / cycles.sum(axis=1, keepdims=True)
        e_expect = float((cfg.chip_kappa * cycles * f ** 2).sum())
        assert res.evaluation.time_s == pytest.approx(t_expect, rel=1e-12)
        assert res.evaluation.total_energy_j == pytest.approx(e_expect, rel=1e-12)
    print("\nA2 PASS: all-local baseline matches closed form on 100 instances")


def test_a3_monotone_convergence(density_runs, head_to_head_runs):
    """A3: best fitness never decreases inside any stage of any run."""
    inspected = 0
    results = [c["has"] for c in density_runs.values()]
    for pair in head_to_head_runs.values():
        results += [pair["has"], pair["hgp"]]
    for res in results:
        for stage in ("ga", "pso"):
            best = [r.best_fitness for r in res.trace if r.stage == stage]
            assert len(best) == 201
            assert all(b2 >= b1 for b1, b2 in zip(best, best[1:]))
            inspected += 1
    assert inspected == (len(density_runs) + 2 * len(head_to_head_runs)) * 2
    print(f"\nA3 PASS: best fitness monotone in {inspected} solver stages")


def test_a4_feasibility_and_penalty(density_runs, head_to_head_runs):
    """A4: evaluated solutions satisfy the constraint box; penalty re-derives."""

    def audit(scn, sol, ev):
        check_constraints(scn, sol)  # raises on any violation
        over = np.maximum(0.0, ev.time_s - scn.deadline_s)
        expect = float(10.0 * over.sum())
        if expect == 0.0:
            assert ev.penalty == 0.0
        else:
            assert ev.penalty == pytest.approx(expect, rel=1e-12)

    audited = 0
    for cell in density_runs.values():
        scn = cell["scenario"]
        for res in [cell["has"], cell["cmt"], *cell["cm"].values()]:
            audit(scn, res.solution, res.evaluation)
            audited += 1
    for seed, pair in head_to_head_runs.items():
        scn = desk_scenario(35, 35, seed)
        for res in pair.values():
            audit(scn, res.solution, res.evaluation)
            audited += 1
    # fresh random projected candidates, constraints checked inside evaluate
    rng = np.random.default_rng(99)
    scn = desk_scenario(15, 35, 1)
    for _ in range(200):
        sol = decode(init_genes(scn, rng), scn)
        audit(scn, sol, evaluate(scn, sol, EVALCFG))
        audited += 1
    print(f"\nA4 PASS: {audited} solutions feasible with re-derivable penalties")


def test_a5_density_trends(density_runs):
    """A5: energies grow and support shrinks with device density."""
    med_energy, med_bs, med_support = [], [], []
    for rho in DENSITIES:
        evs = [density_runs[(rho, s)]["has"].evaluation for s in A5_SEEDS]
        med_energy.append(float(np.median([e.total_energy_j for e in evs])))
        med_bs.append(float(np.median([e.bs_energy_j for e in evs])))
        med_support.append(float(np.median([e.support_ratio for e in evs])))

    def nearly_nondecreasing(xs, slack=0.02):
        dips = [(a, b) for a, b in zip(xs, xs[1:]) if b < a]
        return len(dips) <= 1 and all(b >= a * (1 - slack) for a, b in dips)

    assert nearly_nondecreasing(med_energy), med_energy
    assert nearly_nondecreasing(med_bs), med_bs
    assert all(b <= a for a, b in zip(med_support, med_support[1:])), med_support

    cmt_support = {rho: [density_runs[(rho, s)]["cmt"].evaluation.support_ratio
                         for s in A5_SEEDS] for rho in DENSITIES}
    flat = [v for vals in cmt_support.values() for v in vals]
    assert all(v == flat[0] for v in flat)

    for (rho, seed), cell in density_runs.items():
        low = cell["cm"][0.25].evaluation.total_energy_j
        high = cell["cm"][0.75].evaluation.total_energy_j
        assert low >= high
    print(f"\nA5 PASS: median energy {med_energy}, station energy {med_bs}, "
          f"support {med_support} over densities {DENSITIES}")


def test_a6_beats_traditional_pipeline(head_to_head_runs):
    """A6: the adaptive pipeline is no worse than the traditional one."""
    has_e = [p["has"].evaluation.total_energy_j for p in head_to_head_runs.values()]
    hgp_e = [p["hgp"].evaluation.total_energy_j for p in head_to_head_runs.values()]
    assert np.median(has_e) <= 1.05 * np.median(hgp_e), (np.median(has_e),
                                                         np.median(hgp_e))
    wins = sum(p["has"].evaluation.fitness >= p["hgp"].evaluation.fitness
               for p in head_to_head_runs.values())
    assert wins >= len(head_to_head_runs) / 2, wins
    print(f"\nA6 PASS: median energy {np.median(has_e):.1f} vs {np.median(hgp_e):.1f} J, "
          f"fitness wins {wins}/{len(head_to_head_runs)}")


def test_a7_tiny_instance_near_optimal():
    """A7: on a one-device instance the search lands within 2% of a grid scan."""
    scn = generate_scenario(ScenarioConfig(num_imds=1, num_sbs=1, num_tasks=1,
                                           seed=77))
    cfg = scn.config
    w, sig = cfg.bandwidth_hz, cfg.noise_w
    bits = float(scn.task_bits[0, 0])
    cyc = float(scn.cycles_per_bit[0, 0])
    deadline = float(scn.deadline_s[0])
    theta = cfg.theta

    ps = np.linspace(theta, cfg.p_max_w, 20)
    firsts = np.linspace(theta, bits, 20)
    seconds = np.linspace(0.0, 1.0, 20)  # as a fraction of the first hop
    lams = np.linspace(theta, 1.0, 20)

    def grid_best_fitness():
        best = -np.inf
        p, lam = np.meshgrid(ps, lams, indexing="ij")
        for first in firsts:
            kept_c = (bits - first) * cyc
            t_loc = kept_c / cfg.imd_cpu_hz
            e_loc = cfg.chip_kappa * kept_c * cfg.imd_cpu_hz ** 2 if kept_c > 0 else 0.0
            # direct upload to the macro station
            rate0 = lam * w * np.log1p(p * scn.gain[0, 0] / sig) / np.log(2.0)
            t0 = first / rate0 + first * cyc / cfg.mbs_cpu_hz
            e0 = p * first / rate0 + first * cyc * cfg.mbs_cycle_energy_j
            f0 = -(e_loc + e0) - 10.0 * np.maximum(
                0.0, np.maximum(t_loc, t0) - deadline)
            best = max(best, float(f0.max()))
            # two-step route through the small station; lam == 1 rows price
            # an empty small-cell band as infinite time, as the model does
            rate1 = (1.0 - lam) * w * np.log1p(p * scn.gain[0, 1] / sig) / np.log(2.0)
            for frac in seconds:
                fwd = frac * first
                ret_c = (first - fwd) * cyc
                with np.errstate(divide="ignore"):
                    t1 = (first / rate1 + ret_c / cfg.sbs_cpu_hz
                          + fwd / cfg.backhaul_bps + fwd * cyc / cfg.mbs_cpu_hz)
                    e1 = (p * first / rate1 + ret_c * cfg.sbs_cycle_energy_j
                          + cfg.wired_power_w * fwd / cfg.backhaul_bps
                          + fwd * cyc * cfg.mbs_cycle_energy_j)
                f1 = -(e_loc + e1) - 10.0 * np.maximum(
                    0.0, np.maximum(t_loc, t1) - deadline)
                best = max(best, float(f1.max()))
        return best

    # the closed forms above must agree with the model before they may judge it
    rng = np.random.default_rng(3)
    for _ in range(20):
        first = float(rng.uniform(theta, bits))
        sol = Solution(assoc=np.array([rng.integers(0, 2)]),
                       power_w=np.array([rng.uniform(theta, cfg.p_max_w)]),
                       first_hop_bits=np.array([[first]]),
                       second_hop_bits=np.array([[rng.uniform(theta, first)]]),
                       band_split=float(rng.uniform(theta, 1.0)))
        got = evaluate(scn, sol, EVALCFG).fitness
        j = int(sol.assoc[0])
        kept_c = (bits - first) * cyc
        t_loc = kept_c / cfg.imd_cpu_hz
        e_loc = cfg.chip_kappa * kept_c * cfg.imd_cpu_hz ** 2
        if j == 0:
            rate = (sol.band_split * w
                    * np.log1p(sol.power_w[0] * scn.gain[0, 0] / sig) / np.log(2.0))
            t_off = first / rate + first * cyc / cfg.mbs_cpu_hz
            e_off = sol.power_w[0] * first / rate + first * cyc * cfg.mbs_cycle_energy_j
        else:
            fwd = float(sol.second_hop_bits[0, 0])
            ret_c = (first - fwd) * cyc
            rate = ((1.0 - sol.band_split) * w
                    * np.log1p(sol.power_w[0] * scn.gain[0, 1] / sig) / np.log(2.0))
            t_off = (first / rate + ret_c / cfg.sbs_cpu_hz
                     + fwd / cfg.backhaul_bps + fwd * cyc / cfg.mbs_cpu_hz)
            e_off = (sol.power_w[0] * first / rate + ret_c * cfg.sbs_cycle_energy_j
                     + cfg.wired_power_w * fwd / cfg.backhaul_bps
                     + fwd * cyc * cfg.mbs_cycle_energy_j)
        want = -(e_loc + e_off) - 10.0 * max(0.0, max(t_loc, t_off) - deadline)
        assert got == pytest.approx(want, rel=1e-9)

    grid = grid_best_fitness()
    res = run_has(scn, EVALCFG, DESK_GA, DESK_PSO, seed=5)
    found = res.evaluation.fitness
    # energies are penalty-free here, so fitness is just negated energy
    assert res.evaluation.penalty == 0.0
    assert -found <= -grid * 1.02, (found, grid)
    print(f"\nA7 PASS: search energy {-found:.6f} J vs grid {-grid:.6f} J")


def test_a8_byte_identical_outputs(tmp_path):
    """A8: identical seeds give byte-identical sweep outputs, serial or parallel."""
    spec_kw = dict(
        rho_ue=[2, 3], rho_sbs=[4], p_max_dbm=[23.0], seeds=[1, 2],
        solvers=["has", "hgp", "cmt", "cm"], cm_lambdas=[0.25, 0.75],
        base_config=ScenarioConfig(num_tasks=2),
        ga=GaConfig(population_size=8, iterations=6),
        pso=PsoConfig(iterations=6),
    )
    run_sweep(SweepSpec(**spec_kw), str(tmp_path / "a"))
    run_sweep(SweepSpec(**spec_kw), str(tmp_path / "b"))
    run_sweep(SweepSpec(**spec_kw, workers=2), str(tmp_path / "c"))

    def collect(base):
        found = {}
        for root, _, files in os.walk(base):
            for name in sorted(files):
                if name in ("runtimes.csv", "manifest.json"):
                    continue
                path = os.path.join(root, name)
                with open(path, "rb") as f:
                    found[os.path.relpath(path, base)] = f.read()
        return found

    a, b, c = collect(tmp_path / "a"), collect(tmp_path / "b"), collect(tmp_path / "c")
    assert a.keys() == b.keys() == c.keys()
    assert all(a[k] == b[k] for k in a)
    assert all(a[k] == c[k] for k in a)
    assert "sweep.csv" in a and any(k.startswith("traces") for k in a)
    print(f"\nA8 PASS: {len(a)} output files byte-identical across reruns "
          "and worker counts")
