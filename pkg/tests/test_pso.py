import numpy as np
import pytest

from udmec import (EvalConfig, PsoConfig, decode, evaluate, init_genes,
                   init_swarm, project, pso_step, resample_gbest, run_pso)
from udmec.pso import update_beta, update_inertia, update_positions, update_velocities
from conftest import ConstRng, build_scenario


def make_swarm(scn, n=4, seed=0, cfg=PsoConfig()):
    rng = np.random.default_rng(seed)
    pop = [init_genes(scn, rng) for _ in range(n)]
    return init_swarm(scn, EvalConfig(), cfg, pop)


# ---- inertia --------------------------------------------------------------

def test_inertia_step_size(tiny_scenario):
    cfg = PsoConfig(iterations=100)
    swarm = make_swarm(tiny_scenario, cfg=cfg)
    swarm.kappa[:] = 0.65
    best = swarm.gbest_idx
    update_inertia(swarm, cfg, t=1)
    step = (0.9 - 0.4) / 100
    for z, kap in enumerate(swarm.kappa):
        expected = 0.65 + step if z == best else 0.65 - step
        assert kap == pytest.approx(expected)


def test_inertia_clamps_both_ends(tiny_scenario):
    cfg = PsoConfig(iterations=10)
    swarm = make_swarm(tiny_scenario, cfg=cfg)
    swarm.kappa[:] = cfg.kappa_min
    swarm.kappa[swarm.gbest_idx] = cfg.kappa_max
    update_inertia(swarm, cfg, t=5)
    assert swarm.kappa[swarm.gbest_idx] == cfg.kappa_max
    others = np.delete(swarm.kappa, swarm.gbest_idx)
    assert np.all(others == cfg.kappa_min)


# ---- velocity / position --------------------------------------------------

def test_velocity_fixed_point(tiny_scenario):
    swarm = make_swarm(tiny_scenario, n=3)
    # all particles sitting on the global best with zero velocity stay put
    for z in range(3):
        swarm.positions[z] = swarm.gbest.copy()
        swarm.pbest_pos[z] = swarm.gbest.copy()
    update_velocities(swarm, PsoConfig(), np.random.default_rng(1))
    for v in swarm.velocities:
        assert np.all(v.bs_choice == 0) and np.all(v.tx_power == 0)
        assert np.all(v.first_hop == 0) and np.all(v.second_hop == 0)
        assert v.band_split == 0


def test_velocity_scalar_arithmetic(tiny_scenario):
    cfg = PsoConfig(self_learn=2.0, social_learn=2.0)
    swarm = make_swarm(tiny_scenario, n=1)
    swarm.kappa[:] = 0.5
    x = swarm.positions[0]
    swarm.pbest_pos[0] = x.copy()
    swarm.pbest_pos[0].tx_power = x.tx_power + 1.0
    swarm.gbest = x.copy()
    swarm.gbest.tx_power = x.tx_power + 1.0
    swarm.velocities[0].tx_power[:] = 2.0
    update_velocities(swarm, cfg, ConstRng(0.5))
    # 0.5*2 + 2*0.5*1 + 2*0.5*1 = 3
    assert swarm.velocities[0].tx_power == pytest.approx([3.0, 3.0])


def test_velocity_pure_inertia(tiny_scenario):
    cfg = PsoConfig(self_learn=0.0, social_learn=0.0)
    swarm = make_swarm(tiny_scenario, n=2)
    swarm.kappa[:] = 0.5
    swarm.velocities[0].first_hop[:] = 8.0
    for _ in range(3):
        update_velocities(swarm, cfg, np.random.default_rng(2))
    assert swarm.velocities[0].first_hop == pytest.approx(np.full(4, 1.0))


def test_position_update_rounds_and_projects(tiny_scenario):
    swarm = make_swarm(tiny_scenario, n=1)
    x = swarm.positions[0]
    x.bs_choice = np.array([2.4, 0.0])
    swarm.velocities[0].bs_choice = np.array([1.3, 0.0])
    update_positions(swarm, tiny_scenario)
    # round(3.7) = 4, clamped onto the largest station index
    assert swarm.positions[0].bs_choice[0] == tiny_scenario.num_sbs
    assert swarm.positions[0].same_genes(
        project(swarm.positions[0], tiny_scenario))


def test_position_unchanged_at_zero_velocity(tiny_scenario):
    swarm = make_swarm(tiny_scenario, n=2)
    before = [g.copy() for g in swarm.positions]
    update_positions(swarm, tiny_scenario)
    for got, want in zip(swarm.positions, before):
        assert got.same_genes(want)


# ---- global best resampling ------------------------------------------------

def test_resample_collapses_onto_gbest(tiny_scenario):
    cfg = PsoConfig(resample_inertia=0.0, beta0=1e-30)
    swarm = make_swarm(tiny_scenario, cfg=cfg)
    swarm.beta = 1e-30
    resample_gbest(swarm, cfg, np.random.default_rng(3), tiny_scenario)
    assert swarm.positions[swarm.gbest_idx].same_genes(
        project(swarm.gbest, tiny_scenario))


def test_resample_no_offset_at_half_draw(tiny_scenario):
    cfg = PsoConfig(resample_inertia=0.0)
    swarm = make_swarm(tiny_scenario, cfg=cfg)
    swarm.beta = 123.0
    resample_gbest(swarm, cfg, ConstRng(0.5), tiny_scenario)  # 1 - 2*0.5 = 0
    assert swarm.positions[swarm.gbest_idx].same_genes(
        project(swarm.gbest, tiny_scenario))


def test_resample_offset_scales_with_domain_width():
    scn = build_scenario(u=1, s=1, k=1, p_max_w=0.2)
    swarm = make_swarm(scn, n=2, cfg=PsoConfig(resample_inertia=0.0))
    zi = swarm.gbest_idx
    swarm.velocities[zi].tx_power[:] = 0.0
    swarm.positions[zi] = swarm.gbest.copy()
    swarm.beta = 1.0
    resample_gbest(swarm, PsoConfig(resample_inertia=0.0), ConstRng(0.0), scn)
    # delta = 0 gives a +beta*width kick; read it off the velocity, pre-clamp
    width = 0.2 - scn.config.theta
    assert swarm.velocities[zi].tx_power == pytest.approx([width], rel=1e-12)


def test_resample_raw_mode_ignores_width():
    scn = build_scenario(u=1, s=1, k=1, p_max_w=0.2)
    cfg = PsoConfig(resample_inertia=0.0, normalized_beta=False)
    swarm = make_swarm(scn, n=2, cfg=cfg)
    zi = swarm.gbest_idx
    swarm.velocities[zi].tx_power[:] = 0.0
    swarm.positions[zi] = swarm.gbest.copy()
    swarm.beta = 0.07
    resample_gbest(swarm, cfg, ConstRng(0.0), scn)
    assert swarm.velocities[zi].tx_power == pytest.approx([0.07], rel=1e-12)


# ---- beta -----------------------------------------------------------------

def test_beta_doubles_after_success_streak(tiny_scenario):
    cfg = PsoConfig()
    swarm = make_swarm(tiny_scenario, cfg=cfg)
    swarm.n_success, swarm.beta = 15, 1.0
    update_beta(swarm, cfg, improved=True)   # 16 > 15
    assert swarm.beta == 2.0 and swarm.n_fail == 0


def test_beta_halves_after_failure_streak(tiny_scenario):
    cfg = PsoConfig()
    swarm = make_swarm(tiny_scenario, cfg=cfg)
    swarm.n_fail, swarm.beta = 5, 1.0
    update_beta(swarm, cfg, improved=False)  # 6 > 5
    assert swarm.beta == 0.5 and swarm.n_success == 0


def test_beta_unchanged_between_thresholds(tiny_scenario):
    cfg = PsoConfig()
    swarm = make_swarm(tiny_scenario, cfg=cfg)
    swarm.n_success, swarm.beta = 2, 1.0
    update_beta(swarm, cfg, improved=True)   # N1 = 3
    assert swarm.beta == 1.0
    assert swarm.n_success == 3 and swarm.n_fail == 0


# ---- full runs ------------------------------------------------------------

def test_zero_iterations_returns_population_best(tiny_scenario):
    rng = np.random.default_rng(30)
    pop = [init_genes(tiny_scenario, rng) for _ in range(6)]
    best, trace = run_pso(tiny_scenario, EvalConfig(), PsoConfig(iterations=0),
                          pop, np.random.default_rng(31))
    fits = [evaluate(tiny_scenario, decode(g, tiny_scenario)).fitness for g in pop]
    got = evaluate(tiny_scenario, decode(best, tiny_scenario)).fitness
    assert got == pytest.approx(max(fits))
    assert len(trace) == 1


def test_gbest_monotone_and_positions_feasible(tiny_scenario):
    rng = np.random.default_rng(32)
    pop = [init_genes(tiny_scenario, rng) for _ in range(8)]
    swarm = init_swarm(tiny_scenario, EvalConfig(), PsoConfig(iterations=30), pop)
    cfg = PsoConfig(iterations=30)
    prev_gbest = swarm.gbest_fit
    prev_pbest = swarm.pbest_fit.copy()
    for t in range(1, 31):
        pso_step(swarm, tiny_scenario, EvalConfig(), cfg, rng, t)
        assert swarm.gbest_fit >= prev_gbest
        assert np.all(swarm.pbest_fit >= prev_pbest)
        assert swarm.gbest_fit == pytest.approx(swarm.pbest_fit.max())
        for g in swarm.positions:
            assert g.same_genes(project(g, tiny_scenario))
        prev_gbest = swarm.gbest_fit
        prev_pbest = swarm.pbest_fit.copy()


def test_beta_stays_positive_and_bounded(tiny_scenario):
    rng = np.random.default_rng(33)
    pop = [init_genes(tiny_scenario, rng) for _ in range(6)]
    cfg = PsoConfig(iterations=40)
    swarm = init_swarm(tiny_scenario, EvalConfig(), cfg, pop)
    for t in range(1, 41):
        pso_step(swarm, tiny_scenario, EvalConfig(), cfg, rng, t)
        assert cfg.beta0 * 2.0 ** (-40) <= swarm.beta <= cfg.beta0 * 2.0 ** 40


def test_same_seed_same_trace(tiny_scenario):
    def one(seed):
        rng = np.random.default_rng(seed)
        pop = [init_genes(tiny_scenario, rng) for _ in range(6)]
        _, trace = run_pso(tiny_scenario, EvalConfig(), PsoConfig(iterations=20),
                           pop, rng)
        return [(r.iteration, r.best_fitness, r.mean_fitness, r.beta) for r in trace]

    assert one(40) == one(40)
    assert one(40) != one(41)


def test_traditional_mode_monotone_without_beta(tiny_scenario):
    rng = np.random.default_rng(42)
    pop = [init_genes(tiny_scenario, rng) for _ in range(6)]
    cfg = PsoConfig(iterations=25, traditional_mode=True)
    _, trace = run_pso(tiny_scenario, EvalConfig(), cfg, pop, rng)
    best = [r.best_fitness for r in trace]
    assert all(b2 >= b1 for b1, b2 in zip(best, best[1:]))
    assert all(r.beta is None for r in trace)


def test_config_validation():
    with pytest.raises(ValueError):
        PsoConfig(kappa_min=0.9, kappa_max=0.4).validate()
    with pytest.raises(ValueError):
        PsoConfig(beta0=0.0).validate()
    PsoConfig().validate()
