"""Time/energy model for partial two-step offloading and its penalized fitness.

A candidate plan says, for every device: which station it talks to, at what
transmit power, how many bits of each task go up on the first hop, how many
of those are forwarded over the wire to the macro station, and how the
frequency band is split between the macro and small-cell tiers.  Evaluation
prices that plan: per-device completion time (local and offload pipelines run
in parallel per task, tasks run back to back), per-device energy, the
network-wide energy total, and a deadline penalty folded into a fitness that
the search maximizes.

CPU capacity is shared proportionally to cycle demand: a device splits its
own CPU over the cycles it keeps, every station splits its server over every
cycle parked on it.  Shares with zero demand are defined as zero share, zero
time, zero energy, which both avoids 0/0 and agrees with the floored limit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .scenario import Scenario


class ConstraintError(ValueError):
    """A solution handed to `evaluate` violates the feasible box."""


@dataclass
class Solution:
    """Decoded decision variables for one candidate plan."""

    assoc: np.ndarray            # (U,) int, 0 = macro station
    power_w: np.ndarray          # (U,)
    first_hop_bits: np.ndarray   # (U, K) bits sent to the associated station
    second_hop_bits: np.ndarray  # (U, K) bits forwarded on to the macro station
    band_split: float            # fraction of the band reserved for the macro tier

    def to_dict(self) -> dict:
        return {
            "assoc": self.assoc.tolist(),
            "power_w": self.power_w.tolist(),
            "first_hop_bits": self.first_hop_bits.tolist(),
            "second_hop_bits": self.second_hop_bits.tolist(),
            "band_split": self.band_split,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Solution":
        return cls(
            assoc=np.asarray(d["assoc"], dtype=int),
            power_w=np.asarray(d["power_w"], dtype=float),
            first_hop_bits=np.asarray(d["first_hop_bits"], dtype=float),
            second_hop_bits=np.asarray(d["second_hop_bits"], dtype=float),
            band_split=float(d["band_split"]),
        )


@dataclass(frozen=True)
class EvalConfig:
    """Penalty weight per second of deadline violation.

    A scalar applies to every device; an array gives per-device weights.
    """

    alpha: float | np.ndarray = 10.0

    def __post_init__(self):
        if not np.all(np.asarray(self.alpha) > 0):
            raise ValueError("alpha must be > 0")


@dataclass
class Evaluation:
    """Everything the model says about one plan."""

    time_s: np.ndarray        # (U,) completion time
    energy_j: np.ndarray      # (U,) per-device total energy
    total_energy_j: float
    bs_energy_j: float        # uplink + edge execution + wired transfer terms
    penalty: float
    fitness: float            # -total_energy - penalty, maximized by the search
    supported: np.ndarray     # (U,) bool, met its deadline
    t_local: np.ndarray = field(repr=False, default=None)    # (U, K)
    t_offload: np.ndarray = field(repr=False, default=None)  # (U, K)
    e_local: np.ndarray = field(repr=False, default=None)    # (U, K)
    e_offload: np.ndarray = field(repr=False, default=None)  # (U, K)

    @property
    def support_ratio(self) -> float:
        return float(np.mean(self.supported))

    def to_dict(self) -> dict:
        return {
            "time_s": self.time_s.tolist(),
            "energy_j": self.energy_j.tolist(),
            "total_energy_j": self.total_energy_j,
            "bs_energy_j": self.bs_energy_j,
            "penalty": self.penalty,
            "fitness": self.fitness,
            "supported": [bool(x) for x in self.supported],
            "support_ratio": self.support_ratio,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _safe_div(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    """num/den with the 0-demand convention: wherever num == 0 the result is 0."""
    out = np.zeros_like(num, dtype=float)
    mask = num != 0.0
    np.divide(num, den, out=out, where=mask)
    return out


def check_constraints(scenario: Scenario, sol: Solution) -> None:
    """Verify the feasible box (association, power, hop ordering, band split)."""
    cfg = scenario.config
    u, k = scenario.num_imds, scenario.num_tasks
    s = scenario.num_sbs
    if sol.assoc.shape != (u,):
        raise ConstraintError(f"assoc must have shape ({u},)")
    if sol.assoc.min() < 0 or sol.assoc.max() > s:
        raise ConstraintError("association index out of range")
    if sol.power_w.shape != (u,):
        raise ConstraintError(f"power_w must have shape ({u},)")
    if np.any(sol.power_w < cfg.theta) or np.any(sol.power_w > cfg.p_max_w):
        raise ConstraintError("transmit power outside [theta, p_max]")
    for name, arr in [("first_hop_bits", sol.first_hop_bits),
                      ("second_hop_bits", sol.second_hop_bits)]:
        if arr.shape != (u, k):
            raise ConstraintError(f"{name} must have shape ({u}, {k})")
    if np.any(sol.first_hop_bits < cfg.theta) or np.any(sol.first_hop_bits > scenario.task_bits):
        raise ConstraintError("first-hop bits outside [theta, task size]")
    if np.any(sol.second_hop_bits < cfg.theta) or np.any(sol.second_hop_bits > sol.first_hop_bits):
        raise ConstraintError("second-hop bits outside [theta, first-hop bits]")
    if not (cfg.theta <= sol.band_split <= 1.0):
        raise ConstraintError("band split outside [theta, 1]")


def uplink_rate_sbs(scenario: Scenario, sol: Solution, i: int, j: int) -> float:
    """Uplink bit rate of device i toward small station j (requires assoc[i] == j >= 1).

    The small-cell share (1-lambda) of the band is split equally over all
    small stations, then equally over the devices attached to station j.
    """
    assert j >= 1 and sol.assoc[i] == j
    cfg = scenario.config
    n_j = int(np.sum(sol.assoc == j))
    snr = sol.power_w[i] * scenario.gain[i, j] / cfg.noise_w
    band = (1.0 - sol.band_split) * cfg.bandwidth_hz / (scenario.num_sbs * n_j)
    return band * np.log1p(snr) / np.log(2.0)


def uplink_rate_mbs(scenario: Scenario, sol: Solution, i: int) -> float:
    """Uplink bit rate of device i toward the macro station (requires assoc[i] == 0)."""
    assert sol.assoc[i] == 0
    cfg = scenario.config
    n_0 = int(np.sum(sol.assoc == 0))
    snr = sol.power_w[i] * scenario.gain[i, 0] / cfg.noise_w
    band = sol.band_split * cfg.bandwidth_hz / n_0
    return band * np.log1p(snr) / np.log(2.0)


def local_cpu_allocation(scenario: Scenario, sol: Solution, i: int) -> np.ndarray:
    """Device i's CPU split over its tasks, proportional to the cycles it keeps.

    All-offloaded devices report zero for every task; downstream local time
    and energy are zero by the shared convention.
    """
    kept_cycles = (scenario.task_bits[i] - sol.first_hop_bits[i]) * scenario.cycles_per_bit[i]
    total = kept_cycles.sum()
    if total == 0.0:
        return np.zeros_like(kept_cycles)
    return scenario.config.imd_cpu_hz * kept_cycles / total


def sbs_cpu_allocation(scenario: Scenario, sol: Solution, i: int, k: int) -> float:
    """Small station share for task k of device i (requires assoc[i] >= 1)."""
    j = int(sol.assoc[i])
    assert j >= 1
    retained = (sol.first_hop_bits - sol.second_hop_bits) * scenario.cycles_per_bit
    mine = retained[i, k]
    if mine == 0.0:
        return 0.0
    total = retained[sol.assoc == j].sum()
    return scenario.config.sbs_cpu_hz * mine / total


def mbs_cpu_allocation(scenario: Scenario, sol: Solution, i: int, k: int) -> float:
    """Macro station share for task k of device i, over both arrival routes."""
    cyc = scenario.cycles_per_bit
    at_mbs = np.where((sol.assoc == 0)[:, None],
                      sol.first_hop_bits * cyc,
                      sol.second_hop_bits * cyc)
    mine = at_mbs[i, k]
    if mine == 0.0:
        return 0.0
    return scenario.config.mbs_cpu_hz * mine / at_mbs.sum()


def task_time_energy(scenario: Scenario, sol: Solution, evalcfg: EvalConfig,
                     i: int, k: int) -> tuple[float, float, float, float]:
    """(local time, offload time, local energy, offload energy) for one task.

    Scalar reference path; `evaluate` computes the same quantities for the
    whole matrix at once.
    """
    cfg = scenario.config
    bits = scenario.task_bits[i, k]
    cyc = scenario.cycles_per_bit[i, k]
    kept = (bits - sol.first_hop_bits[i, k]) * cyc

    f_loc = local_cpu_allocation(scenario, sol, i)[k]
    t_loc = kept / f_loc if f_loc > 0.0 else 0.0
    e_loc = cfg.chip_kappa * kept * f_loc ** 2

    j = int(sol.assoc[i])
    up = sol.first_hop_bits[i, k]
    if j >= 1:
        fwd = sol.second_hop_bits[i, k]
        retained = (up - fwd) * cyc
        rate = uplink_rate_sbs(scenario, sol, i, j)
        f_sbs = sbs_cpu_allocation(scenario, sol, i, k)
        f_mbs = mbs_cpu_allocation(scenario, sol, i, k)
        t_off = (up / rate
                 + (retained / f_sbs if f_sbs > 0.0 else 0.0)
                 + fwd / cfg.backhaul_bps
                 + (fwd * cyc / f_mbs if f_mbs > 0.0 else 0.0))
        e_off = (sol.power_w[i] * up / rate
                 + retained * cfg.sbs_cycle_energy_j
                 + cfg.wired_power_w * fwd / cfg.backhaul_bps
                 + fwd * cyc * cfg.mbs_cycle_energy_j)
    else:
        rate = uplink_rate_mbs(scenario, sol, i)
        f_mbs = mbs_cpu_allocation(scenario, sol, i, k)
        t_off = up / rate + (up * cyc / f_mbs if f_mbs > 0.0 else 0.0)
        e_off = sol.power_w[i] * up / rate + up * cyc * cfg.mbs_cycle_energy_j
    return t_loc, t_off, e_loc, e_off


def evaluate(scenario: Scenario, sol: Solution, evalcfg: EvalConfig = EvalConfig()) -> Evaluation:
    """Price a feasible plan (callers project/clamp first; violations raise)."""
    check_constraints(scenario, sol)
    cfg = scenario.config
    u = scenario.num_imds
    s = scenario.num_sbs
    lam = sol.band_split
    bits = scenario.task_bits
    cyc = scenario.cycles_per_bit
    assoc = sol.assoc
    is_mbs = assoc == 0
    counts = np.bincount(assoc, minlength=s + 1)

    # Uplink rates: macro tier gets lambda*W split over its devices, the
    # small-cell tier gets the remainder split over stations then devices.
    snr = sol.power_w * scenario.gain[np.arange(u), assoc] / cfg.noise_w
    spectral = np.log1p(snr) / np.log(2.0)  # log1p keeps floor-sized SNRs finite
    band = np.empty(u)
    if is_mbs.any():
        band[is_mbs] = lam * cfg.bandwidth_hz / counts[0]
    if (~is_mbs).any():
        band[~is_mbs] = (1.0 - lam) * cfg.bandwidth_hz / (s * counts[assoc[~is_mbs]])
    rate = band * spectral  # (U,); can be 0 at lam == 1 for small-cell users

    # Local pipeline: device CPU split over the cycles it keeps.
    kept_cycles = (bits - sol.first_hop_bits) * cyc
    kept_total = kept_cycles.sum(axis=1)
    f_loc = cfg.imd_cpu_hz * _safe_div(kept_cycles, kept_total[:, None])
    t_local = _safe_div(kept_cycles, f_loc)
    e_local = cfg.chip_kappa * kept_cycles * f_loc ** 2

    # Cycles parked at each small station and at the macro station.
    retained = np.where(is_mbs[:, None], 0.0,
                        (sol.first_hop_bits - sol.second_hop_bits) * cyc)
    per_station = np.bincount(assoc, weights=retained.sum(axis=1), minlength=s + 1)
    f_sbs = cfg.sbs_cpu_hz * _safe_div(retained, per_station[assoc][:, None])
    t_sbs_exec = _safe_div(retained, f_sbs)

    at_mbs = np.where(is_mbs[:, None], sol.first_hop_bits, sol.second_hop_bits) * cyc
    f_mbs = cfg.mbs_cpu_hz * _safe_div(at_mbs, at_mbs.sum())
    t_mbs_exec = _safe_div(at_mbs, f_mbs)

    # Offload pipeline per task: uplink, edge execution, wired forward, macro execution.
    with np.errstate(divide="ignore"):
        t_up = sol.first_hop_bits / rate[:, None]
    e_up = sol.power_w[:, None] * t_up
    fwd = np.where(is_mbs[:, None], 0.0, sol.second_hop_bits)
    t_wire = fwd / cfg.backhaul_bps
    t_offload = t_up + t_sbs_exec + t_wire + t_mbs_exec
    e_offload = (e_up
                 + retained * cfg.sbs_cycle_energy_j
                 + cfg.wired_power_w * t_wire
                 + at_mbs * cfg.mbs_cycle_energy_j)

    time_s = np.maximum(t_local, t_offload).sum(axis=1)
    energy_j = (e_local + e_offload).sum(axis=1)
    total_energy = float(energy_j.sum())
    bs_energy = float(e_offload.sum())
    over = np.maximum(0.0, time_s - scenario.deadline_s)
    penalty = float(np.sum(np.asarray(evalcfg.alpha) * over))
    return Evaluation(
        time_s=time_s,
        energy_j=energy_j,
        total_energy_j=total_energy,
        bs_energy_j=bs_energy,
        penalty=penalty,
        fitness=-total_energy - penalty,
        supported=time_s <= scenario.deadline_s,
        t_local=t_local,
        t_offload=t_offload,
        e_local=e_local,
        e_offload=e_offload,
    )
