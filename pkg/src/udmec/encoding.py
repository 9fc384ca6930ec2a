"""Flat chromosome/particle representation and its feasibility projection.

An individual carries five blocks: station choice per device, transmit power
per device, first-hop bits and second-hop bits per (device, task) pair, and
the scalar band split.  The two per-task blocks are indexed by a flattened
"virtual device" index that walks the (device, task) grid column by column:
virtual index i (1-based) maps to device ((i-1) mod U)+1 and task
floor((i-1)/U)+1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .scenario import Scenario
from .sysmodel import Solution


@dataclass
class GeneVector:
    """One individual/particle position."""

    bs_choice: np.ndarray    # (U,) int, 0 = macro station
    tx_power: np.ndarray     # (U,) W
    first_hop: np.ndarray    # (U*K,) bits, virtual-device order
    second_hop: np.ndarray   # (U*K,) bits
    band_split: float

    def copy(self) -> "GeneVector":
        return GeneVector(
            self.bs_choice.copy(), self.tx_power.copy(),
            self.first_hop.copy(), self.second_hop.copy(), self.band_split,
        )

    def same_genes(self, other: "GeneVector") -> bool:
        return (
            np.array_equal(self.bs_choice, other.bs_choice)
            and np.array_equal(self.tx_power, other.tx_power)
            and np.array_equal(self.first_hop, other.first_hop)
            and np.array_equal(self.second_hop, other.second_hop)
            and self.band_split == other.band_split
        )

    def to_dict(self) -> dict:
        return {
            "bs_choice": self.bs_choice.tolist(),
            "tx_power": self.tx_power.tolist(),
            "first_hop": self.first_hop.tolist(),
            "second_hop": self.second_hop.tolist(),
            "band_split": self.band_split,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "GeneVector":
        return cls(
            bs_choice=np.asarray(d["bs_choice"], dtype=np.int64),
            tx_power=np.asarray(d["tx_power"], dtype=float),
            first_hop=np.asarray(d["first_hop"], dtype=float),
            second_hop=np.asarray(d["second_hop"], dtype=float),
            band_split=float(d["band_split"]),
        )


@dataclass
class Velocity:
    """Per-block real-valued velocities (station block included; rounding
    happens at the position update)."""

    bs_choice: np.ndarray
    tx_power: np.ndarray
    first_hop: np.ndarray
    second_hop: np.ndarray
    band_split: float

    @classmethod
    def zeros(cls, u: int, k: int) -> "Velocity":
        return cls(np.zeros(u), np.zeros(u), np.zeros(u * k), np.zeros(u * k), 0.0)

    def copy(self) -> "Velocity":
        return Velocity(
            self.bs_choice.copy(), self.tx_power.copy(),
            self.first_hop.copy(), self.second_hop.copy(), self.band_split,
        )


@dataclass(frozen=True)
class GeneDomain:
    """Per-gene bounds plus the diagonal length of each block's feasible box."""

    num_sbs: int
    theta: float
    p_max_w: float
    bits_max: np.ndarray     # (U*K,) upper bounds in virtual-device order
    diag_bs: float
    diag_power: float
    diag_first_hop: float
    diag_second_hop: float
    diag_band: float

    @classmethod
    def from_scenario(cls, scenario: Scenario) -> "GeneDomain":
        cfg = scenario.config
        u, k = scenario.num_imds, scenario.num_tasks
        bits_max = scenario.task_bits.reshape(u * k, order="F").copy()
        widths = bits_max - cfg.theta
        return cls(
            num_sbs=scenario.num_sbs,
            theta=cfg.theta,
            p_max_w=cfg.p_max_w,
            bits_max=bits_max,
            diag_bs=scenario.num_sbs * np.sqrt(u),
            diag_power=(cfg.p_max_w - cfg.theta) * np.sqrt(u),
            diag_first_hop=float(np.sqrt(np.sum(widths ** 2))),
            diag_second_hop=float(np.sqrt(np.sum(widths ** 2))),
            diag_band=1.0 - cfg.theta,
        )

    def block_widths(self) -> tuple:
        """Per-gene box width of each block, used to scale perturbations."""
        return (
            float(self.num_sbs),
            self.p_max_w - self.theta,
            self.bits_max - self.theta,
            self.bits_max - self.theta,
            1.0 - self.theta,
        )


def virtual_index_to_pair(i: int, u: int, k: int) -> tuple[int, int]:
    """Map a 1-based virtual index to its 1-based (device, task) pair."""
    if not 1 <= i <= u * k:
        raise IndexError(f"virtual index {i} outside 1..{u * k}")
    return ((i - 1) % u) + 1, ((i - 1) // u) + 1


def project(genes: GeneVector, scenario: Scenario) -> GeneVector:
    """Clamp every block into its feasible box; idempotent.

    Station choices are rounded then clipped, second-hop bits are re-capped
    by the (possibly clamped) first-hop bits.
    """
    cfg = scenario.config
    s = scenario.num_sbs
    bits_max = scenario.task_bits.reshape(-1, order="F")
    bs = np.clip(np.rint(genes.bs_choice), 0, s).astype(np.int64)
    power = np.clip(genes.tx_power, cfg.theta, cfg.p_max_w)
    first = np.clip(genes.first_hop, cfg.theta, bits_max)
    second = np.clip(genes.second_hop, cfg.theta, first)
    band = float(min(max(genes.band_split, cfg.theta), 1.0))
    return GeneVector(bs, power, first, second, band)


def init_genes(scenario: Scenario, rng: np.random.Generator) -> GeneVector:
    """Uniform draw over the feasible box, then projected onto its floors."""
    cfg = scenario.config
    u, k = scenario.num_imds, scenario.num_tasks
    bits_max = scenario.task_bits.reshape(-1, order="F")
    bs = rng.integers(0, scenario.num_sbs + 1, size=u)
    power = rng.uniform(0.0, cfg.p_max_w, size=u)
    first = rng.uniform(0.0, bits_max)
    second = rng.uniform(0.0, first)
    band = float(rng.random())
    return project(GeneVector(bs, power, first, second, band), scenario)


def decode(genes: GeneVector, scenario: Scenario) -> Solution:
    """Unfold the flat blocks into the decision variables of a plan.

    For macro-associated devices the first-hop genes carry the direct upload
    and the second-hop genes are kept but ignored, so a later association
    flip does not lose information.
    """
    u, k = scenario.num_imds, scenario.num_tasks
    return Solution(
        assoc=genes.bs_choice.astype(int),
        power_w=genes.tx_power.copy(),
        first_hop_bits=genes.first_hop.reshape((u, k), order="F").copy(),
        second_hop_bits=genes.second_hop.reshape((u, k), order="F").copy(),
        band_split=genes.band_split,
    )


def encode(sol: Solution, scenario: Scenario) -> GeneVector:
    """Inverse of `decode` for feasible plans."""
    return GeneVector(
        bs_choice=np.asarray(sol.assoc, dtype=np.int64).copy(),
        tx_power=sol.power_w.copy(),
        first_hop=sol.first_hop_bits.reshape(-1, order="F").copy(),
        second_hop=sol.second_hop_bits.reshape(-1, order="F").copy(),
        band_split=sol.band_split,
    )
