"""Reproducible random network instances: geometry, channels, workloads.

A scenario freezes everything the optimizer is not allowed to touch: where
devices and base stations sit, the (shadowed) channel gains toward every
station, the per-device task list and the completion deadlines.  All internal
quantities are SI (Hz, W, bits, s, J, cycles); convenience units only exist
at the JSON boundary.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

KB_BITS = 8000.0  # decimal kilobyte


class ConfigError(ValueError):
    """Raised when a configuration value is out of its legal range."""


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watts_to_dbm(watts: float) -> float:
    return 10.0 * math.log10(watts) + 30.0


@dataclass(frozen=True)
class ScenarioConfig:
    """Knobs for one random network draw.

    Defaults follow the usual simulation setup for this kind of network:
    20 MHz system band, -110 dBm noise, 1 Gbit/s wired backhaul, 1 GHz
    device CPUs and 20 GHz edge servers, 200-500 KB tasks at 50-100
    cycles/bit with 5-10 s deadlines.
    """

    num_imds: int = 5
    num_sbs: int = 35
    num_tasks: int = 3
    cell_radius_km: float = 0.5
    bandwidth_hz: float = 20e6
    noise_w: float = 1e-14
    backhaul_bps: float = 1e9
    imd_cpu_hz: float = 1e9
    sbs_cpu_hz: float = 20e9
    mbs_cpu_hz: float = 20e9
    chip_kappa: float = 1e-25           # switched-capacitance J*s^2/cycle^3
    sbs_cycle_energy_j: float = 1e-9    # 1 W/GHz
    mbs_cycle_energy_j: float = 1e-9
    wired_power_w: float = 1e-3
    deadline_range_s: tuple[float, float] = (5.0, 10.0)
    data_range_bits: tuple[float, float] = (200.0 * KB_BITS, 500.0 * KB_BITS)
    cycles_per_bit_range: tuple[float, float] = (50.0, 100.0)
    p_max_w: float = dbm_to_watts(23.0)
    theta: float = 1e-20                # feasibility floor, avoids divisions by zero
    mbs_pathloss_db: tuple[float, float] = (128.1, 37.6)   # intercept dB, slope dB/decade(km)
    sbs_pathloss_db: tuple[float, float] = (140.7, 36.7)
    shadowing_std_db: float = 8.0
    min_distance_km: float = 0.01
    seed: int = 0

    def validate(self) -> None:
        if self.num_imds < 1:
            raise ConfigError("num_imds must be >= 1")
        if self.num_sbs < 1:
            raise ConfigError("num_sbs must be >= 1")
        if self.num_tasks < 1:
            raise ConfigError("num_tasks must be >= 1")
        positive = [
            ("cell_radius_km", self.cell_radius_km),
            ("bandwidth_hz", self.bandwidth_hz),
            ("noise_w", self.noise_w),
            ("backhaul_bps", self.backhaul_bps),
            ("imd_cpu_hz", self.imd_cpu_hz),
            ("sbs_cpu_hz", self.sbs_cpu_hz),
            ("mbs_cpu_hz", self.mbs_cpu_hz),
            ("chip_kappa", self.chip_kappa),
            ("sbs_cycle_energy_j", self.sbs_cycle_energy_j),
            ("mbs_cycle_energy_j", self.mbs_cycle_energy_j),
            ("wired_power_w", self.wired_power_w),
            ("p_max_w", self.p_max_w),
            ("theta", self.theta),
            ("min_distance_km", self.min_distance_km),
        ]
        for name, value in positive:
            if not (value > 0.0) or not math.isfinite(value):
                raise ConfigError(f"{name} must be strictly positive, got {value!r}")
        for name, (lo, hi) in [
            ("deadline_range_s", self.deadline_range_s),
            ("data_range_bits", self.data_range_bits),
            ("cycles_per_bit_range", self.cycles_per_bit_range),
        ]:
            if not (0.0 < lo <= hi):
                raise ConfigError(f"{name} must satisfy 0 < lo <= hi, got {(lo, hi)!r}")
        if self.shadowing_std_db < 0.0:
            raise ConfigError("shadowing_std_db must be >= 0")
        if self.min_distance_km > self.cell_radius_km:
            raise ConfigError("min_distance_km cannot exceed cell_radius_km")

    # ---- JSON boundary -------------------------------------------------

    @classmethod
    def from_dict(cls, raw: dict) -> "ScenarioConfig":
        """Build a config from a flat JSON dict.

        SI keys are taken as-is; keys with an explicit unit suffix
        (``bandwidth_mhz``, ``p_max_dbm``, ``noise_dbm``, ``data_range_kb``,
        ``*_ghz``, ``backhaul_gbps``, ``wired_power_mw``) are converted.
        Unknown keys are an error so that typos do not silently fall back
        to defaults.
        """
        raw = dict(raw)
        si: dict = {}

        def take(key):
            return raw.pop(key) if key in raw else None

        conversions = [
            ("bandwidth_mhz", "bandwidth_hz", lambda v: v * 1e6),
            ("noise_dbm", "noise_w", dbm_to_watts),
            ("p_max_dbm", "p_max_w", dbm_to_watts),
            ("backhaul_gbps", "backhaul_bps", lambda v: v * 1e9),
            ("imd_cpu_ghz", "imd_cpu_hz", lambda v: v * 1e9),
            ("sbs_cpu_ghz", "sbs_cpu_hz", lambda v: v * 1e9),
            ("mbs_cpu_ghz", "mbs_cpu_hz", lambda v: v * 1e9),
            ("wired_power_mw", "wired_power_w", lambda v: v * 1e-3),
            ("data_range_kb", "data_range_bits",
             lambda v: (v[0] * KB_BITS, v[1] * KB_BITS)),
        ]
        for conv_key, si_key, fn in conversions:
            v = take(conv_key)
            if v is not None:
                if si_key in raw:
                    raise ConfigError(f"both {conv_key} and {si_key} given")
                si[si_key] = fn(v)

        known = set(cls.__dataclass_fields__)
        for key, value in raw.items():
            if key not in known:
                raise ConfigError(f"unknown config key {key!r}")
            si[key] = value
        for key in ("deadline_range_s", "data_range_bits", "cycles_per_bit_range",
                    "mbs_pathloss_db", "sbs_pathloss_db"):
            if key in si:
                si[key] = tuple(si[key])
        cfg = cls(**si)
        cfg.validate()
        return cfg

    @classmethod
    def from_json(cls, text: str) -> "ScenarioConfig":
        return cls.from_dict(json.loads(text))

    def to_dict(self, convenience: bool = False) -> dict:
        d = {
            "num_imds": self.num_imds,
            "num_sbs": self.num_sbs,
            "num_tasks": self.num_tasks,
            "cell_radius_km": self.cell_radius_km,
            "deadline_range_s": list(self.deadline_range_s),
            "cycles_per_bit_range": list(self.cycles_per_bit_range),
            "chip_kappa": self.chip_kappa,
            "sbs_cycle_energy_j": self.sbs_cycle_energy_j,
            "mbs_cycle_energy_j": self.mbs_cycle_energy_j,
            "theta": self.theta,
            "mbs_pathloss_db": list(self.mbs_pathloss_db),
            "sbs_pathloss_db": list(self.sbs_pathloss_db),
            "shadowing_std_db": self.shadowing_std_db,
            "min_distance_km": self.min_distance_km,
            "seed": self.seed,
        }
        if convenience:
            d.update({
                "bandwidth_mhz": self.bandwidth_hz / 1e6,
                "noise_dbm": watts_to_dbm(self.noise_w),
                "p_max_dbm": watts_to_dbm(self.p_max_w),
                "backhaul_gbps": self.backhaul_bps / 1e9,
                "imd_cpu_ghz": self.imd_cpu_hz / 1e9,
                "sbs_cpu_ghz": self.sbs_cpu_hz / 1e9,
                "mbs_cpu_ghz": self.mbs_cpu_hz / 1e9,
                "wired_power_mw": self.wired_power_w * 1e3,
                "data_range_kb": [b / KB_BITS for b in self.data_range_bits],
            })
        else:
            d.update({
                "bandwidth_hz": self.bandwidth_hz,
                "noise_w": self.noise_w,
                "p_max_w": self.p_max_w,
                "backhaul_bps": self.backhaul_bps,
                "imd_cpu_hz": self.imd_cpu_hz,
                "sbs_cpu_hz": self.sbs_cpu_hz,
                "mbs_cpu_hz": self.mbs_cpu_hz,
                "wired_power_w": self.wired_power_w,
                "data_range_bits": list(self.data_range_bits),
            })
        return d

    def to_json(self, convenience: bool = False) -> str:
        return json.dumps(self.to_dict(convenience=convenience), indent=2, sort_keys=True)


@dataclass(frozen=True)
class Scenario:
    """One frozen network instance.

    ``gain[i, j]`` is the linear power gain from device ``i`` toward station
    ``j`` with station 0 being the macro station.  Immutable after
    construction, safe to share between any number of evaluators.
    """

    imd_xy: np.ndarray            # (U, 2) km
    bs_xy: np.ndarray             # (S+1, 2) km, row 0 = macro station
    gain: np.ndarray              # (U, S+1) linear
    task_bits: np.ndarray         # (U, K)
    cycles_per_bit: np.ndarray    # (U, K)
    deadline_s: np.ndarray        # (U,)
    config: ScenarioConfig = field(repr=False)

    @property
    def num_imds(self) -> int:
        return self.task_bits.shape[0]

    @property
    def num_sbs(self) -> int:
        return self.gain.shape[1] - 1

    @property
    def num_tasks(self) -> int:
        return self.task_bits.shape[1]

    @property
    def task_cycles(self) -> np.ndarray:
        """Total CPU cycles per task, bits * cycles/bit."""
        return self.task_bits * self.cycles_per_bit

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "imd_xy": self.imd_xy.tolist(),
            "bs_xy": self.bs_xy.tolist(),
            "gain": self.gain.tolist(),
            "task_bits": self.task_bits.tolist(),
            "cycles_per_bit": self.cycles_per_bit.tolist(),
            "deadline_s": self.deadline_s.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "Scenario":
        return cls(
            imd_xy=np.asarray(d["imd_xy"], dtype=float),
            bs_xy=np.asarray(d["bs_xy"], dtype=float),
            gain=np.asarray(d["gain"], dtype=float),
            task_bits=np.asarray(d["task_bits"], dtype=float),
            cycles_per_bit=np.asarray(d["cycles_per_bit"], dtype=float),
            deadline_s=np.asarray(d["deadline_s"], dtype=float),
            config=ScenarioConfig.from_dict(d["config"]),
        )


def pathloss_db(distance_km: np.ndarray, intercept_db: float, slope_db: float) -> np.ndarray:
    """Log-distance pathloss, distance in km."""
    return intercept_db + slope_db * np.log10(distance_km)


def _uniform_disc(rng: np.random.Generator, n: int, radius: float) -> np.ndarray:
    r = radius * np.sqrt(rng.random(n))
    ang = 2.0 * np.pi * rng.random(n)
    return np.column_stack([r * np.cos(ang), r * np.sin(ang)])


def generate_scenario(config: ScenarioConfig) -> Scenario:
    """Draw a network instance; a pure function of the config (seed included)."""
    config.validate()
    rng = np.random.default_rng(config.seed)
    u, s, k = config.num_imds, config.num_sbs, config.num_tasks

    # Macro station at the cell centre, small stations and devices uniform on the disc.
    sbs_xy = _uniform_disc(rng, s, config.cell_radius_km)
    imd_xy = _uniform_disc(rng, u, config.cell_radius_km)
    bs_xy = np.vstack([np.zeros((1, 2)), sbs_xy])

    dist = np.linalg.norm(imd_xy[:, None, :] - bs_xy[None, :, :], axis=2)
    dist = np.maximum(dist, config.min_distance_km)

    pl = np.empty_like(dist)
    pl[:, 0] = pathloss_db(dist[:, 0], *config.mbs_pathloss_db)
    pl[:, 1:] = pathloss_db(dist[:, 1:], *config.sbs_pathloss_db)
    shadow = rng.normal(0.0, config.shadowing_std_db, size=dist.shape)
    gain = 10.0 ** (-(pl + shadow) / 10.0)

    task_bits = rng.uniform(*config.data_range_bits, size=(u, k))
    cycles = rng.uniform(*config.cycles_per_bit_range, size=(u, k))
    deadline = rng.uniform(*config.deadline_range_s, size=u)

    return Scenario(
        imd_xy=imd_xy,
        bs_xy=bs_xy,
        gain=gain,
        task_bits=task_bits,
        cycles_per_bit=cycles,
        deadline_s=deadline,
        config=config,
    )


def with_overrides(config: ScenarioConfig, **kw) -> ScenarioConfig:
    """Functional update that re-validates."""
    cfg = replace(config, **kw)
    cfg.validate()
    return cfg
