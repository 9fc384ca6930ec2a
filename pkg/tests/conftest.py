import numpy as np
import pytest

from udmec import Scenario, ScenarioConfig


def build_scenario(u=2, s=2, k=2, gain=None, bits=None, cyc=None,
                   deadline=None, **cfg_kw):
    """Hand-built scenario with explicit channel/task values for exact tests."""
    cfg_kw.setdefault("num_imds", u)
    cfg_kw.setdefault("num_sbs", s)
    cfg_kw.setdefault("num_tasks", k)
    cfg = ScenarioConfig(**cfg_kw)
    if gain is None:
        gain = np.full((u, s + 1), 1e-12)
    if bits is None:
        bits = np.full((u, k), 1e6)
    if cyc is None:
        cyc = np.full((u, k), 100.0)
    if deadline is None:
        deadline = np.full(u, 10.0)
    return Scenario(
        imd_xy=np.zeros((u, 2)),
        bs_xy=np.zeros((s + 1, 2)),
        gain=np.asarray(gain, dtype=float),
        task_bits=np.asarray(bits, dtype=float),
        cycles_per_bit=np.asarray(cyc, dtype=float),
        deadline_s=np.asarray(deadline, dtype=float),
        config=cfg,
    )


class ConstRng:
    """Stand-in generator cycling through fixed uniform draws, for operator tests."""

    def __init__(self, *values):
        self.values = list(values)
        self.calls = 0

    def random(self, size=None):
        v = self.values[self.calls % len(self.values)]
        self.calls += 1
        if size is None:
            return v
        return np.full(size, v)


@pytest.fixture
def tiny_scenario():
    return build_scenario(u=2, s=2, k=2)
