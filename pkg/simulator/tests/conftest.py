"""
Shared fixtures: hand-placed node layouts and small run configurations.
"""

from typing import Optional, Sequence

import pytest

from app.engine import EventQueue
from app.models import DensityClass, DensityName, MacParams, NodeRole, RadioParams, RoadConfig, RunConfig
from app.scenario import NodeSpec, Scenario


def make_scenario(
    xs: Sequence[float],
    roles: Optional[Sequence[NodeRole]] = None,
    offsets: Optional[Sequence[float]] = None,
) -> Scenario:
    """Nodes on a straight line at y = 0, in the order given."""
    roles = roles or [NodeRole.VEHICLE] * len(xs)
    offsets = offsets or [0.0] * len(xs)
    nodes = tuple(
        NodeSpec(id=i, role=role, x_m=float(x), y_m=0.0, sensitivity_offset_db=float(off))
        for i, (x, role, off) in enumerate(zip(xs, roles, offsets))
    )
    return Scenario(road=RoadConfig(), density=DensityClass.from_name(DensityName.DENSE), nodes=nodes, seed=1)


def small_run_data(**overrides) -> dict:
    """A single-carriageway, 200 m road that runs in well under a second."""
    data = {
        "scenario": {
            "road": {"length_m": 200.0, "lanes_per_direction": 1, "directions": 1, "rsu_spacing_m": 100.0},
            "density": "dense",
        },
        "sim_duration_s": 1.0,
        "warmup_s": 0.2,
    }
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(data.get(key), dict):
            data[key] = {**data[key], **value}
        else:
            data[key] = value
    return data


@pytest.fixture
def engine() -> EventQueue:
    return EventQueue()


@pytest.fixture
def radio() -> RadioParams:
    return RadioParams()


@pytest.fixture
def mac_params() -> MacParams:
    return MacParams()


@pytest.fixture
def small_config() -> RunConfig:
    return RunConfig.model_validate(small_run_data())
