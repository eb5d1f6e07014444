"""
Static homogeneous highway: vehicles on every lane, RSUs on the median.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Tuple

import numpy as np

from ..models.run_models import DensityClass, NodeRole, RoadConfig
from ..utils.rng_utils import Stream, scenario_rng

logger = logging.getLogger(__name__)

# Positions are compared against the road length with this slack so that
# e.g. 1000 / 100 lands exactly on the last RSU.
_EPS_M = 1e-9


@dataclass(frozen=True)
class NodeSpec:
    """One station; RSUs only ever receive."""
    id: int
    role: NodeRole
    x_m: float
    y_m: float
    sensitivity_offset_db: float = 0.0

    @property
    def pos(self) -> Tuple[float, float]:
        return (self.x_m, self.y_m)

    @property
    def is_vehicle(self) -> bool:
        return self.role == NodeRole.VEHICLE

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "role": self.role.value,
            "x_m": self.x_m,
            "y_m": self.y_m,
            "sensitivity_offset_db": self.sensitivity_offset_db,
        }


@dataclass(frozen=True)
class Scenario:
    """Immutable node placement for one run."""
    road: RoadConfig
    density: DensityClass
    nodes: Tuple[NodeSpec, ...]
    seed: int

    def vehicles(self) -> List[NodeSpec]:
        return [n for n in self.nodes if n.role == NodeRole.VEHICLE]

    def rsus(self) -> List[NodeSpec]:
        return [n for n in self.nodes if n.role == NodeRole.RSU]

    @property
    def size(self) -> int:
        return len(self.nodes)

    def positions(self) -> np.ndarray:
        """(N, 2) array of node positions, indexed by node id."""
        return np.array([n.pos for n in self.nodes], dtype=float).reshape(-1, 2)

    def offsets_db(self) -> np.ndarray:
        return np.array([n.sensitivity_offset_db for n in self.nodes], dtype=float)

    def vehicle_mask(self) -> np.ndarray:
        return np.array([n.role == NodeRole.VEHICLE for n in self.nodes], dtype=bool)

    def to_dict(self) -> Dict[str, Any]:
        """Structured form written next to the run outputs."""
        return {
            "road": self.road.model_dump(mode="json"),
            "density": self.density.model_dump(mode="json"),
            "seed": self.seed,
            "nodes": [n.to_dict() for n in self.nodes],
        }


def positions_along(length_m: float, spacing_m: float, inclusive: bool) -> List[float]:
    """k * spacing for k >= 0 while below (or at, if inclusive) length_m."""
    xs = []
    k = 0
    while True:
        x = k * spacing_m
        if x < length_m - _EPS_M or (inclusive and x <= length_m + _EPS_M):
            xs.append(x)
            k += 1
        else:
            return xs


def expected_vehicle_count(road: RoadConfig, density: DensityClass) -> int:
    """Closed-form count: directions x lanes x ceil(length / spacing)."""
    per_lane = math.ceil(road.length_m / density.inter_vehicle_m - _EPS_M)
    return road.directions * road.lanes_per_direction * per_lane


def build_highway(
    road: RoadConfig,
    density: DensityClass,
    heterogeneity: bool,
    seed: int,
    offset_range_db: float = 6.0,
    include_rsus: bool = True,
) -> Scenario:
    """
    Place vehicles on every lane and RSUs along the median.

    Args:
        road: highway geometry
        density: inter-vehicle spacing
        heterogeneity: draw per-node sensitivity offsets
        seed: run seed
        offset_range_db: offsets are uniform on [-range, +range]
        include_rsus: place receive-only RSUs

    Returns:
        Scenario with vehicles numbered first (lane-major), then RSUs
    """
    nodes: List[Tuple[NodeRole, float, float]] = []
    xs = positions_along(road.length_m, density.inter_vehicle_m, inclusive=False)
    for y in road.lane_centers_m():
        for x in xs:
            nodes.append((NodeRole.VEHICLE, x, y))
    if include_rsus:
        for x in positions_along(road.length_m, road.rsu_spacing_m, inclusive=True):
            nodes.append((NodeRole.RSU, x, road.median_y_m))

    if heterogeneity:
        rng = scenario_rng(seed, Stream.OFFSETS)
        offsets = rng.uniform(-offset_range_db, offset_range_db, size=len(nodes))
    else:
        offsets = np.zeros(len(nodes))

    specs = tuple(
        NodeSpec(id=i, role=role, x_m=float(x), y_m=float(y), sensitivity_offset_db=float(off))
        for i, ((role, x, y), off) in enumerate(zip(nodes, offsets))
    )
    scenario = Scenario(road=road, density=density, nodes=specs, seed=seed)
    logger.debug(
        f"Built {density.name.value} highway: {len(scenario.vehicles())} vehicles, {len(scenario.rsus())} RSUs"
    )
    return scenario


def pair_distance(a: NodeSpec, b: NodeSpec) -> float:
    """Euclidean distance in the road plane, meters."""
    return math.hypot(a.x_m - b.x_m, a.y_m - b.y_m)


def distance_matrix(scenario: Scenario) -> np.ndarray:
    """(N, N) pairwise distances."""
    pos = scenario.positions()
    diff = pos[:, None, :] - pos[None, :, :]
    return np.hypot(diff[..., 0], diff[..., 1])
