"""
Highway scenario construction.
"""

from .highway import NodeSpec, Scenario, build_highway, distance_matrix, expected_vehicle_count, pair_distance

__all__ = ["NodeSpec", "Scenario", "build_highway", "distance_matrix", "expected_vehicle_count", "pair_distance"]
