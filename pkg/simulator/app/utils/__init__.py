"""
Utility functions for the simulator.
"""

from .logging_utils import configure_logging
from .rng_utils import Stream, node_rng, scenario_rng

__all__ = ["configure_logging", "Stream", "node_rng", "scenario_rng"]
