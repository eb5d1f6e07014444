"""
Seeded random streams.

Every random draw in a run comes from a numpy Generator derived from the
run seed, so identical configs replay identically on any platform.
"""

from enum import IntEnum

import numpy as np


class Stream(IntEnum):
    """Independent stream tags."""
    OFFSETS = 1
    MONITOR_PHASE = 2
    START_JITTER = 3
    BACKOFF = 4
    DCC = 5


def scenario_rng(seed: int, stream: Stream) -> np.random.Generator:
    """Run-wide stream used during setup."""
    return np.random.default_rng([seed, int(stream)])


def node_rng(seed: int, node_id: int, stream: Stream) -> np.random.Generator:
    """Per-node stream (backoff draws, DCC interval draws)."""
    return np.random.default_rng([seed, int(stream), node_id])
