"""
Per-node channel busy ratio monitors, stored column-wise.

Each node measures busy time over its own windows
[phase + k * window, phase + (k + 1) * window). Busy time is the measure
of the union of busy periods: the medium reports a single busy/idle state
per node, so overlapping frames are only counted once.
"""

import logging
from typing import Callable, Optional

import numpy as np

from ..engine.event_queue import SimTime

logger = logging.getLogger(__name__)

NO_BUSY = -1

CbrSink = Callable[[int, float, SimTime], None]


class CbrMonitor:
    """Busy-time accumulators for every node of a run."""

    def __init__(self, size: int, window_us: int, phases_us: Optional[np.ndarray] = None):
        if window_us <= 0:
            raise ValueError("window_us must be positive")
        self.size = size
        self.window_us = window_us
        phases = np.zeros(size, dtype=np.int64) if phases_us is None else np.asarray(phases_us, dtype=np.int64)
        if phases.shape != (size,) or (phases < 0).any() or (phases >= window_us).any():
            raise ValueError("phases must be one value in [0, window_us) per node")
        self.phase_us = phases
        self.window_start = phases.copy()
        self.busy_since = np.full(size, NO_BUSY, dtype=np.int64)
        self.busy_accum = np.zeros(size, dtype=np.int64)
        self.last_cbr = np.zeros(size, dtype=float)
        self._sink: Optional[CbrSink] = None

    def set_sink(self, sink: CbrSink) -> None:
        """Receiver of (node, cbr, t) after each window closes."""
        self._sink = sink

    def first_close_us(self, node: int) -> SimTime:
        return int(self.phase_us[node] + self.window_us)

    def on_busy_change(self, now: SimTime, changed: np.ndarray, busy: np.ndarray) -> None:
        """Medium listener."""
        started = changed[busy[changed]]
        ended = changed[~busy[changed]]
        if started.size:
            self.busy_since[started] = now
        if ended.size:
            since = np.maximum(self.busy_since[ended], self.window_start[ended])
            self.busy_accum[ended] += np.maximum(now - since, 0)
            self.busy_since[ended] = NO_BUSY

    def close_cbr_window(self, node: int, now: SimTime) -> float:
        """
        End the node's current window at `now` and report its CBR.

        Returns:
            busy measure / window, in [0, 1]
        """
        expected = self.window_start[node] + self.window_us
        if now != expected:
            raise ValueError(f"node {node}: window closes at {expected} us, not {now} us")
        if self.busy_since[node] != NO_BUSY:
            since = max(int(self.busy_since[node]), int(self.window_start[node]))
            self.busy_accum[node] += max(now - since, 0)
            self.busy_since[node] = now
        cbr = min(max(self.busy_accum[node] / self.window_us, 0.0), 1.0)
        self.busy_accum[node] = 0
        self.window_start[node] = now
        self.last_cbr[node] = cbr
        if self._sink is not None:
            self._sink(node, cbr, now)
        return cbr
