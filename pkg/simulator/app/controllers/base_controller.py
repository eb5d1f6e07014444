"""
Base class for per-vehicle CAM rate controllers.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Optional

import numpy as np

from ..engine.event_queue import US_PER_MS, EventHandle, EventKind, EventQueue, SimTime
from .dcc_table import ChannelLoadState, DccTable

logger = logging.getLogger(__name__)


class TimerAction(str, Enum):
    """Effect of a CBR notification on the pending generation timer."""
    NONE = "none"
    KEEP = "keep"
    RESCHEDULED = "rescheduled"


@dataclass
class TraceRow:
    """One controller decision point."""
    node: int
    t_us: SimTime
    cbr: float
    cl: float
    state: str
    setting_ms: int
    realized_gap_us: Optional[int]


GenerateCallback = Callable[[int, SimTime], None]


class BaseDccController(ABC):
    """
    Drives one vehicle's CAM generation timer.

    Subclasses decide the next generation interval and how a new CBR value
    affects the pending timer.
    """

    def __init__(
        self,
        node: int,
        engine: EventQueue,
        table: DccTable,
        load: ChannelLoadState,
        rng: np.random.Generator,
        generate: GenerateCallback,
        trace: bool = False,
    ):
        self.node = node
        self.engine = engine
        self.table = table
        self.load = load
        self.rng = rng
        self.generate = generate
        self.trace_enabled = trace
        self.trace: List[TraceRow] = []

        self.pending_timer: Optional[EventHandle] = None
        self.last_cbr = 0.0
        self.last_fire: Optional[SimTime] = None
        self.last_gap: Optional[int] = None
        self._traced_gap: Optional[int] = None
        self.generated = 0

    @property
    @abstractmethod
    def current_interval_ms(self) -> int:
        """Interval the controller is currently set to."""

    @property
    @abstractmethod
    def state_name(self) -> str:
        """Label for traces."""

    @abstractmethod
    def draw_interval(self) -> int:
        """Next generation gap in microseconds."""

    @abstractmethod
    def on_cbr_notification(self, cbr: float, now: SimTime) -> TimerAction:
        """React to a freshly measured CBR."""

    def start(self, first_fire_at: SimTime) -> EventHandle:
        """Arm the first generation."""
        if self.pending_timer is not None:
            raise RuntimeError(f"controller {self.node} already started")
        self.pending_timer = self.engine.schedule(first_fire_at, EventKind.CAM_TIMER_FIRE, node=self.node)
        return self.pending_timer

    def _schedule_next(self, now: SimTime) -> EventHandle:
        self.pending_timer = self.engine.schedule(now + self.draw_interval(), EventKind.CAM_TIMER_FIRE, node=self.node)
        return self.pending_timer

    def on_timer_fire(self, now: SimTime) -> None:
        """Generate a CAM and arm the next generation."""
        self.pending_timer = None
        if self.last_fire is not None:
            self.last_gap = now - self.last_fire
        self.last_fire = now
        self.generated += 1
        self.generate(self.node, now)
        self._schedule_next(now)
        if self.last_gap is not None and self.last_gap != self._traced_gap:
            self._record(now)

    def _record(self, now: SimTime) -> None:
        self._traced_gap = self.last_gap
        if not self.trace_enabled:
            return
        self.trace.append(
            TraceRow(
                node=self.node,
                t_us=now,
                cbr=self.last_cbr,
                cl=self.load.cl,
                state=self.state_name,
                setting_ms=self.current_interval_ms,
                realized_gap_us=self.last_gap,
            )
        )

    @staticmethod
    def ms_to_us(ms: float) -> int:
        return int(math.floor(ms * US_PER_MS + 0.5))
