"""
Deterministic event list with cancellable handles.

Time is an integer count of microseconds since the start of the run.
Events at the same instant dispatch in insertion order.
"""

import heapq
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Tuple

logger = logging.getLogger(__name__)

SimTime = int

US_PER_MS = 1_000
US_PER_S = 1_000_000


class EventKind(str, Enum):
    """Event tags understood by the simulation."""
    CAM_TIMER_FIRE = "cam-timer-fire"
    TX_START = "tx-start"
    TX_END = "tx-end"
    CBR_WINDOW_CLOSE = "cbr-window-close"
    BACKOFF_SLOT = "backoff-slot"
    METRICS_BIN_CLOSE = "metrics-bin-close"
    SIM_END = "sim-end"


@dataclass
class Event:
    """A scheduled occurrence; (time, seq) orders all events."""
    time: SimTime
    seq: int
    kind: EventKind
    node: Optional[int] = None
    payload: Any = field(default=None, compare=False)


@dataclass(frozen=True)
class EventHandle:
    """Opaque reference to a scheduled event."""
    seq: int
    time: SimTime


Handler = Callable[[Event], None]


class EventQueue:
    """Single-threaded scheduler; the only source of simulated time."""

    def __init__(self):
        self._heap: List[Tuple[SimTime, int, Event]] = []
        self._live: Dict[int, Event] = {}
        self._handlers: Dict[EventKind, Handler] = {}
        self._next_seq = 0
        self._now: SimTime = 0
        self.dispatched = 0

    def now(self) -> SimTime:
        return self._now

    def register(self, kind: EventKind, handler: Handler) -> None:
        """Route events of `kind` to `handler`."""
        self._handlers[kind] = handler

    def schedule(
        self,
        at: SimTime,
        kind: EventKind,
        node: Optional[int] = None,
        payload: Any = None,
    ) -> EventHandle:
        """
        Insert an event.

        Args:
            at: absolute time in microseconds, not before now()
            kind: event tag
            node: owning node id, if any
            payload: handler-specific data

        Returns:
            Live handle for cancel()
        """
        if not isinstance(at, int):
            raise ValueError(f"event time must be integer microseconds, got {at!r}")
        if at < self._now:
            raise ValueError(f"cannot schedule {kind.value} at {at} us before now ({self._now} us)")
        seq = self._next_seq
        self._next_seq += 1
        event = Event(time=at, seq=seq, kind=kind, node=node, payload=payload)
        heapq.heappush(self._heap, (at, seq, event))
        self._live[seq] = event
        return EventHandle(seq=seq, time=at)

    def cancel(self, handle: Optional[EventHandle]) -> bool:
        """Drop a pending event. False if it already fired or was cancelled."""
        if handle is None:
            return False
        # Tombstone: the heap entry is skipped when popped
        return self._live.pop(handle.seq, None) is not None

    def is_live(self, handle: Optional[EventHandle]) -> bool:
        return handle is not None and handle.seq in self._live

    def pending(self) -> int:
        return len(self._live)

    def run_until(self, t_end: SimTime) -> None:
        """Dispatch every live event with time <= t_end, then set now() to t_end."""
        if t_end < self._now:
            raise ValueError(f"run_until({t_end}) is before now ({self._now})")
        heap = self._heap
        live = self._live
        handlers = self._handlers
        while heap and heap[0][0] <= t_end:
            time, seq, event = heapq.heappop(heap)
            if live.pop(seq, None) is None:
                continue
            self._now = time
            handler = handlers.get(event.kind)
            if handler is None:
                raise RuntimeError(f"no handler registered for {event.kind.value}")
            self.dispatched += 1
            handler(event)
        self._now = t_end
        logger.debug(f"run_until {t_end} us: {self.dispatched} dispatched, {len(live)} pending")
