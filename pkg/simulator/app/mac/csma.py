"""
Simplified CSMA/CA broadcast access for CAMs.

One attempt per frame, no ACK, fixed contention window. A frame that finds
the channel idle is sent after AIFS; otherwise the node draws a backoff,
counts idle slots after each AIFS and freezes while the channel is busy.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Iterable, Optional

import numpy as np

from ..engine.event_queue import Event, EventHandle, EventKind, EventQueue, SimTime
from ..models.run_models import MacParams, RadioParams
from ..radio.airtime import frame_airtime
from ..radio.medium import Medium, Transmission
from ..utils.rng_utils import Stream, node_rng

logger = logging.getLogger(__name__)


@dataclass
class CamFrame:
    """A generated CAM waiting for the channel."""
    frame_id: int
    node: int
    generated_at: SimTime
    payload_bytes: int


class CamQueue:
    """Single-slot queue: a newer CAM replaces a stale one."""

    def __init__(self):
        self.slot: Optional[CamFrame] = None
        self.drops_count = 0

    def __bool__(self) -> bool:
        return self.slot is not None

    def enqueue(self, frame: CamFrame) -> Optional[CamFrame]:
        """Queue `frame`; returns the stale frame it replaced, if any."""
        stale = self.slot
        if stale is not None:
            self.drops_count += 1
        self.slot = frame
        return stale

    def pop(self) -> CamFrame:
        if self.slot is None:
            raise RuntimeError("pop from an empty CAM queue")
        frame, self.slot = self.slot, None
        return frame


class AccessState(str, Enum):
    """Channel access phase of one node."""
    IDLE = "idle"
    CONTENDING = "contending"
    FROZEN = "frozen"
    TRANSMITTING = "transmitting"


@dataclass
class NodeMac:
    """Per-node MAC state."""
    node: int
    queue: CamQueue
    rng: np.random.Generator
    state: AccessState = AccessState.IDLE
    # None until a backoff has been drawn for the queued frame
    backoff_slots: Optional[int] = None
    countdown_start: SimTime = 0
    deadline: Optional[SimTime] = None
    timer: Optional[EventHandle] = None
    current: Optional[Transmission] = None
    transmitted: int = 0


TxStartSink = Callable[[Transmission], None]
TxEndSink = Callable[[Transmission, np.ndarray], None]
DropSink = Callable[[CamFrame], None]


class CsmaMac:
    """Channel access for all vehicles of a run."""

    def __init__(
        self,
        engine: EventQueue,
        medium: Medium,
        params: MacParams,
        radio: RadioParams,
        node_ids: Iterable[int],
        seed: int,
    ):
        self.engine = engine
        self.medium = medium
        self.params = params
        self.radio = radio
        self.aifs_us = params.aifs_us
        self.nodes: Dict[int, NodeMac] = {
            n: NodeMac(node=n, queue=CamQueue(), rng=node_rng(seed, n, Stream.BACKOFF)) for n in node_ids
        }
        self._contending = np.zeros(medium.size, dtype=bool)
        self._on_tx_start: Optional[TxStartSink] = None
        self._on_tx_end: Optional[TxEndSink] = None
        self._on_drop: Optional[DropSink] = None

        medium.add_busy_listener(self._on_busy_change)
        engine.register(EventKind.TX_START, self._on_access)
        engine.register(EventKind.BACKOFF_SLOT, self._on_access)
        engine.register(EventKind.TX_END, self._on_tx_end_event)

    def set_sinks(
        self,
        on_tx_start: Optional[TxStartSink] = None,
        on_tx_end: Optional[TxEndSink] = None,
        on_drop: Optional[DropSink] = None,
    ) -> None:
        self._on_tx_start = on_tx_start
        self._on_tx_end = on_tx_end
        self._on_drop = on_drop

    def node_state(self, node: int) -> NodeMac:
        return self.nodes[node]

    def _draw_backoff(self, mac: NodeMac) -> int:
        return int(mac.rng.integers(0, self.params.cw + 1))

    def enqueue_cam(self, node: int, frame: CamFrame, now: SimTime) -> None:
        """
        Hand a fresh CAM to the MAC.

        The frame replaces any stale CAM; channel access starts unless it is
        already running or the node is transmitting.
        """
        mac = self.nodes.get(node)
        if mac is None:
            raise ValueError(f"node {node} has no MAC (RSUs never transmit)")
        stale = mac.queue.enqueue(frame)
        if stale is not None:
            if logger.isEnabledFor(logging.DEBUG):
                logger.debug(f"node {node}: CAM {stale.frame_id} replaced by {frame.frame_id}")
            if self._on_drop is not None:
                self._on_drop(stale)
        if mac.state == AccessState.IDLE:
            self._begin_access(mac, now)

    def _begin_access(self, mac: NodeMac, now: SimTime) -> None:
        self._contending[mac.node] = True
        mac.backoff_slots = None
        if self.medium.channel_busy(mac.node):
            mac.backoff_slots = self._draw_backoff(mac)
            mac.state = AccessState.FROZEN
        else:
            self._arm(mac, now)

    def _arm(self, mac: NodeMac, now: SimTime) -> None:
        """Channel just went (or is) idle: wait AIFS, then count down."""
        mac.countdown_start = now + self.aifs_us
        slots = mac.backoff_slots or 0
        mac.deadline = mac.countdown_start + slots * self.params.slot_us
        kind = EventKind.BACKOFF_SLOT if slots else EventKind.TX_START
        mac.timer = self.engine.schedule(mac.deadline, kind, node=mac.node)
        mac.state = AccessState.CONTENDING

    def channel_access(self, node: int) -> Optional[SimTime]:
        """Scheduled transmission start of a contending node, None while frozen or idle."""
        mac = self.nodes[node]
        return mac.deadline if mac.state == AccessState.CONTENDING else None

    def _on_busy_change(self, now: SimTime, changed: np.ndarray, busy: np.ndarray) -> None:
        affected = changed[self._contending[changed]]
        for node in affected.tolist():
            mac = self.nodes[node]
            if busy[node]:
                self._freeze(mac, now)
            elif mac.state == AccessState.FROZEN:
                self._arm(mac, now)

    def _freeze(self, mac: NodeMac, now: SimTime) -> None:
        if mac.state != AccessState.CONTENDING:
            return
        if mac.deadline == now:
            # already committed to this instant
            return
        elapsed = max((now - mac.countdown_start) // self.params.slot_us, 0)
        if mac.backoff_slots is None:
            # the idle-for-AIFS shortcut failed
            mac.backoff_slots = self._draw_backoff(mac)
        else:
            mac.backoff_slots = max(mac.backoff_slots - elapsed, 0)
        self.engine.cancel(mac.timer)
        mac.timer = None
        mac.deadline = None
        mac.state = AccessState.FROZEN

    def _on_access(self, event: Event) -> None:
        mac = self.nodes[event.node]
        if mac.state != AccessState.CONTENDING:
            raise RuntimeError(f"node {mac.node}: access event in state {mac.state.value}")
        now = event.time
        frame = mac.queue.pop()
        duration = frame_airtime(frame.payload_bytes, self.radio)
        txm = Transmission(
            frame_id=frame.frame_id,
            tx_node=mac.node,
            start=now,
            end=now + duration,
            tx_power_dbm=self.radio.tx_power_dbm,
            payload_bytes=frame.payload_bytes,
            generated_at=frame.generated_at,
        )
        self._contending[mac.node] = False
        mac.state = AccessState.TRANSMITTING
        mac.timer = None
        mac.deadline = None
        mac.backoff_slots = None
        mac.current = txm
        mac.transmitted += 1
        if self._on_tx_start is not None:
            self._on_tx_start(txm)
        self.medium.begin(txm)
        self.engine.schedule(txm.end, EventKind.TX_END, node=mac.node, payload=txm)

    def _on_tx_end_event(self, event: Event) -> None:
        txm: Transmission = event.payload
        mac = self.nodes[txm.tx_node]
        outcomes = self.medium.end(txm)
        mac.current = None
        mac.state = AccessState.IDLE
        if self._on_tx_end is not None:
            self._on_tx_end(txm, outcomes)
        if mac.queue:
            self._begin_access(mac, event.time)
