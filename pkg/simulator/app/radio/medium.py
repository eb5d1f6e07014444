"""
Shared broadcast channel: frames on air, carrier sense and reception outcomes.
"""

import logging
from dataclasses import dataclass
from enum import IntEnum
from typing import Callable, Dict, List, Optional

import numpy as np

from ..engine.event_queue import SimTime
from ..models.run_models import OffsetApplication, RadioParams
from ..scenario.highway import Scenario, distance_matrix
from .propagation import dbm_to_mw, rx_power_matrix_mw

logger = logging.getLogger(__name__)


class Outcome(IntEnum):
    """Per-receiver disposition of one frame."""
    RECEIVED = 0
    LOST_BELOW_SENSITIVITY = 1
    LOST_COLLISION = 2
    LOST_HALF_DUPLEX = 3


NOT_A_RECEIVER = -1


@dataclass
class Transmission:
    """A frame on the air."""
    frame_id: int
    tx_node: int
    start: SimTime
    end: SimTime
    tx_power_dbm: float
    payload_bytes: int
    generated_at: SimTime = 0


@dataclass
class _OnAir:
    txm: Transmission
    # worst interference (mW) seen by each receiver so far during the frame
    max_interference_mw: np.ndarray
    # receivers that transmitted at some point during the frame
    half_duplex: np.ndarray


BusyListener = Callable[[SimTime, np.ndarray, np.ndarray], None]


class Medium:
    """
    Single shared channel.

    Interference only changes when a frame starts or ends, so the worst
    instantaneous SINR of a frame is found by sampling the interference at
    its own start and at every later start that overlaps it.
    """

    def __init__(self, scenario: Scenario, params: RadioParams):
        self.params = params
        self.size = scenario.size
        self.rx_mw = rx_power_matrix_mw(distance_matrix(scenario), params)

        offsets = scenario.offsets_db()
        self.sense_threshold_mw = dbm_to_mw(params.ed_threshold_dbm + offsets)
        if params.offset_application == OffsetApplication.BOTH:
            self.decode_threshold_mw = self.sense_threshold_mw.copy()
        else:
            self.decode_threshold_mw = dbm_to_mw(np.full(self.size, params.ed_threshold_dbm))
        self.noise_mw = float(dbm_to_mw(params.noise_floor_dbm))
        self.sinr_threshold = float(dbm_to_mw(params.sinr_threshold_db))

        self.transmitting = np.zeros(self.size, dtype=bool)
        self.busy = np.zeros(self.size, dtype=bool)
        self._on_air: Dict[int, _OnAir] = {}
        self._listeners: List[BusyListener] = []

    def add_busy_listener(self, listener: BusyListener) -> None:
        """Called with (t, changed node ids, busy vector) on every busy-state change."""
        self._listeners.append(listener)

    def on_air(self) -> List[Transmission]:
        return [entry.txm for entry in self._on_air.values()]

    def _total_power_mw(self) -> np.ndarray:
        if not self._on_air:
            return np.zeros(self.size)
        senders = [entry.txm.tx_node for entry in self._on_air.values()]
        return self.rx_mw[senders].sum(axis=0)

    def channel_busy(self, node: int) -> bool:
        """Busy iff the node transmits or foreign power reaches its sensing threshold."""
        return bool(self.busy[node])

    def _refresh_busy(self, now: SimTime, total_mw: np.ndarray) -> None:
        busy = self.transmitting | (total_mw >= self.sense_threshold_mw)
        changed = np.flatnonzero(busy != self.busy)
        if changed.size == 0:
            return
        self.busy = busy
        for listener in self._listeners:
            listener(now, changed, busy)

    def begin(self, txm: Transmission) -> None:
        """Put a frame on the air at txm.start (the current instant)."""
        tx = txm.tx_node
        if self.transmitting[tx]:
            raise RuntimeError(f"node {tx} is already transmitting")
        if txm.frame_id in self._on_air:
            raise RuntimeError(f"frame {txm.frame_id} is already on air")

        for entry in self._on_air.values():
            entry.half_duplex[tx] = True
        entry = _OnAir(
            txm=txm,
            max_interference_mw=np.zeros(self.size),
            half_duplex=self.transmitting.copy(),
        )
        self._on_air[txm.frame_id] = entry
        self.transmitting[tx] = True

        total = self._total_power_mw()
        for other in self._on_air.values():
            interference = total - self.rx_mw[other.txm.tx_node]
            np.maximum(other.max_interference_mw, interference, out=other.max_interference_mw)

        self._refresh_busy(txm.start, total)

    def _outcomes(self, entry: _OnAir) -> np.ndarray:
        signal = self.rx_mw[entry.txm.tx_node]
        outcomes = np.full(self.size, Outcome.RECEIVED, dtype=np.int8)
        sinr = signal / (self.noise_mw + entry.max_interference_mw)
        outcomes[sinr < self.sinr_threshold] = Outcome.LOST_COLLISION
        outcomes[signal < self.decode_threshold_mw] = Outcome.LOST_BELOW_SENSITIVITY
        outcomes[entry.half_duplex] = Outcome.LOST_HALF_DUPLEX
        outcomes[entry.txm.tx_node] = NOT_A_RECEIVER
        return outcomes

    def reception_outcome(self, txm: Transmission, rx: int) -> Outcome:
        """Disposition of an on-air frame at one receiver, given what has happened so far."""
        if rx == txm.tx_node:
            raise ValueError("the transmitter is not a receiver of its own frame")
        entry = self._on_air.get(txm.frame_id)
        if entry is None:
            raise ValueError(f"frame {txm.frame_id} is not on air")
        return Outcome(int(self._outcomes(entry)[rx]))

    def end(self, txm: Transmission) -> np.ndarray:
        """
        Take a frame off the air at txm.end.

        Returns:
            int8 outcome per node (Outcome values, NOT_A_RECEIVER for the sender)
        """
        entry = self._on_air.pop(txm.frame_id, None)
        if entry is None:
            raise RuntimeError(f"frame {txm.frame_id} is not on air")
        outcomes = self._outcomes(entry)
        self.transmitting[txm.tx_node] = False
        self._refresh_busy(txm.end, self._total_power_mw())
        return outcomes

    def link_budget_dbm(self, tx: int, rx: int) -> Optional[float]:
        """Received power for diagnostics; None on the diagonal."""
        if tx == rx:
            return None
        return float(10.0 * np.log10(self.rx_mw[tx, rx]))
