"""
Run metrics: delivery ratio and inter-reception time by distance, 20 ms
transmission/CBR bins, per-vehicle transmission counts and the reception ledger.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..engine.event_queue import US_PER_S, SimTime
from ..mac.csma import CamFrame
from ..models.run_models import NodeRole
from ..radio.medium import NOT_A_RECEIVER, Outcome, Transmission
from ..scenario.highway import Scenario
from .fairness import jain_index

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Disposition:
    """What happened to one frame at one receiver."""
    frame_id: int
    tx_node: int
    rx_node: int
    distance_m: float
    outcome: Outcome


@dataclass(frozen=True)
class BinRow:
    bin_start_s: float
    tx_count: int
    mean_cbr: float


class MetricsStore:
    """
    Accumulates everything the CSV outputs need.

    Only frames generated at or after warmup, and transmissions starting in
    [warmup, duration), are counted. Frames still queued or on air when the
    run ends are not counted at all.
    """

    def __init__(
        self,
        scenario: Scenario,
        distances_m: np.ndarray,
        warmup_us: SimTime,
        duration_us: SimTime,
        bin_us: int,
        dist_bin_m: float,
        keep_ledger: bool = False,
    ):
        n = scenario.size
        self.size = n
        self.warmup_us = warmup_us
        self.duration_us = duration_us
        self.bin_us = bin_us
        self.dist_bin_m = dist_bin_m
        self.keep_ledger = keep_ledger

        self.distances_m = distances_m
        self.vehicle_mask = scenario.vehicle_mask()
        self.rsu_mask = ~self.vehicle_mask
        self.pair_bin = np.floor(distances_m / dist_bin_m).astype(np.int64)

        self.generated = np.zeros(n, dtype=np.int64)
        self.received = np.zeros((n, n), dtype=np.int64)
        self.last_rx = np.full((n, n), -1, dtype=np.int64)
        self.gap_sum_us = np.zeros((n, n), dtype=np.int64)
        self.gap_count = np.zeros((n, n), dtype=np.int64)

        self.generated_total = np.zeros(n, dtype=np.int64)
        self.queue_drops = np.zeros(n, dtype=np.int64)
        self.tx_counts = np.zeros(n, dtype=np.int64)
        self.outcome_counts = np.zeros(len(Outcome), dtype=np.int64)
        self.frames_ended = 0

        self.n_bins = max(math.ceil((duration_us - warmup_us) / bin_us), 0)
        self.bin_tx = np.zeros(self.n_bins, dtype=np.int64)
        self.bin_cbr = np.zeros(self.n_bins, dtype=float)
        self.bin_rsu_cbr = np.zeros(self.n_bins, dtype=float)
        self._bins_closed = 0
        self.latest_cbr = np.zeros(n, dtype=float)

        self._ledger: List[Disposition] = []

    def _counted(self, t: SimTime) -> bool:
        return self.warmup_us <= t < self.duration_us

    def bin_close_times(self) -> List[SimTime]:
        """Instants at which on_bin_close must be called, in order."""
        return [min(self.warmup_us + (k + 1) * self.bin_us, self.duration_us) for k in range(self.n_bins)]

    # ------------------------------------------------------------------ sinks

    def on_generate(self, node: int, now: SimTime) -> None:
        self.generated_total[node] += 1

    def on_drop(self, frame: CamFrame) -> None:
        self.queue_drops[frame.node] += 1
        if frame.generated_at >= self.warmup_us:
            self.generated[frame.node] += 1

    def on_tx_start(self, txm: Transmission) -> None:
        if not self._counted(txm.start):
            return
        self.tx_counts[txm.tx_node] += 1
        self.bin_tx[(txm.start - self.warmup_us) // self.bin_us] += 1

    def on_tx_end(self, txm: Transmission, outcomes: np.ndarray) -> None:
        tx = txm.tx_node
        receivers = outcomes != NOT_A_RECEIVER
        self.outcome_counts += np.bincount(outcomes[receivers], minlength=len(Outcome))
        self.frames_ended += 1
        if self.keep_ledger:
            for rx in np.flatnonzero(receivers).tolist():
                self._ledger.append(
                    Disposition(
                        frame_id=txm.frame_id,
                        tx_node=tx,
                        rx_node=rx,
                        distance_m=float(self.distances_m[tx, rx]),
                        outcome=Outcome(int(outcomes[rx])),
                    )
                )
        if txm.generated_at < self.warmup_us:
            return
        self.generated[tx] += 1
        ok = np.flatnonzero(outcomes == Outcome.RECEIVED)
        if ok.size == 0:
            return
        self.received[tx, ok] += 1
        prev = self.last_rx[tx, ok]
        seen = prev >= 0
        self.gap_sum_us[tx, ok[seen]] += txm.end - prev[seen]
        self.gap_count[tx, ok[seen]] += 1
        self.last_rx[tx, ok] = txm.end

    def on_cbr(self, node: int, cbr: float, now: SimTime) -> None:
        self.latest_cbr[node] = cbr

    def on_bin_close(self, now: SimTime) -> None:
        k = self._bins_closed
        if k >= self.n_bins:
            raise RuntimeError("more bin closes than bins")
        self.bin_cbr[k] = float(self.latest_cbr[self.vehicle_mask].mean()) if self.vehicle_mask.any() else 0.0
        self.bin_rsu_cbr[k] = float(self.latest_cbr[self.rsu_mask].mean()) if self.rsu_mask.any() else 0.0
        self._bins_closed += 1

    # ---------------------------------------------------------------- results

    def _pair_mask(self, rx_mask: Optional[np.ndarray] = None) -> np.ndarray:
        mask = self.vehicle_mask[:, None] & ~np.eye(self.size, dtype=bool)
        if rx_mask is not None:
            mask &= rx_mask[None, :]
        return mask

    def _bin_center(self, b: int) -> float:
        return (b + 0.5) * self.dist_bin_m

    def _pdr_rows(self, rx_mask: Optional[np.ndarray]) -> List[Tuple[float, int, int, float]]:
        mask = self._pair_mask(rx_mask)
        bins = self.pair_bin[mask]
        if bins.size == 0:
            return []
        gen_pairs = np.broadcast_to(self.generated[:, None], mask.shape)[mask]
        gen = np.bincount(bins, weights=gen_pairs).astype(np.int64)
        rec = np.bincount(bins, weights=self.received[mask]).astype(np.int64)
        return [
            (self._bin_center(b), int(gen[b]), int(rec[b]), float(rec[b] / gen[b]))
            for b in range(gen.size)
            if gen[b] > 0
        ]

    def pdr_by_distance(self) -> List[Tuple[float, int, int, float]]:
        """(bin_center_m, generated, received, pdr) for every non-empty distance bin."""
        return self._pdr_rows(None)

    def _pir_rows(self, rx_mask: Optional[np.ndarray]) -> List[Tuple[float, int, float]]:
        mask = self._pair_mask(rx_mask)
        bins = self.pair_bin[mask]
        if bins.size == 0:
            return []
        total = np.bincount(bins, weights=self.gap_sum_us[mask])
        count = np.bincount(bins, weights=self.gap_count[mask]).astype(np.int64)
        return [
            (self._bin_center(b), int(count[b]), float(total[b] / count[b] / US_PER_S))
            for b in range(count.size)
            if count[b] > 0
        ]

    def pir_stats(self) -> List[Tuple[float, int, float]]:
        """(bin_center_m, samples, mean_pir_s) over consecutive-reception gaps."""
        return self._pir_rows(None)

    def role_masks(self) -> Dict[NodeRole, np.ndarray]:
        return {NodeRole.VEHICLE: self.vehicle_mask, NodeRole.RSU: self.rsu_mask}

    def pdr_by_distance_and_role(self) -> List[Tuple[float, str, int, int, float]]:
        rows = []
        for role, mask in self.role_masks().items():
            rows.extend((c, role.value, g, r, p) for c, g, r, p in self._pdr_rows(mask))
        return sorted(rows, key=lambda row: (row[0], row[1]))

    def pir_by_distance_and_role(self) -> List[Tuple[float, str, int, float]]:
        rows = []
        for role, mask in self.role_masks().items():
            rows.extend((c, role.value, n, m) for c, n, m in self._pir_rows(mask))
        return sorted(rows, key=lambda row: (row[0], row[1]))

    def tx_and_cbr_bins(self) -> List[BinRow]:
        """
        Per 20 ms bin after warmup: transmissions started and mean_cbr, the
        latest CBR averaged over vehicles (RSUs excluded).
        """
        return [
            BinRow(
                bin_start_s=(self.warmup_us + k * self.bin_us) / US_PER_S,
                tx_count=int(self.bin_tx[k]),
                mean_cbr=float(self.bin_cbr[k]),
            )
            for k in range(self.n_bins)
        ]

    def rsu_cbr_bins(self) -> List[Tuple[float, float]]:
        return [((self.warmup_us + k * self.bin_us) / US_PER_S, float(self.bin_rsu_cbr[k])) for k in range(self.n_bins)]

    def vehicle_tx_counts(self) -> np.ndarray:
        return self.tx_counts[self.vehicle_mask]

    def fairness(self) -> Tuple[int, Optional[float]]:
        """(n_vehicles, Jain index of transmission counts); index None if nobody transmitted."""
        counts = self.vehicle_tx_counts()
        if counts.size == 0:
            return 0, None
        return int(counts.size), jain_index(counts)

    def outcome_totals(self) -> Dict[Outcome, int]:
        return {outcome: int(self.outcome_counts[outcome]) for outcome in Outcome}

    def dispositions(self) -> List[Disposition]:
        if not self.keep_ledger:
            raise RuntimeError("disposition ledger is disabled (metrics.keep_ledger)")
        return list(self._ledger)
