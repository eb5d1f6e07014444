"""Tests for Jain's index, the metrics store and CSV output."""

import numpy as np
import pandas as pd
import pytest

from app.mac import CamFrame
from app.metrics import MetricsStore, jain_index, write_run_csvs
from app.models import NodeRole
from app.radio import NOT_A_RECEIVER, Outcome, Transmission
from app.scenario import distance_matrix

from .conftest import make_scenario

R, C, S, H, X = Outcome.RECEIVED, Outcome.LOST_COLLISION, Outcome.LOST_BELOW_SENSITIVITY, Outcome.LOST_HALF_DUPLEX, NOT_A_RECEIVER


class TestJainIndex:
    def test_equal_counts(self):
        assert jain_index([5, 5, 5, 5]) == pytest.approx(1.0)

    def test_single_sender(self):
        assert jain_index([4, 0, 0, 0]) == pytest.approx(0.25)

    def test_known_value(self):
        # (1 + 2 + 3)^2 / (3 * 14)
        assert jain_index([1, 2, 3]) == pytest.approx(36 / 42)

    def test_all_zero_is_undefined(self):
        assert jain_index([0, 0, 0]) is None

    def test_empty_raises(self):
        with pytest.raises(ValueError):
            jain_index([])


def _store(warmup_us=0, duration_us=1_000_000, keep_ledger=True):
    # v0 at 0 m, v1 at 50 m, RSU at 100 m
    scenario = make_scenario([0.0, 50.0, 100.0], roles=[NodeRole.VEHICLE, NodeRole.VEHICLE, NodeRole.RSU])
    store = MetricsStore(
        scenario,
        distance_matrix(scenario),
        warmup_us=warmup_us,
        duration_us=duration_us,
        bin_us=20_000,
        dist_bin_m=40.0,
        keep_ledger=keep_ledger,
    )
    return scenario, store


def _send(store, frame_id, tx, start, outcomes, generated_at=None, airtime=672):
    txm = Transmission(
        frame_id=frame_id,
        tx_node=tx,
        start=start,
        end=start + airtime,
        tx_power_dbm=23.0,
        payload_bytes=400,
        generated_at=start if generated_at is None else generated_at,
    )
    store.on_tx_start(txm)
    store.on_tx_end(txm, np.array(outcomes, dtype=np.int8))
    return txm


class TestMetricsStore:
    """Delivery ratio, inter-reception time and transmission bins."""

    def test_pdr_by_distance_bin(self):
        _, store = _store()
        _send(store, 1, 0, 1_000, [X, R, C])
        rows = store.pdr_by_distance()
        # (0,1) at 50 m and (1,*) pairs share the 40-80 m bin; (0,2) is in 80-120 m
        assert rows == [(60.0, 1, 1, 1.0), (100.0, 1, 0, 0.0)]

    def test_pir_between_consecutive_receptions(self):
        _, store = _store()
        _send(store, 1, 0, 1_000, [X, R, R])
        _send(store, 2, 0, 101_000, [X, C, R])
        _send(store, 3, 0, 201_000, [X, R, R])
        pir = dict((center, (n, mean)) for center, n, mean in store.pir_stats())
        # receiver 1 misses frame 2: one 200 ms gap; RSU: two 100 ms gaps
        assert pir[60.0] == (1, pytest.approx(0.2))
        assert pir[100.0] == (2, pytest.approx(0.1))

    def test_warmup_frames_not_counted(self):
        _, store = _store(warmup_us=500_000)
        _send(store, 1, 0, 400_000, [X, R, R])
        assert store.pdr_by_distance() == []
        assert store.tx_counts[0] == 0
        _send(store, 2, 0, 600_000, [X, R, R])
        assert store.pdr_by_distance() == [(60.0, 1, 1, 1.0), (100.0, 1, 1, 1.0)]
        assert store.tx_counts[0] == 1

    def test_frame_generated_in_warmup_sent_after(self):
        """Transmission counts follow tx start; PDR follows generation time."""
        _, store = _store(warmup_us=500_000)
        _send(store, 1, 0, 500_100, [X, R, R], generated_at=499_900)
        assert store.tx_counts[0] == 1
        assert store.pdr_by_distance() == []

    def test_queue_drop_counts_as_generated(self):
        _, store = _store()
        store.on_drop(CamFrame(frame_id=1, node=0, generated_at=1_000, payload_bytes=400))
        _send(store, 2, 0, 101_000, [X, R, R])
        assert store.pdr_by_distance() == [(60.0, 2, 1, 0.5), (100.0, 2, 1, 0.5)]
        assert store.queue_drops[0] == 1

    def test_role_split(self):
        _, store = _store()
        _send(store, 1, 0, 1_000, [X, R, C])
        _send(store, 2, 1, 2_000, [R, X, R])
        rows = store.pdr_by_distance_and_role()
        assert (60.0, "vehicle", 2, 2, 1.0) in rows
        assert (60.0, "rsu", 1, 1, 1.0) in rows
        assert (100.0, "rsu", 1, 0, 0.0) in rows

    def test_tx_bins_and_cbr(self):
        _, store = _store(warmup_us=0, duration_us=50_000)
        assert store.bin_close_times() == [20_000, 40_000, 50_000]
        _send(store, 1, 0, 1_000, [X, R, R])
        _send(store, 2, 1, 25_000, [R, X, R])
        _send(store, 3, 0, 30_000, [X, R, R])
        store.on_cbr(0, 0.2, 10_000)
        store.on_cbr(1, 0.4, 10_000)
        store.on_cbr(2, 0.9, 10_000)
        for t in store.bin_close_times():
            store.on_bin_close(t)
        bins = store.tx_and_cbr_bins()
        assert [b.tx_count for b in bins] == [1, 2, 0]
        assert [b.bin_start_s for b in bins] == [0.0, 0.02, 0.04]
        # RSU CBR is excluded from the vehicle mean
        assert bins[0].mean_cbr == pytest.approx(0.3)
        assert store.rsu_cbr_bins()[0][1] == pytest.approx(0.9)

    def test_fairness_over_vehicles(self):
        _, store = _store()
        assert store.fairness() == (2, None)
        _send(store, 1, 0, 1_000, [X, R, R])
        n, jain = store.fairness()
        assert n == 2 and jain == pytest.approx(0.5)

    def test_disposition_conservation(self):
        """Every ended frame has exactly one outcome per other node."""
        _, store = _store()
        _send(store, 1, 0, 1_000, [X, R, S])
        _send(store, 2, 1, 2_000, [H, X, C])
        totals = store.outcome_totals()
        assert sum(totals.values()) == (3 - 1) * store.frames_ended
        assert totals[Outcome.RECEIVED] == 1
        ledger = store.dispositions()
        assert len(ledger) == 4
        assert {(d.frame_id, d.rx_node) for d in ledger} == {(1, 1), (1, 2), (2, 0), (2, 2)}

    def test_ledger_disabled_raises(self):
        _, store = _store(keep_ledger=False)
        with pytest.raises(RuntimeError):
            store.dispositions()


class TestRunCsvs:
    """Column layout and formatting of the per-run files."""

    def test_files_and_columns(self, tmp_path):
        scenario, store = _store(duration_us=40_000)
        _send(store, 1, 0, 1_000, [X, R, C])
        for t in store.bin_close_times():
            store.on_bin_close(t)
        write_run_csvs(tmp_path, store, scenario, [])

        assert (tmp_path / "pdr_vs_distance.csv").read_text().splitlines() == [
            "bin_center_m,generated,received,pdr",
            "60.000000,1,1,1.000000",
            "100.000000,1,0,0.000000",
        ]
        assert list(pd.read_csv(tmp_path / "pir_vs_distance.csv").columns) == ["bin_center_m", "samples", "mean_pir_s"]
        assert list(pd.read_csv(tmp_path / "bins_20ms.csv").columns) == ["bin_start_s", "tx_count", "mean_cbr"]
        assert (tmp_path / "fairness.csv").read_text() == "n_vehicles,jain\n2,0.500000\n"
        trace = pd.read_csv(tmp_path / "controller_trace.csv")
        assert list(trace.columns) == ["node", "t_s", "cbr", "cl", "state", "setting_ms", "realized_gap_ms"]
        summary = pd.read_csv(tmp_path / "summary.csv")
        assert summary["node"].tolist() == [0, 1]
        assert not (tmp_path / "rsu_cbr.csv").exists()

    def test_undefined_fairness(self, tmp_path):
        scenario, store = _store()
        write_run_csvs(tmp_path, store, scenario, [])
        assert (tmp_path / "fairness.csv").read_text() == "n_vehicles,jain\n2,undefined\n"

    def test_no_carriage_returns(self, tmp_path):
        scenario, store = _store()
        _send(store, 1, 0, 1_000, [X, R, R])
        for path in write_run_csvs(tmp_path, store, scenario, []):
            assert b"\r" not in path.read_bytes()
