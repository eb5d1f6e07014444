"""Tests for single runs and sweeps."""

import filecmp
import logging
from pathlib import Path

import pandas as pd
import pytest

from app import orchestrator
from app.config import LogLevel
from app.models import RunConfig, SweepSpec, load_run_config
from app.models.config_io import load_yaml
from app.orchestrator import SimulationOrchestrator, SweepOrchestrator, run

from .conftest import small_run_data

CONFIG_DIR = Path(__file__).parents[1] / "configs"

RUN_FILES = [
    "pdr_vs_distance.csv",
    "pir_vs_distance.csv",
    "bins_20ms.csv",
    "fairness.csv",
    "controller_trace.csv",
    "pdr_by_role.csv",
    "pir_by_role.csv",
    "summary.csv",
    "scenario.yaml",
    "run_meta.yaml",
]


def _same_files(a, b, names=RUN_FILES):
    match, mismatch, errors = filecmp.cmpfiles(a, b, names, shallow=False)
    return mismatch == [] and errors == []


class TestSingleRun:
    """One simulation end to end on a small road."""

    def test_writes_every_output(self, small_config, tmp_path):
        run(small_config, tmp_path / "out")
        for name in RUN_FILES:
            assert (tmp_path / "out" / name).exists(), name

    def test_identical_configs_identical_bytes(self, tmp_path):
        config = RunConfig.model_validate(small_run_data(variant="reactive3", seed=5))
        run(config, tmp_path / "a")
        run(config, tmp_path / "b")
        assert _same_files(tmp_path / "a", tmp_path / "b")

    def test_run_meta_reproduces_run(self, tmp_path):
        config = RunConfig.model_validate(small_run_data(variant="reactive4", alpha=0.4, seed=2))
        run(config, tmp_path / "a")
        replay = load_run_config(tmp_path / "a" / "run_meta.yaml")
        assert replay == config
        run(replay, tmp_path / "b")
        assert _same_files(tmp_path / "a", tmp_path / "b")

    def test_run_meta_reports_derived_values(self, small_config, tmp_path):
        run(small_config, tmp_path)
        meta = (tmp_path / "run_meta.yaml").read_text()
        assert "aifs_us: 110" in meta
        assert "frame_airtime_us: 672" in meta
        assert "mac_queue_depth: 1" in meta

    def test_every_reception_accounted_for(self):
        config = RunConfig.model_validate(small_run_data(metrics={"keep_ledger": True}))
        result = SimulationOrchestrator(config).run()
        store = result.metrics
        n = result.scenario.size
        assert store.frames_ended > 0
        assert sum(store.outcome_totals().values()) == (n - 1) * store.frames_ended
        assert len(store.dispositions()) == (n - 1) * store.frames_ended

    def test_off_generates_every_100_ms(self, small_config):
        result = SimulationOrchestrator(small_config).run()
        vehicles = [v.id for v in result.scenario.vehicles()]
        generated = result.metrics.generated_total[vehicles]
        assert ((generated >= 10) & (generated <= 11)).all()

    def test_rsus_never_transmit(self, small_config):
        result = SimulationOrchestrator(small_config).run()
        rsus = [r.id for r in result.scenario.rsus()]
        assert len(rsus) == 3
        assert (result.metrics.tx_counts[rsus] == 0).all()
        assert (result.metrics.generated_total[rsus] == 0).all()

    def test_cbr_in_unit_interval(self, small_config, tmp_path):
        run(small_config, tmp_path)
        bins = pd.read_csv(tmp_path / "bins_20ms.csv")
        assert len(bins) == 40
        assert bins["mean_cbr"].between(0.0, 1.0).all()
        assert (bins["tx_count"] >= 0).all()

    def test_trace_rows_only_on_change(self, tmp_path):
        config = RunConfig.model_validate(small_run_data(variant="reactive3"))
        run(config, tmp_path)
        trace = pd.read_csv(tmp_path / "controller_trace.csv")
        assert not trace.empty
        for _, rows in trace.groupby("node"):
            values = rows[["setting_ms", "realized_gap_ms"]].fillna(-1.0).to_numpy()
            for prev, cur in zip(values, values[1:]):
                assert tuple(prev) != tuple(cur)

    def test_trace_nodes_limits_trace(self, tmp_path):
        config = RunConfig.model_validate(small_run_data(variant="reactive1", metrics={"trace_nodes": [2]}))
        run(config, tmp_path)
        trace = pd.read_csv(tmp_path / "controller_trace.csv")
        assert set(trace["node"]) == {2}

    def test_rsu_cbr_diagnostics(self, tmp_path):
        config = RunConfig.model_validate(small_run_data(metrics={"rsu_cbr_diagnostics": True}))
        run(config, tmp_path)
        assert list(pd.read_csv(tmp_path / "rsu_cbr.csv").columns) == ["bin_start_s", "mean_cbr"]

    def test_offsets_change_results_on_lossy_channel(self, tmp_path):
        """With exponent 3 the sensing range falls inside a 400 m road, so offsets matter."""
        radio = load_yaml(CONFIG_DIR / "dense_heterogeneous.yaml")["radio"]
        road = {"length_m": 400.0, "lanes_per_direction": 1, "directions": 1, "rsu_spacing_m": 100.0}
        for het in (False, True):
            data = small_run_data(scenario={"road": road, "density": "dense", "heterogeneity": het}, radio=radio)
            run(RunConfig.model_validate(data), tmp_path / str(het))
        hom = (tmp_path / "False" / "pdr_vs_distance.csv").read_bytes()
        het = (tmp_path / "True" / "pdr_vs_distance.csv").read_bytes()
        assert hom != het


def _spec(tmp_path, **fields):
    data = {
        "variants": ["off", "reactive1"],
        "densities": ["sparse", "dense"],
        "seeds": [1],
        "base": small_run_data(),
    }
    data.update(fields)
    return SweepSpec.model_validate(data)


class TestSweep:
    """Cross product, index and aggregates."""

    def test_runs_and_index(self, tmp_path):
        results = SweepOrchestrator(_spec(tmp_path), tmp_path, parallelism=1).sweep()
        assert len(results) == 4
        assert all(r["success"] for r in results)
        index = pd.read_csv(tmp_path / "index.csv", keep_default_na=False)
        assert list(index.columns) == [
            "run_id", "variant", "density", "alpha", "seed", "heterogeneity", "success", "error", "wall_ms"
        ]
        assert len(index) == 4
        for run_id in index["run_id"]:
            assert (tmp_path / run_id / "pdr_vs_distance.csv").exists()

    def test_aggregates_written(self, tmp_path):
        SweepOrchestrator(_spec(tmp_path), tmp_path, parallelism=1).sweep()
        comparison = pd.read_csv(tmp_path / "variant_comparison.csv")
        assert len(comparison) == 2
        assert set(comparison["variant"]) == {"reactive1"}
        assert (comparison["pdr_max_improvement_pct"] >= 0).all()
        assert (comparison["pdr_max_deterioration_pct"] <= 0).all()
        fairness = pd.read_csv(tmp_path / "fairness_by_density.csv")
        assert len(fairness) == 4
        off = fairness[fairness["variant"] == "off"]
        assert off["density"].tolist() == ["sparse", "dense"]
        assert (tmp_path / "alpha_summary.csv").exists()

    def test_alpha_summary(self, tmp_path):
        spec = _spec(tmp_path, variants=["reactive3"], densities=["dense"], alphas=[0.5, 1.0])
        SweepOrchestrator(spec, tmp_path, parallelism=1).sweep()
        summary = pd.read_csv(tmp_path / "alpha_summary.csv")
        assert not summary.empty
        assert set(summary["best_alpha"]) <= {0.5, 1.0}
        assert (summary["gain_vs_alpha1_ms"].dropna() >= 0).all()

    def test_failed_run_recorded_and_sweep_continues(self, tmp_path, monkeypatch):
        real_run = orchestrator.run

        def flaky(config, out_dir):
            if config.variant.value == "reactive1" and config.scenario.density.value == "dense":
                raise RuntimeError("boom")
            return real_run(config, out_dir)

        monkeypatch.setattr(orchestrator, "run", flaky)
        results = SweepOrchestrator(_spec(tmp_path), tmp_path, parallelism=1).sweep()
        failed = [r for r in results if not r["success"]]
        assert [r["run_id"] for r in failed] == ["reactive1_dense_hom_a1.00_s1"]
        assert failed[0]["error"] == "boom"
        assert failed[0]["error_type"] == "RuntimeError"
        index = pd.read_csv(tmp_path / "index.csv", keep_default_na=False)
        assert index["success"].astype(str).tolist().count("False") == 1
        assert (tmp_path / "variant_comparison.csv").exists()

    def test_duplicate_run_ids_rejected(self, tmp_path):
        spec = _spec(tmp_path, seeds=[1, 1])
        with pytest.raises(ValueError):
            SweepOrchestrator(spec, tmp_path).runs()

    def test_parallelism_must_be_positive(self, tmp_path):
        with pytest.raises(ValueError):
            SweepOrchestrator(_spec(tmp_path), tmp_path, parallelism=0)

    @pytest.mark.slow
    def test_parallel_matches_sequential(self, tmp_path):
        spec = _spec(tmp_path)
        SweepOrchestrator(spec, tmp_path / "seq", parallelism=1).sweep()
        SweepOrchestrator(spec, tmp_path / "par", parallelism=2).sweep()
        for config in spec.iter_runs():
            run_id = config.run_id()
            assert _same_files(tmp_path / "seq" / run_id, tmp_path / "par" / run_id)

    def test_worker_applies_log_level(self, tmp_path, monkeypatch):
        levels = []
        monkeypatch.setattr(orchestrator, "configure_logging", lambda level=None, fmt=None: levels.append(level))
        data = RunConfig.model_validate(small_run_data()).model_dump(mode="json")
        result = orchestrator._sweep_worker(data, str(tmp_path / "w"), LogLevel.DEBUG)
        assert result["success"]
        assert levels == [LogLevel.DEBUG]

    def test_parent_log_level(self):
        root = logging.getLogger()
        previous = root.level
        try:
            root.setLevel(logging.DEBUG)
            assert orchestrator.parent_log_level() == LogLevel.DEBUG
            root.setLevel(5)
            assert orchestrator.parent_log_level() is None
        finally:
            root.setLevel(previous)
