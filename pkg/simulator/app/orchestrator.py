"""
Simulation orchestrator: wires scenario, radio, MAC, controllers and metrics
for one run, writes its outputs, and fans sweeps out over worker processes.
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from . import __version__
from .config import LogLevel
from .controllers import BaseDccController, TraceRow, build_controller
from .controllers.dcc_table import DccTable
from .engine import US_PER_MS, Event, EventKind, EventQueue
from .mac import CamFrame, CsmaMac
from .metrics import MetricsStore, write_aggregates, write_run_csvs
from .metrics.aggregate import INDEX_COLUMNS, INDEX_FILE
from .metrics.writers import write_csv
from .models import RunConfig, SweepSpec, dump_yaml
from .radio import CbrMonitor, Medium, frame_airtime
from .scenario import Scenario, build_highway, distance_matrix
from .utils import Stream, configure_logging, node_rng, scenario_rng

logger = logging.getLogger(__name__)

RUN_META_FILE = "run_meta.yaml"
SCENARIO_FILE = "scenario.yaml"


@dataclass
class RunResult:
    """Everything a finished run leaves behind."""
    config: RunConfig
    scenario: Scenario
    metrics: MetricsStore
    traces: List[TraceRow]
    events_dispatched: int
    frames_generated: int
    wall_ms: int
    controllers: Dict[int, BaseDccController] = field(default_factory=dict, repr=False)


class SimulationOrchestrator:
    """Builds and runs one simulation from a RunConfig."""

    def __init__(self, config: RunConfig):
        self.config = config
        scenario_cfg = config.scenario
        self.scenario = build_highway(
            scenario_cfg.road,
            scenario_cfg.density_class(),
            scenario_cfg.heterogeneity,
            config.seed,
            offset_range_db=scenario_cfg.offset_range_db,
            include_rsus=scenario_cfg.include_rsus,
        )
        self.engine = EventQueue()
        distances = distance_matrix(self.scenario)
        self.medium = Medium(self.scenario, config.radio)

        window_us = config.dcc.monitor_window_ms * US_PER_MS
        phases = scenario_rng(config.seed, Stream.MONITOR_PHASE).integers(0, window_us, size=self.scenario.size)
        self.monitor = CbrMonitor(self.scenario.size, window_us, phases)
        self.medium.add_busy_listener(self.monitor.on_busy_change)

        self.metrics = MetricsStore(
            self.scenario,
            distances,
            warmup_us=config.warmup_us,
            duration_us=config.duration_us,
            bin_us=config.metrics.bin_ms * US_PER_MS,
            dist_bin_m=config.metrics.dist_bin_m,
            keep_ledger=config.metrics.keep_ledger,
        )

        vehicles = [n.id for n in self.scenario.vehicles()]
        self.mac = CsmaMac(self.engine, self.medium, config.mac, config.radio, vehicles, config.seed)
        self.mac.set_sinks(
            on_tx_start=self.metrics.on_tx_start,
            on_tx_end=self.metrics.on_tx_end,
            on_drop=self.metrics.on_drop,
        )

        self.controllers = self._initialize_controllers(vehicles)
        self.monitor.set_sink(self._deliver_cbr)
        self._next_frame_id = 0
        self._finished = False

        self.engine.register(EventKind.CAM_TIMER_FIRE, self._on_timer_fire)
        self.engine.register(EventKind.CBR_WINDOW_CLOSE, self._on_window_close)
        self.engine.register(EventKind.METRICS_BIN_CLOSE, self._on_bin_close)
        self.engine.register(EventKind.SIM_END, self._on_sim_end)

    def _initialize_controllers(self, vehicles: List[int]) -> Dict[int, BaseDccController]:
        """One controller per vehicle; RSUs are never controlled."""
        config = self.config
        traced = set(vehicles if config.metrics.trace_nodes is None else config.metrics.trace_nodes)
        table = DccTable(config.dcc.table)
        controllers = {}
        for node in vehicles:
            controllers[node] = build_controller(
                config.variant,
                node,
                self.engine,
                config.dcc,
                config.alpha,
                node_rng(config.seed, node, Stream.DCC),
                self._generate_cam,
                trace=node in traced,
                table=table,
            )
        return controllers

    def _generate_cam(self, node: int, now: int) -> None:
        frame = CamFrame(
            frame_id=self._next_frame_id,
            node=node,
            generated_at=now,
            payload_bytes=self.config.cam.payload_bytes,
        )
        self._next_frame_id += 1
        self.metrics.on_generate(node, now)
        self.mac.enqueue_cam(node, frame, now)

    def _deliver_cbr(self, node: int, cbr: float, now: int) -> None:
        self.metrics.on_cbr(node, cbr, now)
        controller = self.controllers.get(node)
        if controller is not None:
            controller.on_cbr_notification(cbr, now)

    def _on_timer_fire(self, event: Event) -> None:
        self.controllers[event.node].on_timer_fire(event.time)

    def _on_window_close(self, event: Event) -> None:
        self.monitor.close_cbr_window(event.node, event.time)
        self.engine.schedule(event.time + self.monitor.window_us, EventKind.CBR_WINDOW_CLOSE, node=event.node)

    def _on_bin_close(self, event: Event) -> None:
        self.metrics.on_bin_close(event.time)

    def _on_sim_end(self, event: Event) -> None:
        self._finished = True

    def _schedule_initial_events(self) -> None:
        config = self.config
        jitter_rng = scenario_rng(config.seed, Stream.START_JITTER)
        for node, controller in self.controllers.items():
            first_interval_us = controller.ms_to_us(controller.current_interval_ms)
            controller.start(int(jitter_rng.integers(0, first_interval_us)))
        for node in range(self.scenario.size):
            self.engine.schedule(self.monitor.first_close_us(node), EventKind.CBR_WINDOW_CLOSE, node=node)
        for t in self.metrics.bin_close_times():
            self.engine.schedule(t, EventKind.METRICS_BIN_CLOSE)
        self.engine.schedule(config.duration_us, EventKind.SIM_END)

    def run(self) -> RunResult:
        """Simulate sim_duration_s and return the filled metrics."""
        config = self.config
        start = time.perf_counter()
        logger.info(
            f"Run {config.run_id()}: {len(self.controllers)} vehicles, {len(self.scenario.rsus())} RSUs, "
            f"alpha={config.alpha:.2f}, seed={config.seed}"
        )
        self._schedule_initial_events()
        self.engine.run_until(config.duration_us)
        if not self._finished:
            raise RuntimeError("simulation ended before the sim-end event")
        wall_ms = int((time.perf_counter() - start) * 1000)
        traces = [row for c in self.controllers.values() for row in c.trace]
        logger.info(
            f"Run {config.run_id()} finished: {self.engine.dispatched} events, "
            f"{self._next_frame_id} frames, {wall_ms} ms"
        )
        return RunResult(
            config=config,
            scenario=self.scenario,
            metrics=self.metrics,
            traces=traces,
            events_dispatched=self.engine.dispatched,
            frames_generated=self._next_frame_id,
            wall_ms=wall_ms,
            controllers=self.controllers,
        )


def run_meta(config: RunConfig) -> Dict[str, Any]:
    """Resolved config plus derived constants; loadable again as a config."""
    radio = config.radio
    return {
        "config": config.model_dump(mode="json"),
        "version": __version__,
        "seed": config.seed,
        "derived": {
            "aifs_us": config.mac.aifs_us,
            "frame_airtime_us": frame_airtime(config.cam.payload_bytes, radio),
            "frame_overhead_bytes": radio.frame_overhead_bytes,
            "mac_queue_depth": 1,
            "ref_loss_db_at_1m": round(radio.reference_loss_db, 6),
        },
    }


def run(config: RunConfig, out_dir: Path) -> RunResult:
    """
    Run one simulation and write its CSVs, scenario and run_meta.

    Args:
        config: validated run configuration
        out_dir: created if missing

    Returns:
        The finished run
    """
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise RuntimeError(f"cannot create output directory {out_dir}: {e}") from e

    result = SimulationOrchestrator(config).run()
    write_run_csvs(
        out_dir, result.metrics, result.scenario, result.traces, rsu_cbr=config.metrics.rsu_cbr_diagnostics
    )
    (out_dir / SCENARIO_FILE).write_text(dump_yaml(result.scenario.to_dict()), encoding="utf-8")
    (out_dir / RUN_META_FILE).write_text(dump_yaml(run_meta(config)), encoding="utf-8")
    return result


def parent_log_level() -> Optional[LogLevel]:
    """The root logger level as a LogLevel, or None when it is not one of them."""
    name = logging.getLevelName(logging.getLogger().level)
    return LogLevel(name) if name in LogLevel.__members__ else None


def _sweep_worker(config_data: Dict[str, Any], out_dir: str, log_level: Optional[LogLevel]) -> Dict[str, Any]:
    """Process-pool entry point; never raises."""
    if log_level is not None:
        configure_logging(log_level)
    config = RunConfig.model_validate(config_data)
    start = time.perf_counter()
    try:
        run(config, Path(out_dir))
        return {"run_id": config.run_id(), "success": True, "error": "", "error_type": "",
                "wall_ms": int((time.perf_counter() - start) * 1000)}
    except Exception as e:
        logger.error(f"Run {config.run_id()} failed: {e}", exc_info=True)
        return {"run_id": config.run_id(), "success": False, "error": str(e), "error_type": type(e).__name__,
                "wall_ms": int((time.perf_counter() - start) * 1000)}


class SweepOrchestrator:
    """Runs the cross product of a SweepSpec, each run isolated in its own directory."""

    def __init__(self, spec: SweepSpec, out_dir: Path, parallelism: int = 1):
        if parallelism < 1:
            raise ValueError("parallelism must be at least 1")
        self.spec = spec
        self.out_dir = Path(out_dir)
        self.parallelism = parallelism

    def runs(self) -> List[RunConfig]:
        configs = list(self.spec.iter_runs())
        ids = [c.run_id() for c in configs]
        if len(set(ids)) != len(ids):
            raise ValueError("sweep produces duplicate run ids")
        return configs

    def sweep(self) -> List[Dict[str, Any]]:
        """
        Execute every run, then write index.csv and the aggregate files.

        Returns:
            One result record per run, in sweep order
        """
        configs = self.runs()
        self.out_dir.mkdir(parents=True, exist_ok=True)
        logger.info(f"Sweep: {len(configs)} runs, parallelism {self.parallelism}, output {self.out_dir}")

        jobs = [(c.model_dump(mode="json"), str(self.out_dir / c.run_id())) for c in configs]
        if self.parallelism == 1:
            results = [_sweep_worker(data, out, None) for data, out in jobs]
        else:
            level = parent_log_level()
            with ProcessPoolExecutor(max_workers=self.parallelism) as pool:
                futures = [pool.submit(_sweep_worker, data, out, level) for data, out in jobs]
                results = [f.result() for f in futures]

        rows = []
        for config, result in zip(configs, results):
            status = "ok" if result["success"] else f"FAILED ({result['error_type']}: {result['error']})"
            logger.info(f"  {config.run_id()}: {status}")
            rows.append(
                (
                    config.run_id(),
                    config.variant.value,
                    config.scenario.density.value,
                    config.alpha,
                    config.seed,
                    config.scenario.heterogeneity,
                    result["success"],
                    result["error"],
                    result["wall_ms"],
                )
            )
        write_csv(self.out_dir / INDEX_FILE, rows, INDEX_COLUMNS)
        write_aggregates(self.out_dir)
        return results

