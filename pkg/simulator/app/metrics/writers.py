"""
CSV emission for one run. Column order and number formatting are fixed so
identical runs produce identical bytes.
"""

import logging
from pathlib import Path
from typing import Iterable, List, Optional, Sequence

import pandas as pd

from ..controllers.base_controller import TraceRow
from ..engine.event_queue import US_PER_MS, US_PER_S
from ..scenario.highway import Scenario
from .store import MetricsStore

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.6f"
UNDEFINED = "undefined"

PDR_FILE = "pdr_vs_distance.csv"
PIR_FILE = "pir_vs_distance.csv"
BINS_FILE = "bins_20ms.csv"
FAIRNESS_FILE = "fairness.csv"
TRACE_FILE = "controller_trace.csv"
PDR_ROLE_FILE = "pdr_by_role.csv"
PIR_ROLE_FILE = "pir_by_role.csv"
SUMMARY_FILE = "summary.csv"
RSU_CBR_FILE = "rsu_cbr.csv"

PDR_COLUMNS = ["bin_center_m", "generated", "received", "pdr"]
PIR_COLUMNS = ["bin_center_m", "samples", "mean_pir_s"]
# mean_cbr is the mean over vehicles; RSU CBR goes to RSU_CBR_FILE only
BINS_COLUMNS = ["bin_start_s", "tx_count", "mean_cbr"]
FAIRNESS_COLUMNS = ["n_vehicles", "jain"]
TRACE_COLUMNS = ["node", "t_s", "cbr", "cl", "state", "setting_ms", "realized_gap_ms"]
SUMMARY_COLUMNS = ["node", "role", "generated_total", "transmitted_after_warmup", "queue_drops"]


def write_csv(path: Path, rows: Iterable[Sequence], columns: List[str]) -> Path:
    """Write rows with the fixed CSV dialect."""
    frame = pd.DataFrame(list(rows), columns=columns)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n", na_rep="")
    return path


def trace_rows(traces: Iterable[TraceRow]) -> List[tuple]:
    rows = []
    for row in sorted(traces, key=lambda r: (r.t_us, r.node)):
        gap_ms = None if row.realized_gap_us is None else row.realized_gap_us / US_PER_MS
        rows.append((row.node, row.t_us / US_PER_S, row.cbr, row.cl, row.state, row.setting_ms, gap_ms))
    return rows


def write_run_csvs(
    out_dir: Path,
    store: MetricsStore,
    scenario: Scenario,
    traces: Iterable[TraceRow],
    rsu_cbr: bool = False,
) -> List[Path]:
    """
    Write every per-run CSV into `out_dir`.

    Returns:
        Paths written, in a fixed order
    """
    out_dir = Path(out_dir)
    written = [
        write_csv(out_dir / PDR_FILE, store.pdr_by_distance(), PDR_COLUMNS),
        write_csv(out_dir / PIR_FILE, store.pir_stats(), PIR_COLUMNS),
        write_csv(
            out_dir / BINS_FILE,
            ((b.bin_start_s, b.tx_count, b.mean_cbr) for b in store.tx_and_cbr_bins()),
            BINS_COLUMNS,
        ),
    ]

    n_vehicles, jain = store.fairness()
    jain_text: Optional[str] = UNDEFINED if jain is None else FLOAT_FORMAT % jain
    written.append(write_csv(out_dir / FAIRNESS_FILE, [(n_vehicles, jain_text)], FAIRNESS_COLUMNS))
    written.append(write_csv(out_dir / TRACE_FILE, trace_rows(traces), TRACE_COLUMNS))

    written.append(
        write_csv(out_dir / PDR_ROLE_FILE, store.pdr_by_distance_and_role(), ["bin_center_m", "rx_role"] + PDR_COLUMNS[1:])
    )
    written.append(
        write_csv(out_dir / PIR_ROLE_FILE, store.pir_by_distance_and_role(), ["bin_center_m", "rx_role"] + PIR_COLUMNS[1:])
    )
    summary = [
        (
            node.id,
            node.role.value,
            int(store.generated_total[node.id]),
            int(store.tx_counts[node.id]),
            int(store.queue_drops[node.id]),
        )
        for node in scenario.nodes
        if node.is_vehicle
    ]
    written.append(write_csv(out_dir / SUMMARY_FILE, summary, SUMMARY_COLUMNS))
    if rsu_cbr:
        written.append(write_csv(out_dir / RSU_CBR_FILE, store.rsu_cbr_bins(), ["bin_start_s", "mean_cbr"]))
    logger.debug(f"Wrote {len(written)} CSV files to {out_dir}")
    return written
