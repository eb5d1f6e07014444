"""
Figure families for a run directory or a sweep directory.

Every figure is a pure function of the CSV files it reads: the SVG hash salt
is fixed and no date is embedded, so re-plotting the same CSVs yields the
same bytes.
"""

import logging
from enum import Enum
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

from ..metrics.aggregate import FAIRNESS_BY_DENSITY_FILE, INDEX_FILE, fairness_by_density, read_index  # noqa: E402
from ..metrics.writers import BINS_FILE, PDR_FILE, PIR_FILE, TRACE_FILE  # noqa: E402

logger = logging.getLogger(__name__)

SUPPORTED_FORMATS = ("svg", "pdf")
FIGSIZE = (7.0, 4.3)
ALPHA_DISTANCES_M = (100.0, 300.0, 500.0, 700.0, 900.0)

matplotlib.rcParams.update(
    {
        "svg.hashsalt": "dcc-beaconing",
        "svg.fonttype": "path",
        "font.size": 10,
        "axes.labelsize": 10,
        "legend.fontsize": 8,
        "xtick.labelsize": 8,
        "ytick.labelsize": 8,
        "axes.grid": True,
        "grid.alpha": 0.3,
    }
)


class PlotFamily(str, Enum):
    """Figure families."""
    PDR = "pdr"
    PIR = "pir"
    BINS = "bins"
    TRACE = "trace"
    ALPHA = "alpha"
    FAIRNESS = "fairness"


RUN_FAMILIES = (PlotFamily.PDR, PlotFamily.PIR, PlotFamily.BINS, PlotFamily.TRACE)
SWEEP_FAMILIES = tuple(PlotFamily)


def is_sweep_dir(directory: Path) -> bool:
    return (Path(directory) / INDEX_FILE).exists()


def _alpha_groups(index: pd.DataFrame) -> List[Tuple[tuple, pd.DataFrame]]:
    """Swept configurations that cover at least two alpha values."""
    return [
        (key, group)
        for key, group in index.groupby(["variant", "density", "heterogeneity"], sort=True)
        if group["alpha"].nunique() > 1
    ]


def applicable_families(directory: Path) -> Tuple[PlotFamily, ...]:
    """Families a directory can support; alpha needs a sweep over alpha."""
    if not is_sweep_dir(directory):
        return RUN_FAMILIES
    if _alpha_groups(read_index(directory)):
        return SWEEP_FAMILIES
    return tuple(f for f in SWEEP_FAMILIES if f != PlotFamily.ALPHA)


def _read(path: Path) -> pd.DataFrame:
    if not path.exists():
        raise FileNotFoundError(f"missing CSV: {path}")
    return pd.read_csv(path)


def _save(fig: plt.Figure, path: Path, fmt: str) -> Path:
    fig.tight_layout()
    fig.savefig(path, format=fmt, metadata={"Date": None})
    plt.close(fig)
    logger.debug(f"Wrote {path}")
    return path


class _Curves:
    """(label, directory) pairs to overlay on one figure."""

    def __init__(self, directory: Path):
        self.directory = Path(directory)
        if is_sweep_dir(directory):
            index = read_index(directory)
            if index.empty:
                raise ValueError(f"sweep {directory} has no successful runs")
            varying = [c for c in ("variant", "density", "heterogeneity", "alpha", "seed") if index[c].nunique() > 1]
            self.items = [(self._label(row, varying), self.directory / row["run_id"]) for _, row in index.iterrows()]
        else:
            self.items = [(self.directory.name, self.directory)]

    @staticmethod
    def _label(row: pd.Series, varying: List[str]) -> str:
        if not varying:
            return str(row["variant"])
        parts = []
        for column in varying:
            value = row[column]
            if column == "alpha":
                parts.append(f"α={float(value):.2f}")
            elif column == "seed":
                parts.append(f"seed {value}")
            elif column == "heterogeneity":
                parts.append("non-identical" if str(value).lower() == "true" else "identical")
            else:
                parts.append(str(value))
        return " ".join(parts)

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)


def _legend(ax: plt.Axes, count: int) -> None:
    if count > 1:
        ax.legend(loc="best", ncol=1 if count <= 6 else 2)


def plot_pdr(directory: Path, out: Path, fmt: str) -> Path:
    curves = _Curves(directory)
    fig, ax = plt.subplots(figsize=FIGSIZE)
    for label, run_dir in curves:
        pdr = _read(run_dir / PDR_FILE)
        ax.plot(pdr["bin_center_m"], pdr["pdr"], marker=".", label=label)
    ax.set_xlabel("Distance (m)")
    ax.set_ylabel("PDR")
    ax.set_ylim(0.0, 1.02)
    _legend(ax, len(curves))
    return _save(fig, out, fmt)


def plot_pir(directory: Path, out: Path, fmt: str) -> Path:
    curves = _Curves(directory)
    fig, ax = plt.subplots(figsize=FIGSIZE)
    for label, run_dir in curves:
        pir = _read(run_dir / PIR_FILE)
        ax.plot(pir["bin_center_m"], pir["mean_pir_s"], marker=".", label=label)
    ax.set_xlabel("Distance (m)")
    ax.set_ylabel("Mean PIR (s)")
    _legend(ax, len(curves))
    return _save(fig, out, fmt)


def plot_bins(directory: Path, out: Path, fmt: str) -> Path:
    """Transmissions per bin and mean CBR against time."""
    curves = _Curves(directory)
    fig, (ax_tx, ax_cbr) = plt.subplots(2, 1, sharex=True, figsize=(FIGSIZE[0], FIGSIZE[1] * 1.5))
    for label, run_dir in curves:
        bins = _read(run_dir / BINS_FILE)
        ax_tx.step(bins["bin_start_s"], bins["tx_count"], where="post", label=label)
        ax_cbr.step(bins["bin_start_s"], bins["mean_cbr"], where="post", label=label)
    ax_tx.set_ylabel("Transmissions per bin")
    ax_cbr.set_ylabel("Mean CBR")
    ax_cbr.set_ylim(0.0, 1.0)
    ax_cbr.set_xlabel("Time (s)")
    _legend(ax_tx, len(curves))
    return _save(fig, out, fmt)


def plot_trace(directory: Path, out: Path, fmt: str, node: Optional[int] = None) -> Path:
    """Interval setting, realized gap and CBR of one traced vehicle."""
    trace = None
    for _, run_dir in _Curves(directory):
        candidate = _read(run_dir / TRACE_FILE)
        if not candidate.empty:
            trace = candidate
            break
    if trace is None:
        raise ValueError(f"no controller trace rows under {directory}")
    node = int(trace["node"].min()) if node is None else node
    rows = trace[trace["node"] == node]
    if rows.empty:
        raise ValueError(f"node {node} does not appear in the controller trace")

    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.step(rows["t_s"], rows["setting_ms"], where="post", label="Interval setting")
    gaps = rows.dropna(subset=["realized_gap_ms"])
    ax.plot(gaps["t_s"], gaps["realized_gap_ms"], "o", markersize=3, label="Realized interval")
    ax.set_xlabel("Time (s)")
    ax.set_ylabel("Interval (ms)")
    ax_cbr = ax.twinx()
    ax_cbr.plot(rows["t_s"], rows["cbr"], color="tab:red", linewidth=0.8, label="CBR")
    ax_cbr.set_ylabel("CBR")
    ax_cbr.set_ylim(0.0, 1.0)
    ax_cbr.grid(False)
    handles, labels = ax.get_legend_handles_labels()
    extra_handles, extra_labels = ax_cbr.get_legend_handles_labels()
    ax.legend(handles + extra_handles, labels + extra_labels, loc="best")
    ax.set_title(f"Vehicle {node}")
    return _save(fig, out, fmt)


def _pick_bins(centers: Iterable[float]) -> List[float]:
    available = np.array(sorted(set(centers)))
    if available.size == 0:
        return []
    picked = {float(available[np.abs(available - d).argmin()]) for d in ALPHA_DISTANCES_M}
    return sorted(picked)


def plot_alpha(directory: Path, out: Path, fmt: str) -> Path:
    """Mean PIR against alpha for a few distances, one panel per swept configuration."""
    if not is_sweep_dir(directory):
        raise ValueError("the alpha family needs a sweep directory")
    groups = _alpha_groups(read_index(directory))
    if not groups:
        raise ValueError("the alpha family needs runs at two or more alpha values")

    fig, axes = plt.subplots(len(groups), 1, squeeze=False, figsize=(FIGSIZE[0], FIGSIZE[1] * len(groups)))
    for ax, ((variant, density, het), group) in zip(axes[:, 0], groups):
        frames = []
        for _, run in group.iterrows():
            pir = _read(Path(directory) / run["run_id"] / PIR_FILE)
            pir["alpha"] = float(run["alpha"])
            frames.append(pir)
        pir_all = pd.concat(frames, ignore_index=True)
        # averaged over seeds
        mean = pir_all.groupby(["bin_center_m", "alpha"], sort=True)["mean_pir_s"].mean().reset_index()
        for center in _pick_bins(mean["bin_center_m"]):
            curve = mean[mean["bin_center_m"] == center]
            ax.plot(curve["alpha"], curve["mean_pir_s"], marker="o", label=f"{center:g} m")
        sensing = "non-identical" if str(het).lower() == "true" else "identical"
        ax.set_title(f"{variant}, {density}, {sensing}")
        ax.set_xlabel("α")
        ax.set_ylabel("Mean PIR (s)")
        ax.legend(loc="best")
    return _save(fig, out, fmt)


def plot_fairness(directory: Path, out: Path, fmt: str) -> Path:
    """Jain index against inter-vehicle distance for identical and non-identical sensing."""
    if not is_sweep_dir(directory):
        raise ValueError("the fairness family needs a sweep directory")
    path = Path(directory) / FAIRNESS_BY_DENSITY_FILE
    frame = pd.read_csv(path) if path.exists() else fairness_by_density(directory)
    frame = frame.dropna(subset=["jain"])
    if frame.empty:
        raise ValueError(f"no defined fairness values under {directory}")

    fig, ax = plt.subplots(figsize=FIGSIZE)
    grouped = frame.groupby(["variant", "heterogeneity", "inter_vehicle_m"], sort=True)["jain"].mean().reset_index()
    count = 0
    for (variant, het), curve in grouped.groupby(["variant", "heterogeneity"], sort=True):
        sensing = "non-identical" if str(het).lower() == "true" else "identical"
        curve = curve.sort_values("inter_vehicle_m", ascending=False)
        ax.plot(curve["inter_vehicle_m"], curve["jain"], marker="o", label=f"{variant}, {sensing}")
        count += 1
    ax.set_xlabel("Inter-vehicle distance (m)")
    ax.set_ylabel("Jain index")
    ax.invert_xaxis()
    _legend(ax, count)
    return _save(fig, out, fmt)


PLOTTERS: Dict[PlotFamily, Callable[[Path, Path, str], Path]] = {
    PlotFamily.PDR: plot_pdr,
    PlotFamily.PIR: plot_pir,
    PlotFamily.BINS: plot_bins,
    PlotFamily.TRACE: plot_trace,
    PlotFamily.ALPHA: plot_alpha,
    PlotFamily.FAIRNESS: plot_fairness,
}


def plot_directory(
    directory: Path,
    families: Optional[Iterable[PlotFamily]] = None,
    fmt: str = "svg",
    out_dir: Optional[Path] = None,
) -> List[Path]:
    """
    Render figure families for a run or sweep directory.

    Args:
        directory: run output directory or sweep directory with index.csv
        families: families to render; all applicable ones when omitted
        fmt: vector format, svg or pdf
        out_dir: where images go, defaults to `directory`

    Returns:
        One image path per family
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"not a directory: {directory}")
    if fmt not in SUPPORTED_FORMATS:
        raise ValueError(f"unsupported plot format {fmt!r}; use one of {', '.join(SUPPORTED_FORMATS)}")
    families = list(families) if families else list(applicable_families(directory))
    out_dir = Path(out_dir) if out_dir is not None else directory
    out_dir.mkdir(parents=True, exist_ok=True)

    written = []
    for family in families:
        family = PlotFamily(family)
        path = out_dir / f"{family.value}.{fmt}"
        written.append(PLOTTERS[family](directory, path, fmt))
        logger.info(f"Plotted {family.value} -> {path}")
    return written
