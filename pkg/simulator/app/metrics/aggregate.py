"""
Cross-run summaries over a sweep directory.
"""

import logging
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from ..models.run_models import DENSITY_SPACING_M, Variant
from .writers import FAIRNESS_FILE, FLOAT_FORMAT, PDR_FILE, PIR_FILE, UNDEFINED

logger = logging.getLogger(__name__)

INDEX_FILE = "index.csv"
COMPARISON_FILE = "variant_comparison.csv"
ALPHA_SUMMARY_FILE = "alpha_summary.csv"
FAIRNESS_BY_DENSITY_FILE = "fairness_by_density.csv"

INDEX_COLUMNS = ["run_id", "variant", "density", "alpha", "seed", "heterogeneity", "success", "error", "wall_ms"]


def read_index(sweep_dir: Path) -> pd.DataFrame:
    """Successful runs of a sweep, in index order."""
    path = Path(sweep_dir) / INDEX_FILE
    if not path.exists():
        raise FileNotFoundError(f"missing sweep index: {path}")
    index = pd.read_csv(path, keep_default_na=False)
    ok = index["success"].astype(str).str.lower() == "true"
    return index[ok].reset_index(drop=True)


def _read_run_csv(sweep_dir: Path, run_id: str, name: str) -> pd.DataFrame:
    return pd.read_csv(Path(sweep_dir) / run_id / name)


def variant_comparison(sweep_dir: Path) -> pd.DataFrame:
    """
    Largest gains and losses of every reactive run against the matching off run.

    PDR differences are in percentage points (reactive - off); PIR differences
    in seconds (off - reactive), so positive values are improvements in both.
    """
    index = read_index(sweep_dir)
    rows = []
    for (density, het, seed), group in index.groupby(["density", "heterogeneity", "seed"], sort=True):
        baselines = group[group["variant"] == Variant.OFF.value]
        if baselines.empty:
            continue
        for _, run in group[group["variant"] != Variant.OFF.value].iterrows():
            same_alpha = baselines[baselines["alpha"] == run["alpha"]]
            base = (same_alpha if not same_alpha.empty else baselines).iloc[0]
            pdr = _read_run_csv(sweep_dir, run["run_id"], PDR_FILE).merge(
                _read_run_csv(sweep_dir, base["run_id"], PDR_FILE), on="bin_center_m", suffixes=("", "_off")
            )
            pir = _read_run_csv(sweep_dir, run["run_id"], PIR_FILE).merge(
                _read_run_csv(sweep_dir, base["run_id"], PIR_FILE), on="bin_center_m", suffixes=("", "_off")
            )
            pdr_diff = (pdr["pdr"] - pdr["pdr_off"]) * 100.0
            pir_diff = pir["mean_pir_s_off"] - pir["mean_pir_s"]
            rows.append(
                {
                    "density": density,
                    "heterogeneity": het,
                    "seed": seed,
                    "alpha": run["alpha"],
                    "variant": run["variant"],
                    "pdr_max_improvement_pct": max(pdr_diff.max(), 0.0) if len(pdr_diff) else np.nan,
                    "pdr_max_deterioration_pct": min(pdr_diff.min(), 0.0) if len(pdr_diff) else np.nan,
                    "pir_max_improvement_s": max(pir_diff.max(), 0.0) if len(pir_diff) else np.nan,
                    "pir_max_deterioration_s": min(pir_diff.min(), 0.0) if len(pir_diff) else np.nan,
                }
            )
    return pd.DataFrame(
        rows,
        columns=[
            "density", "heterogeneity", "seed", "alpha", "variant",
            "pdr_max_improvement_pct", "pdr_max_deterioration_pct",
            "pir_max_improvement_s", "pir_max_deterioration_s",
        ],
    )


def alpha_summary(sweep_dir: Path) -> pd.DataFrame:
    """Per distance bin, the alpha with the shortest mean PIR and its gain over alpha = 1 (0 without an alpha = 1 run)."""
    index = read_index(sweep_dir)
    rows = []
    for (variant, density, het, seed), group in index.groupby(
        ["variant", "density", "heterogeneity", "seed"], sort=True
    ):
        if group["alpha"].nunique() < 2:
            continue
        frames = []
        for _, run in group.iterrows():
            pir = _read_run_csv(sweep_dir, run["run_id"], PIR_FILE)
            pir["alpha"] = float(run["alpha"])
            frames.append(pir)
        pir_all = pd.concat(frames, ignore_index=True)
        for center, by_bin in pir_all.groupby("bin_center_m", sort=True):
            best = by_bin.sort_values(["mean_pir_s", "alpha"], kind="mergesort").iloc[0]
            at_one = by_bin[np.isclose(by_bin["alpha"], 1.0)]
            pir_one: Optional[float] = float(at_one["mean_pir_s"].iloc[0]) if not at_one.empty else None
            rows.append(
                {
                    "variant": variant,
                    "density": density,
                    "heterogeneity": het,
                    "seed": seed,
                    "bin_center_m": center,
                    "best_alpha": best["alpha"],
                    "best_mean_pir_s": best["mean_pir_s"],
                    "pir_alpha1_s": pir_one,
                    "gain_vs_alpha1_ms": 0.0 if pir_one is None else (pir_one - best["mean_pir_s"]) * 1000.0,
                }
            )
    return pd.DataFrame(
        rows,
        columns=[
            "variant", "density", "heterogeneity", "seed", "bin_center_m",
            "best_alpha", "best_mean_pir_s", "pir_alpha1_s", "gain_vs_alpha1_ms",
        ],
    )


def fairness_by_density(sweep_dir: Path) -> pd.DataFrame:
    """Jain index per run, ordered from the sparsest to the densest class."""
    index = read_index(sweep_dir)
    spacing: Dict[str, float] = {d.value: s for d, s in DENSITY_SPACING_M.items()}
    rows = []
    for _, run in index.iterrows():
        fairness = _read_run_csv(sweep_dir, run["run_id"], FAIRNESS_FILE)
        jain = fairness["jain"].iloc[0] if not fairness.empty else UNDEFINED
        rows.append(
            {
                "variant": run["variant"],
                "heterogeneity": run["heterogeneity"],
                "density": run["density"],
                "inter_vehicle_m": spacing.get(run["density"], np.nan),
                "alpha": run["alpha"],
                "seed": run["seed"],
                "jain": np.nan if str(jain) == UNDEFINED else float(jain),
            }
        )
    frame = pd.DataFrame(
        rows, columns=["variant", "heterogeneity", "density", "inter_vehicle_m", "alpha", "seed", "jain"]
    )
    return frame.sort_values(
        ["variant", "heterogeneity", "inter_vehicle_m", "alpha", "seed"], ascending=[True, True, False, True, True],
        kind="mergesort",
    ).reset_index(drop=True)


def write_aggregates(sweep_dir: Path) -> List[Path]:
    """Write every cross-run summary that the sweep's contents support."""
    sweep_dir = Path(sweep_dir)
    written = []
    for name, builder in (
        (COMPARISON_FILE, variant_comparison),
        (ALPHA_SUMMARY_FILE, alpha_summary),
        (FAIRNESS_BY_DENSITY_FILE, fairness_by_density),
    ):
        frame = builder(sweep_dir)
        path = sweep_dir / name
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n", na_rep="")
        written.append(path)
        logger.info(f"Wrote {path.name} ({len(frame)} rows)")
    return written

