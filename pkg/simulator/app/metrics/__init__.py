"""
Metrics, CSV output and cross-run aggregation.
"""

from .aggregate import alpha_summary, fairness_by_density, read_index, variant_comparison, write_aggregates
from .fairness import jain_index
from .store import BinRow, Disposition, MetricsStore
from .writers import write_csv, write_run_csvs

__all__ = [
    "alpha_summary",
    "fairness_by_density",
    "read_index",
    "variant_comparison",
    "write_aggregates",
    "jain_index",
    "BinRow",
    "Disposition",
    "MetricsStore",
    "write_csv",
    "write_run_csvs",
]
