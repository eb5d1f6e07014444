"""
Static figures rendered from run and sweep CSVs.
"""

from .figures import PlotFamily, applicable_families, plot_directory

__all__ = ["PlotFamily", "applicable_families", "plot_directory"]
