"""
Physical layer: propagation, airtime, shared medium and CBR monitoring.
"""

from .airtime import airtime, frame_airtime
from .cbr_monitor import CbrMonitor
from .medium import NOT_A_RECEIVER, Medium, Outcome, Transmission
from .propagation import dbm_to_mw, mw_to_dbm, path_loss_db, rx_power_dbm, rx_power_matrix_mw

__all__ = [
    "airtime",
    "frame_airtime",
    "CbrMonitor",
    "NOT_A_RECEIVER",
    "Medium",
    "Outcome",
    "Transmission",
    "dbm_to_mw",
    "mw_to_dbm",
    "path_loss_db",
    "rx_power_dbm",
    "rx_power_matrix_mw",
]
