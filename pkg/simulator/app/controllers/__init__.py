"""
CAM rate controllers.
"""

from .base_controller import BaseDccController, TimerAction, TraceRow
from .dcc_table import ChannelLoadState, DccTable, update_channel_load
from .factory import build_controller
from .off_controller import DccOffController
from .reactive_controller import ReactiveDccController

__all__ = [
    "BaseDccController",
    "TimerAction",
    "TraceRow",
    "ChannelLoadState",
    "DccTable",
    "update_channel_load",
    "build_controller",
    "DccOffController",
    "ReactiveDccController",
]
