"""
Fixed-rate CAM generation without congestion control.
"""

from ..engine.event_queue import SimTime
from .base_controller import BaseDccController, TimerAction


class DccOffController(BaseDccController):
    """Generates CAMs at a constant interval; CBR is only tracked for traces."""

    def __init__(self, *args, interval_ms: int = 100, **kwargs):
        super().__init__(*args, **kwargs)
        self._interval_ms = interval_ms

    @property
    def current_interval_ms(self) -> int:
        return self._interval_ms

    @property
    def state_name(self) -> str:
        return "Off"

    def draw_interval(self) -> int:
        return self.ms_to_us(self._interval_ms)

    def on_cbr_notification(self, cbr: float, now: SimTime) -> TimerAction:
        self.last_cbr = cbr
        self.load.update(cbr)
        return TimerAction.NONE
