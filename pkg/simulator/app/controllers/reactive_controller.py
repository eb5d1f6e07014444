"""
Reactive DCC: table-driven CAM interval with configurable timer and interval policies.
"""

import logging

from ..engine.event_queue import SimTime
from ..models.run_models import IntervalPolicy, RetriggerMode, TimerPolicy
from .base_controller import BaseDccController, TimerAction

logger = logging.getLogger(__name__)


class ReactiveDccController(BaseDccController):
    """
    Maps the smoothed channel load to T_off through the state table.

    Wait-and-Go leaves the pending timer alone when the interval changes;
    Cancel-and-Go replaces it. Unsynchronized controllers draw the first gap
    after a change uniformly from [0, T_off].
    """

    def __init__(
        self,
        *args,
        timer_policy: TimerPolicy,
        interval_policy: IntervalPolicy,
        retrigger: RetriggerMode = RetriggerMode.ON_CHANGE,
        **kwargs,
    ):
        super().__init__(*args, **kwargs)
        self.timer_policy = timer_policy
        self.interval_policy = interval_policy
        self.retrigger = retrigger
        self._row = self.table.relaxed
        self.first_after_change = False

    @property
    def current_interval_ms(self) -> int:
        return self._row.t_off_ms

    @property
    def state_name(self) -> str:
        return self._row.state

    def draw_interval(self) -> int:
        interval_us = self.ms_to_us(self._row.t_off_ms)
        if self.interval_policy == IntervalPolicy.UNSYNCHRONIZED and self.first_after_change:
            self.first_after_change = False
            return int(self.rng.integers(0, interval_us + 1))
        return interval_us

    def on_cbr_notification(self, cbr: float, now: SimTime) -> TimerAction:
        self.last_cbr = cbr
        cl = self.load.update(cbr)
        row = self.table.row_for(cl)
        changed = row.t_off_ms != self._row.t_off_ms
        if not changed and self.retrigger == RetriggerMode.ON_CHANGE:
            return TimerAction.NONE

        if changed:
            if logger.isEnabledFor(logging.DEBUG):
                logger.debug(
                    f"node {self.node}: {self._row.state} -> {row.state} at {now} us (cbr={cbr:.3f} cl={cl:.3f})"
                )
            self._row = row
            self._record(now)
        if self.interval_policy == IntervalPolicy.UNSYNCHRONIZED:
            self.first_after_change = True

        if self.timer_policy == TimerPolicy.CANCEL_AND_GO:
            if self.pending_timer is not None:
                self.engine.cancel(self.pending_timer)
            self._schedule_next(now)
            return TimerAction.RESCHEDULED
        return TimerAction.KEEP
