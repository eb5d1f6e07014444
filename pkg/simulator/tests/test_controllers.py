"""Tests for the DCC table, channel-load smoothing and the rate controllers."""

import numpy as np
import pytest

from app.controllers import (
    ChannelLoadState,
    DccOffController,
    DccTable,
    ReactiveDccController,
    TimerAction,
    build_controller,
    update_channel_load,
)
from app.engine import EventKind, EventQueue
from app.models import DccParams, IntervalPolicy, RetriggerMode, TimerPolicy, Variant

RELAXED_US = 60_000
RESTRICTED_US = 460_000


class TestDccTable:
    """Channel load to T_off lookup."""

    @pytest.mark.parametrize(
        "cl,t_off_ms",
        [
            (0.0, 60),
            (0.1899, 60),
            (0.19, 100),
            (0.30, 180),
            (0.35, 260),
            (0.5, 340),
            (0.58, 420),
            (0.59, 460),
            (1.0, 460),
        ],
    )
    def test_lookup(self, cl, t_off_ms):
        assert DccTable().lookup_interval(cl) == t_off_ms

    @pytest.mark.parametrize(
        "boundary,below_ms,at_ms",
        [
            (0.19, 60, 100),
            (0.27, 100, 180),
            (0.35, 180, 260),
            (0.43, 260, 340),
            (0.51, 340, 420),
            (0.59, 420, 460),
        ],
    )
    def test_boundaries_are_half_open(self, boundary, below_ms, at_ms):
        table = DccTable()
        assert table.lookup_interval(boundary - 1e-9) == below_ms
        assert table.lookup_interval(boundary) == at_ms

    def test_intervals_increase(self):
        intervals = DccTable().intervals_ms
        assert intervals == sorted(intervals)
        assert intervals[0] == 60 and intervals[-1] == 460

    @pytest.mark.parametrize("cl", [-0.01, 1.01])
    def test_out_of_range_raises(self, cl):
        with pytest.raises(ValueError):
            DccTable().row_for(cl)


class TestChannelLoad:
    """Exponentially weighted moving average of CBR."""

    def test_alpha_one_tracks_cbr(self):
        load = ChannelLoadState(cl=0.3, alpha=1.0)
        assert load.update(0.7) == pytest.approx(0.7)

    def test_alpha_zero_holds(self):
        load = ChannelLoadState(cl=0.3, alpha=0.0)
        assert load.update(0.9) == pytest.approx(0.3)

    def test_half_weight_sequence(self):
        load = ChannelLoadState(cl=0.0, alpha=0.5)
        assert update_channel_load(load, 0.4) == pytest.approx(0.2)
        assert update_channel_load(load, 0.4) == pytest.approx(0.3)
        assert load.cl == pytest.approx(0.3)

    def test_converges_to_constant_input(self):
        load = ChannelLoadState(cl=0.0, alpha=0.1)
        for _ in range(200):
            load.update(0.6)
        assert load.cl == pytest.approx(0.6, abs=1e-6)

    def test_invalid_cbr_raises(self):
        with pytest.raises(ValueError):
            ChannelLoadState().update(1.5)

    def test_invalid_alpha_raises(self):
        with pytest.raises(ValueError):
            ChannelLoadState(alpha=1.2)


class _Harness:
    """One controller on its own event queue, recording generation times."""

    def __init__(self, variant: Variant, alpha: float = 1.0, retrigger=RetriggerMode.ON_CHANGE, seed: int = 3):
        self.engine = EventQueue()
        self.fired = []
        self.controller = build_controller(
            variant,
            node=0,
            engine=self.engine,
            params=DccParams(retrigger=retrigger),
            alpha=alpha,
            rng=np.random.default_rng(seed),
            generate=lambda node, t: self.fired.append(t),
            trace=True,
        )
        self.engine.register(EventKind.CAM_TIMER_FIRE, lambda e: self.controller.on_timer_fire(e.time))

    def run(self, t):
        self.engine.run_until(t)

    def notify(self, t, cbr):
        self.run(t)
        return self.controller.on_cbr_notification(cbr, t)

    def gaps(self):
        return np.diff(self.fired).tolist()


class TestFactory:
    @pytest.mark.parametrize(
        "variant,timer,interval",
        [
            (Variant.REACTIVE1, TimerPolicy.WAIT_AND_GO, IntervalPolicy.SYNCHRONIZED),
            (Variant.REACTIVE2, TimerPolicy.CANCEL_AND_GO, IntervalPolicy.SYNCHRONIZED),
            (Variant.REACTIVE3, TimerPolicy.WAIT_AND_GO, IntervalPolicy.UNSYNCHRONIZED),
            (Variant.REACTIVE4, TimerPolicy.CANCEL_AND_GO, IntervalPolicy.UNSYNCHRONIZED),
        ],
    )
    def test_reactive_policies(self, variant, timer, interval):
        controller = _Harness(variant).controller
        assert isinstance(controller, ReactiveDccController)
        assert controller.timer_policy == timer
        assert controller.interval_policy == interval
        assert controller.current_interval_ms == 60

    def test_off(self):
        controller = _Harness(Variant.OFF).controller
        assert isinstance(controller, DccOffController)
        assert controller.current_interval_ms == 100
        assert controller.state_name == "Off"


class TestOffController:
    def test_fixed_rate_ignores_cbr(self):
        h = _Harness(Variant.OFF)
        h.controller.start(0)
        assert h.notify(150_000, 0.9) == TimerAction.NONE
        h.run(1_000_000)
        assert h.gaps() == [100_000] * 10
        assert h.controller.load.cl == pytest.approx(0.9)


class TestWaitAndGo:
    """The pending timer is never touched by a notification."""

    def test_pending_timer_unchanged(self):
        h = _Harness(Variant.REACTIVE1)
        h.controller.start(0)
        h.run(0)
        pending = h.controller.pending_timer
        assert pending.time == RELAXED_US
        assert h.notify(10_000, 0.7) == TimerAction.KEEP
        assert h.controller.pending_timer == pending
        assert h.engine.is_live(pending)
        assert h.controller.current_interval_ms == 460
        h.run(1_000_000)
        assert h.fired == [0, RELAXED_US, RELAXED_US + RESTRICTED_US, RELAXED_US + 2 * RESTRICTED_US]

    def test_no_change_no_action(self):
        h = _Harness(Variant.REACTIVE1)
        h.controller.start(0)
        assert h.notify(10_000, 0.05) == TimerAction.NONE


class TestCancelAndGo:
    """A change cancels the pending timer and restarts it from the notification."""

    def test_single_live_timer(self):
        h = _Harness(Variant.REACTIVE2)
        h.controller.start(0)
        h.run(0)
        old = h.controller.pending_timer
        assert h.notify(10_000, 0.7) == TimerAction.RESCHEDULED
        assert not h.engine.is_live(old)
        assert h.controller.pending_timer.time == 10_000 + RESTRICTED_US
        assert h.engine.pending() == 1
        h.run(1_000_000)
        assert h.fired == [0, 10_000 + RESTRICTED_US, 10_000 + 2 * RESTRICTED_US]

    def test_every_notification_retriggers(self):
        h = _Harness(Variant.REACTIVE2, retrigger=RetriggerMode.EVERY_NOTIFICATION)
        h.controller.start(0)
        h.run(0)
        assert h.notify(10_000, 0.05) == TimerAction.RESCHEDULED
        assert h.controller.pending_timer.time == 10_000 + RELAXED_US
        assert h.engine.pending() == 1


class TestUnsynchronized:
    """The first gap after a change is uniform on [0, T_off]."""

    @pytest.mark.parametrize("seed", range(10))
    def test_first_gap_bounded_then_regular(self, seed):
        h = _Harness(Variant.REACTIVE3, seed=seed)
        h.controller.start(0)
        h.run(0)
        h.notify(10_000, 0.7)
        h.run(2_000_000)
        # 0 -> 60 ms was armed before the change
        assert h.fired[1] == RELAXED_US
        first = h.fired[2] - h.fired[1]
        assert 0 <= first <= RESTRICTED_US
        assert all(g == RESTRICTED_US for g in h.gaps()[2:])

    @pytest.mark.parametrize("seed", range(10))
    def test_cancel_variant_draws_from_notification(self, seed):
        h = _Harness(Variant.REACTIVE4, seed=seed)
        h.controller.start(0)
        h.run(0)
        h.notify(10_000, 0.7)
        assert 10_000 <= h.controller.pending_timer.time <= 10_000 + RESTRICTED_US
        h.run(3_000_000)
        assert all(g == RESTRICTED_US for g in h.gaps()[1:])

    def test_synchronized_never_randomizes(self):
        h = _Harness(Variant.REACTIVE1)
        h.controller.start(0)
        h.notify(10_000, 0.7)
        h.notify(110_000, 0.7)
        h.notify(210_000, 0.2)
        h.run(2_000_000)
        assert set(h.gaps()) <= {RELAXED_US, 100_000, RESTRICTED_US}


class TestTrace:
    """Trace rows appear only when a value changes."""

    def test_rows_on_change_only(self):
        h = _Harness(Variant.REACTIVE1)
        h.controller.start(0)
        for k in range(1, 10):
            h.notify(k * 100_000, 0.05)
        h.run(1_000_000)
        trace = h.controller.trace
        # first realized gap only; the setting never changed
        assert len(trace) == 1
        assert trace[0].realized_gap_us == RELAXED_US
        assert trace[0].state == "Relaxed"

    def test_setting_change_recorded(self):
        h = _Harness(Variant.REACTIVE1)
        h.controller.start(0)
        h.notify(100_000, 0.7)
        rows = [(r.state, r.setting_ms) for r in h.controller.trace]
        assert ("Restricted", 460) in rows
