"""
Controller construction from a run configuration.
"""

from typing import Optional

import numpy as np

from ..engine.event_queue import EventQueue
from ..models.run_models import VARIANT_POLICIES, DccParams, Variant
from .base_controller import BaseDccController, GenerateCallback
from .dcc_table import ChannelLoadState, DccTable
from .off_controller import DccOffController
from .reactive_controller import ReactiveDccController


def build_controller(
    variant: Variant,
    node: int,
    engine: EventQueue,
    params: DccParams,
    alpha: float,
    rng: np.random.Generator,
    generate: GenerateCallback,
    trace: bool = False,
    table: Optional[DccTable] = None,
) -> BaseDccController:
    """Create the controller for one vehicle."""
    table = table or DccTable(params.table)
    load = ChannelLoadState(cl=params.initial_cl, alpha=alpha)
    common = dict(node=node, engine=engine, table=table, load=load, rng=rng, generate=generate, trace=trace)
    if variant == Variant.OFF:
        return DccOffController(interval_ms=params.off_interval_ms, **common)
    if variant not in VARIANT_POLICIES:
        raise ValueError(f"Unsupported variant: {variant}")
    timer_policy, interval_policy = VARIANT_POLICIES[variant]
    return ReactiveDccController(
        timer_policy=timer_policy,
        interval_policy=interval_policy,
        retrigger=params.retrigger,
        **common,
    )
