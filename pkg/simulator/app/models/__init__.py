"""
Configuration models and YAML I/O.
"""

from .config_io import ConfigError, dump_yaml, load_run_config, load_sweep_spec, validate_model
from .run_models import (
    DENSITY_SPACING_M,
    VARIANT_POLICIES,
    CamParams,
    DccParams,
    DccTableRow,
    DensityClass,
    DensityName,
    IntervalPolicy,
    MacParams,
    MetricsParams,
    NodeRole,
    OffsetApplication,
    RadioParams,
    RetriggerMode,
    RoadConfig,
    RunConfig,
    ScenarioConfig,
    SweepSpec,
    TimerPolicy,
    Variant,
)

__all__ = [
    "ConfigError",
    "dump_yaml",
    "load_run_config",
    "load_sweep_spec",
    "validate_model",
    "DENSITY_SPACING_M",
    "VARIANT_POLICIES",
    "CamParams",
    "DccParams",
    "DccTableRow",
    "DensityClass",
    "DensityName",
    "IntervalPolicy",
    "MacParams",
    "MetricsParams",
    "NodeRole",
    "OffsetApplication",
    "RadioParams",
    "RetriggerMode",
    "RoadConfig",
    "RunConfig",
    "ScenarioConfig",
    "SweepSpec",
    "TimerPolicy",
    "Variant",
]
