"""
Pydantic models for run and sweep configuration.
"""

import math
from enum import Enum
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

SPEED_OF_LIGHT_M_S = 299_792_458.0


class Variant(str, Enum):
    """CAM rate control variants."""
    OFF = "off"
    REACTIVE1 = "reactive1"
    REACTIVE2 = "reactive2"
    REACTIVE3 = "reactive3"
    REACTIVE4 = "reactive4"


class TimerPolicy(str, Enum):
    """What a controller does with its pending timer when the interval changes."""
    WAIT_AND_GO = "wait_and_go"
    CANCEL_AND_GO = "cancel_and_go"


class IntervalPolicy(str, Enum):
    """How the first interval after a change is chosen."""
    SYNCHRONIZED = "synchronized"
    UNSYNCHRONIZED = "unsynchronized"


# Reactive variants as (timer policy, interval policy)
VARIANT_POLICIES: Dict[Variant, Tuple[TimerPolicy, IntervalPolicy]] = {
    Variant.REACTIVE1: (TimerPolicy.WAIT_AND_GO, IntervalPolicy.SYNCHRONIZED),
    Variant.REACTIVE2: (TimerPolicy.CANCEL_AND_GO, IntervalPolicy.SYNCHRONIZED),
    Variant.REACTIVE3: (TimerPolicy.WAIT_AND_GO, IntervalPolicy.UNSYNCHRONIZED),
    Variant.REACTIVE4: (TimerPolicy.CANCEL_AND_GO, IntervalPolicy.UNSYNCHRONIZED),
}


class RetriggerMode(str, Enum):
    """When a CBR notification triggers the timer/interval policy."""
    ON_CHANGE = "on_change"
    EVERY_NOTIFICATION = "every_notification"


class OffsetApplication(str, Enum):
    """Which thresholds the per-node sensitivity offset shifts."""
    BOTH = "both"
    SENSE_ONLY = "sense_only"


class DensityName(str, Enum):
    """Highway density classes."""
    SPARSE = "sparse"
    MEDIUM = "medium"
    DENSE = "dense"
    EXTREME = "extreme"


DENSITY_SPACING_M: Dict[DensityName, float] = {
    DensityName.SPARSE: 100.0,
    DensityName.MEDIUM: 45.0,
    DensityName.DENSE: 20.0,
    DensityName.EXTREME: 10.0,
}


class NodeRole(str, Enum):
    """Station roles."""
    VEHICLE = "vehicle"
    RSU = "rsu"


class _StrictModel(BaseModel):
    """Base for config models: unknown keys are errors."""
    model_config = ConfigDict(extra="forbid")


class RoadConfig(_StrictModel):
    """Static highway geometry."""
    length_m: float = Field(1000.0, gt=0)
    lanes_per_direction: int = Field(3, ge=1)
    directions: int = Field(2, ge=1, le=2)
    lane_width_m: float = Field(3.0, gt=0)
    rsu_spacing_m: float = Field(100.0, gt=0)

    @property
    def median_y_m(self) -> float:
        """y of the strip between the two carriageways."""
        return self.lanes_per_direction * self.lane_width_m

    def lane_centers_m(self) -> List[float]:
        centers = []
        for direction in range(self.directions):
            base = direction * self.median_y_m
            for lane in range(self.lanes_per_direction):
                centers.append(base + (lane + 0.5) * self.lane_width_m)
        return centers


class DensityClass(_StrictModel):
    """Density class with its inter-vehicle distance."""
    name: DensityName
    inter_vehicle_m: float = Field(gt=0)

    @classmethod
    def from_name(cls, name: DensityName, inter_vehicle_m: Optional[float] = None) -> "DensityClass":
        name = DensityName(name)
        return cls(name=name, inter_vehicle_m=inter_vehicle_m or DENSITY_SPACING_M[name])


class ScenarioConfig(_StrictModel):
    """Scenario construction parameters."""
    road: RoadConfig = Field(default_factory=RoadConfig)
    density: DensityName = DensityName.DENSE
    inter_vehicle_m: Optional[float] = Field(None, gt=0, description="Overrides the density class spacing")
    heterogeneity: bool = False
    offset_range_db: float = Field(6.0, ge=0)
    include_rsus: bool = True

    def density_class(self) -> DensityClass:
        return DensityClass.from_name(self.density, self.inter_vehicle_m)


class RadioParams(_StrictModel):
    """Link budget, OFDM framing and reception thresholds."""
    tx_power_dbm: float = 23.0
    antenna_gain_dbi: float = 1.0
    ed_threshold_dbm: float = -95.0
    pathloss_exponent: float = Field(2.0, gt=0)
    frequency_hz: float = Field(5.9e9, gt=0)
    ref_loss_db_at_1m: Optional[float] = Field(None, description="Defaults to free-space loss at 1 m")
    noise_floor_dbm: float = -99.0
    sinr_threshold_db: float = 8.0
    data_rate_bps: int = Field(6_000_000, gt=0)
    preamble_us: int = Field(40, gt=0)
    symbol_us: int = Field(8, gt=0)
    bits_per_symbol: int = Field(48, gt=0)
    frame_overhead_bytes: int = Field(68, ge=0)
    offset_application: OffsetApplication = OffsetApplication.BOTH

    @model_validator(mode="after")
    def _check_thresholds(self) -> "RadioParams":
        if self.ed_threshold_dbm >= self.tx_power_dbm:
            raise ValueError("ed_threshold_dbm must be below tx_power_dbm")
        return self

    @model_validator(mode="after")
    def _check_framing(self) -> "RadioParams":
        # one OFDM symbol carries data_rate * symbol duration bits
        if self.data_rate_bps * self.symbol_us != self.bits_per_symbol * 1_000_000:
            raise ValueError("data_rate_bps must equal bits_per_symbol per symbol_us")
        return self

    @property
    def data_bits_per_symbol(self) -> int:
        return self.data_rate_bps * self.symbol_us // 1_000_000

    @property
    def reference_loss_db(self) -> float:
        """PL(1 m); free-space loss at the carrier frequency unless overridden."""
        if self.ref_loss_db_at_1m is not None:
            return self.ref_loss_db_at_1m
        return 20.0 * math.log10(4.0 * math.pi * 1.0 * self.frequency_hz / SPEED_OF_LIGHT_M_S)


class MacParams(_StrictModel):
    """Broadcast EDCA timing for the CAM access category."""
    slot_us: int = Field(13, gt=0)
    sifs_us: int = Field(32, gt=0)
    aifsn: int = Field(6, gt=0)
    cw: int = Field(15, gt=0)

    @property
    def aifs_us(self) -> int:
        return self.sifs_us + self.aifsn * self.slot_us


class DccTableRow(_StrictModel):
    """One state of the reactive table: CL in [cl_lower, cl_upper)."""
    state: str
    cl_lower: float = Field(ge=0, le=1)
    cl_upper: float = Field(ge=0, le=1)
    t_off_ms: int = Field(gt=0)


DEFAULT_DCC_TABLE: List[DccTableRow] = [
    DccTableRow(state="Relaxed", cl_lower=0.00, cl_upper=0.19, t_off_ms=60),
    DccTableRow(state="Active_1", cl_lower=0.19, cl_upper=0.27, t_off_ms=100),
    DccTableRow(state="Active_2", cl_lower=0.27, cl_upper=0.35, t_off_ms=180),
    DccTableRow(state="Active_3", cl_lower=0.35, cl_upper=0.43, t_off_ms=260),
    DccTableRow(state="Active_4", cl_lower=0.43, cl_upper=0.51, t_off_ms=340),
    DccTableRow(state="Active_5", cl_lower=0.51, cl_upper=0.59, t_off_ms=420),
    DccTableRow(state="Restricted", cl_lower=0.59, cl_upper=1.00, t_off_ms=460),
]


class DccParams(_StrictModel):
    """Rate controller parameters."""
    table: List[DccTableRow] = Field(default_factory=lambda: [row.model_copy() for row in DEFAULT_DCC_TABLE])
    monitor_window_ms: int = Field(100, gt=0)
    off_interval_ms: int = Field(100, gt=0)
    initial_cl: float = Field(0.0, ge=0, le=1)
    retrigger: RetriggerMode = RetriggerMode.ON_CHANGE

    @model_validator(mode="after")
    def _check_partition(self) -> "DccParams":
        rows = self.table
        if not rows:
            raise ValueError("table must have at least one row")
        if rows[0].cl_lower != 0.0 or rows[-1].cl_upper != 1.0:
            raise ValueError("table must cover [0, 1]")
        for prev, row in zip(rows, rows[1:]):
            if prev.cl_upper != row.cl_lower:
                raise ValueError(f"table gap or overlap between {prev.state} and {row.state}")
            if row.t_off_ms <= prev.t_off_ms:
                raise ValueError("t_off_ms must strictly increase across rows")
        for row in rows:
            if row.cl_lower >= row.cl_upper:
                raise ValueError(f"empty CL range for {row.state}")
        return self


class CamParams(_StrictModel):
    """CAM application parameters."""
    payload_bytes: int = Field(400, ge=0)


class MetricsParams(_StrictModel):
    """Metric binning and optional diagnostics."""
    bin_ms: int = Field(20, gt=0)
    dist_bin_m: float = Field(40.0, gt=0)
    keep_ledger: bool = False
    rsu_cbr_diagnostics: bool = False
    trace_nodes: Optional[List[int]] = Field(None, description="Vehicle ids to trace; all vehicles when unset")


class RunConfig(_StrictModel):
    """Everything that determines one simulation run."""
    scenario: ScenarioConfig = Field(default_factory=ScenarioConfig)
    variant: Variant = Variant.OFF
    alpha: float = Field(1.0, ge=0, le=1)
    seed: int = Field(1, ge=0)
    sim_duration_s: float = Field(10.0, gt=0)
    warmup_s: float = Field(2.0, ge=0)
    radio: RadioParams = Field(default_factory=RadioParams)
    mac: MacParams = Field(default_factory=MacParams)
    dcc: DccParams = Field(default_factory=DccParams)
    cam: CamParams = Field(default_factory=CamParams)
    metrics: MetricsParams = Field(default_factory=MetricsParams)

    @model_validator(mode="after")
    def _check_duration(self) -> "RunConfig":
        if self.sim_duration_s <= self.warmup_s:
            raise ValueError("sim_duration_s must exceed warmup_s")
        return self

    @property
    def duration_us(self) -> int:
        return int(round(self.sim_duration_s * 1_000_000))

    @property
    def warmup_us(self) -> int:
        return int(round(self.warmup_s * 1_000_000))

    def run_id(self) -> str:
        """Stable directory name for this run inside a sweep."""
        het = "het" if self.scenario.heterogeneity else "hom"
        return f"{self.variant.value}_{self.scenario.density.value}_{het}_a{self.alpha:.2f}_s{self.seed}"


class SweepSpec(_StrictModel):
    """Cross product of runs sharing one base configuration."""
    variants: List[Variant] = Field(min_length=1)
    densities: List[DensityName] = Field(min_length=1)
    alphas: List[float] = Field(default_factory=lambda: [1.0], min_length=1)
    seeds: List[int] = Field(default_factory=lambda: [1], min_length=1)
    heterogeneity: List[bool] = Field(default_factory=lambda: [False], min_length=1)
    base: RunConfig = Field(default_factory=RunConfig)
    output_dir: Optional[Path] = None

    @model_validator(mode="after")
    def _check_alphas(self) -> "SweepSpec":
        for alpha in self.alphas:
            if not 0.0 <= alpha <= 1.0:
                raise ValueError(f"alpha {alpha} outside [0, 1]")
        return self

    def iter_runs(self) -> Iterator[RunConfig]:
        """Runs in a fixed order: variant, density, heterogeneity, alpha, seed."""
        for variant in self.variants:
            for density in self.densities:
                for heterogeneity in self.heterogeneity:
                    for alpha in self.alphas:
                        for seed in self.seeds:
                            data = self.base.model_dump(mode="json")
                            data["variant"] = variant.value
                            data["alpha"] = alpha
                            data["seed"] = seed
                            data["scenario"]["density"] = density.value
                            data["scenario"]["heterogeneity"] = heterogeneity
                            yield RunConfig.model_validate(data)
