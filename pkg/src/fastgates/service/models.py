"""Request and response schemas for the HTTP service.

Field names and units mirror the run-configuration file; repetition rate
uses null for instantaneous pulse groups since JSON has no infinity.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator


class TrapModel(BaseModel):
    frequency_mhz: float = Field(1.2, gt=0)
    mass_amu: float = Field(40.0, gt=0)
    wavelength_nm: float = Field(393.0, gt=0)
    ion_count: int = Field(2, ge=1)


class SchemeModel(BaseModel):
    family: Literal["gzc", "frag", "duan"] = "frag"
    convention: Literal["symmetric", "asymmetric"] = "asymmetric"
    target_pair: tuple[int, int] = (1, 2)

    @model_validator(mode="after")
    def _ordered_pair(self):
        i, j = self.target_pair
        if not 1 <= i < j:
            raise ValueError(f"target_pair must be an increasing 1-based pair, got {self.target_pair}")
        return self


class LaserModel(BaseModel):
    repetition_rate_ghz: Optional[float] = Field(5.0, gt=0)  # null = instantaneous


class MotionalModel(BaseModel):
    nbar: list[float] = [0.1]

    @model_validator(mode="after")
    def _nonnegative(self):
        if not self.nbar or any(x < 0 for x in self.nbar):
            raise ValueError("nbar must be a nonempty list of nonnegative values")
        return self


class OptimizerModel(BaseModel):
    objective: Literal["min-time", "max-fidelity"] = "min-time"
    initial_temperature: float = Field(0.0, ge=0)
    cooling_factor: float = Field(0.97, gt=0, lt=1)
    steps: int = Field(200, ge=1)
    restarts: int = Field(8, ge=1)
    rng_seed: int = Field(0, ge=0)
    time_move_scale_ns: float = Field(0.0, ge=0)
    n_min: int = Field(1, ge=1)
    n_max: int = Field(150, ge=1)
    infidelity_threshold: float = Field(1e-8, gt=0)
    overlap_margin: float = Field(2.0, ge=1)
    cycles: int = Field(1, ge=1, le=4)

    @model_validator(mode="after")
    def _ordered_range(self):
        if self.n_min > self.n_max:
            raise ValueError("n_min exceeds n_max")
        return self


class RunConfigModel(BaseModel):
    # The target pair is checked against the crystal only where a gate is
    # actually designed, so crystal-only requests may use any ion count.
    trap: TrapModel = TrapModel()
    scheme: SchemeModel = SchemeModel()
    laser: LaserModel = LaserModel()
    motional: MotionalModel = MotionalModel()
    optimizer: OptimizerModel = OptimizerModel()


class CrystalRequest(BaseModel):
    config: RunConfigModel = RunConfigModel()


class ModeRow(BaseModel):
    mode: int
    frequency_rad_s: float
    lamb_dicke: float
    vector: list[float]


class CrystalResponse(BaseModel):
    ion_count: int
    coulomb_length_m: float
    positions: list[float]
    positions_m: list[float]
    modes: list[ModeRow]
    min_radial_ratio: float


class DesignRequest(BaseModel):
    config: RunConfigModel = RunConfigModel()


class DesignResponse(BaseModel):
    manifest: dict


class RateSweepParams(BaseModel):
    rates_ghz: list[float]


class IonSweepParams(BaseModel):
    ion_counts: list[int]
    mode: Literal["fixed-frequency", "fixed-distance"] = "fixed-distance"
    placement: Literal["end", "middle"] = "end"


class GateTimeSweepParams(BaseModel):
    gate_times_ns: list[float]


class ShiftSweepParams(BaseModel):
    shifts_ps: list[float]


class SweepRequest(BaseModel):
    config: RunConfigModel = RunConfigModel()
    axis: Literal["repetition-rate", "ion-number", "gate-time", "timing-shift"]
    repetition_rate: Optional[RateSweepParams] = None
    ion_number: Optional[IonSweepParams] = None
    gate_time: Optional[GateTimeSweepParams] = None
    timing_shift: Optional[ShiftSweepParams] = None

    @model_validator(mode="after")
    def _params_present(self):
        key = self.axis.replace("-", "_")
        if getattr(self, key) is None:
            raise ValueError(f"sweep axis {self.axis!r} needs its parameter block")
        return self


class SweepResponse(BaseModel):
    columns: list[str]
    rows: list[list[float]]
    fits: dict


class PowerRequest(BaseModel):
    repetition_rate_hz: float = Field(gt=0)
    pulse_energy_j: float = Field(gt=0)


class PowerResponse(BaseModel):
    average_power_w: float


class TrajectoryRequest(BaseModel):
    config: RunConfigModel = RunConfigModel()
    scheme: Optional[dict] = None     # serialized scheme; designed if absent
    state: Literal["gg", "ge", "eg", "ee"] = "ee"
    mode: int = Field(1, ge=1)
    frame: Literal["rotating", "lab"] = "rotating"
    points: int = Field(1001, ge=2, le=100001)


class TrajectoryResponse(BaseModel):
    times_s: list[float]
    position: list[float]
    momentum: list[float]


class DisplacementRequest(BaseModel):
    config: RunConfigModel = RunConfigModel()
    scheme: Optional[dict] = None
    state: Literal["gg", "ge", "eg", "ee"] = "ee"
    points: int = Field(1001, ge=2, le=100001)


class DisplacementResponse(BaseModel):
    times_s: list[float]
    displacement_m: list[list[float]]  # one series per ion


class ErrorBody(BaseModel):
    type: str
    message: str
