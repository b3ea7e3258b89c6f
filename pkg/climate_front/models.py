# -*- mode:python; coding:utf-8; -*-
# created: 2026-10-17

import math
import typing

from pydantic import BaseModel, ConfigDict, Field, model_validator


class ModelParams(BaseModel):
    """Constants defining one free boundary problem instance."""

    model_config = ConfigDict(frozen=True)

    d: float = Field(gt=0)
    a: float = Field(gt=0)
    a0: float
    b: float = Field(gt=0)
    l0: float = Field(default=1.0, gt=0)
    c: float = Field(gt=0)
    h0: float = Field(gt=0)
    # permits a0 >= 0 (homogeneous reduction), never a0 > a
    relaxed: bool = False

    @property
    def plateau(self) -> float:
        return self.a / self.b

    @property
    def mode(self) -> str:
        return 'relaxed' if self.relaxed else 'strict'

    @property
    def critical_length(self) -> float:
        return 0.5 * math.pi * math.sqrt(self.d / self.a)

    @property
    def max_wave_speed(self) -> float:
        return 2.0 * math.sqrt(self.a * self.d)


class ClimateProfile(BaseModel):

    model_config = ConfigDict(frozen=True)

    a: float
    a0: float
    l0: float = Field(gt=0)
    kind: typing.Literal['linear', 'cubic'] = 'linear'


class ExpansionRate(BaseModel):

    model_config = ConfigDict(frozen=True)

    a0: float
    a: float
    mu0: float = Field(gt=0)
    slope: float = Field(default=0.0, ge=0)
    kind: typing.Literal['affine'] = 'affine'


class BvpSpec(BaseModel):
    """
    Logistic two-point problem -d v'' - c v' = kappa(x) v - b v^2 on
    [xl, xr]. The coefficient is either a constant or a climate profile.
    """

    model_config = ConfigDict(frozen=True)

    xl: float
    xr: float
    left_value: float = Field(ge=0)
    right_value: float = Field(ge=0)
    drift: float
    d: float = Field(gt=0)
    b: float = Field(gt=0)
    kappa: typing.Optional[float] = None
    climate: typing.Optional[ClimateProfile] = None

    @model_validator(mode='after')
    def check_interval(self):
        if not self.xl < self.xr:
            raise ValueError(
                f'empty interval [{self.xl}, {self.xr}]'
            )
        if (self.kappa is None) == (self.climate is None):
            raise ValueError(
                'exactly one of constant kappa or climate profile is required'
            )
        return self


class Violation(BaseModel):

    code: str
    message: str
    location: typing.Optional[float] = None


class ValidationReport(BaseModel):

    mode: str
    violations: typing.List[Violation] = []

    @property
    def passed(self) -> bool:
        return not self.violations

    def codes(self):
        return [violation.code for violation in self.violations]


class Certificate(BaseModel):

    rule: str
    time: float
    detail: str = ''


class Classification(BaseModel):

    verdict: typing.Literal['Spreading', 'Vanishing', 'Undetermined']
    certificate: typing.Optional[Certificate] = None
    sigma: float
    final_time: float
    final_h: float
    final_sup_u: float
    critical_length: float
    gap_min: typing.Optional[float] = None
    gap_max: typing.Optional[float] = None
    mode: str = 'strict'
    config_hash: typing.Optional[str] = None


class AsymptoticReport(BaseModel):

    regime: typing.Literal['c<c0', 'c=c0', 'c>c0']
    c: float
    c0: float
    gap_kind: typing.Literal['h_minus_ct', 'h_minus_c0t']
    gap_estimate: float
    oscillation: float
    window_start: float
    samples: int
    sign_check_passed: typing.Optional[bool] = None


class SlopeScanRow(BaseModel):

    L: float
    slope: float


class SlopeScanReport(BaseModel):

    rows: typing.List[SlopeScanRow]
    passed: bool
    offending_pair: typing.Optional[typing.Tuple[float, float]] = None
    message: str = ''


class SigmaEvaluation(BaseModel):

    sigma: float
    verdict: str


class SigmaStarReport(BaseModel):

    status: typing.Literal['bracketed', 'possibly-infinite', 'undetermined']
    sigma_lo: float
    sigma_hi: float
    evaluations: typing.List[SigmaEvaluation] = []
    message: str = ''

    @property
    def width(self) -> float:
        return self.sigma_hi - self.sigma_lo


class PhaseCell(BaseModel):

    row: int
    col: int
    row_name: str
    row_value: float
    col_name: str
    col_value: float
    verdict: typing.Optional[str] = None
    final_h: typing.Optional[float] = None
    error: typing.Optional[str] = None
    config_hash: typing.Optional[str] = None


class ConvergenceReport(BaseModel):

    target: str
    resolutions: typing.List[float]
    values: typing.List[float]
    differences: typing.List[float]
    orders: typing.List[float]
    monotone: bool
    message: str = ''

    @model_validator(mode='after')
    def check_levels(self):
        if len(self.resolutions) < 3:
            raise ValueError('at least 3 resolution levels are required')
        return self

    @property
    def order(self) -> float:
        finite = [order for order in self.orders if math.isfinite(order)]
        return finite[-1] if finite else math.nan


class CheckResult(BaseModel):

    name: str
    passed: bool
    value: typing.Optional[float] = None
    tolerance: typing.Optional[float] = None
    detail: str = ''
    config_hash: typing.Optional[str] = None


class VerificationManifest(BaseModel):

    config_hash: str
    checks: typing.List[CheckResult] = []

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


class SpeedSample(BaseModel):

    c: float
    value: float


class CriticalSpeed(BaseModel):

    c0: float
    residual: float
    truncation_radius: float
    iterations: int
    scan: typing.List[SpeedSample] = []


class ShiftSample(BaseModel):

    L: float
    value: float


class CriticalShift(BaseModel):

    L0: float
    residual: float
    c: float
    c0: float
    truncation_radius: float
    iterations: int
    scan: typing.List[ShiftSample] = []


class MonotonicityAudit(BaseModel):

    evaluations: typing.List[SigmaEvaluation]
    passed: bool
    offending_pair: typing.Optional[typing.Tuple[float, float]] = None
