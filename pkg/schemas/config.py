# schemas/config.py
"""
실험 설정 스키마
- 모든 설정은 평평한(flat) JSON, 알 수 없는 키 거부
- 격자 (n, L)는 최상위 키로 둔다
"""
from __future__ import annotations

from typing import List, Literal, Optional

from pydantic import Field, field_validator, model_validator

from schemas.datum import Datum, GaussianDatum, StrictModel

__all__ = [
    "GridConfig",
    "RunConfig",
    "SweepConfig",
    "GrowthConfig",
    "SolitonConfig",
    "AuditConfig",
    "CONFIG_MODELS",
]


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


class GridConfig(StrictModel):
    """균일 주기 격자 (n: 2의 거듭제곱 ≥ 8, L > 0)"""
    n: int = Field(..., ge=8)
    L: float = Field(..., gt=0, allow_inf_nan=False)

    @field_validator("n")
    @classmethod
    def _n_power_of_two(cls, v: int) -> int:
        if not _is_power_of_two(v):
            raise ValueError(f"n은 2의 거듭제곱이어야 합니다: {v}")
        return v

    def make(self):
        from engine.spectral import make_grid
        return make_grid(self.n, self.L)


class _TimedConfig(GridConfig):
    dt: float = Field(..., gt=0, allow_inf_nan=False)
    t_final: float = Field(..., gt=0, allow_inf_nan=False)
    dealias: bool = False

    @model_validator(mode="after")
    def _dt_below_horizon(self):
        if self.dt >= self.t_final:
            raise ValueError(f"dt < t_final 이어야 합니다: dt={self.dt} t_final={self.t_final}")
        return self

    @property
    def n_steps(self) -> int:
        return max(1, int(round(self.t_final / self.dt)))


class RunConfig(_TimedConfig):
    """evolve 실험 1회"""
    eps: float = Field(..., ge=0, allow_inf_nan=False)
    datum: Datum
    diag_stride: int = Field(default=1, ge=1)
    sobolev_orders: List[float] = Field(default_factory=list)
    checkpoint_stride: int = Field(default=0, ge=0)


class SweepConfig(_TimedConfig):
    """ε → 0 스윕 (semiclassical: s ≥ 0 헤드라인, negative_s: s < 0 차이 실험)"""
    mode: Literal["semiclassical", "negative_s"] = "semiclassical"
    s: float = Field(..., allow_inf_nan=False)
    eps_list: List[float] = Field(..., min_length=1)
    datum: Datum = Field(default_factory=GaussianDatum)
    samples: int = Field(default=100, ge=2)

    @field_validator("eps_list")
    @classmethod
    def _strictly_decreasing(cls, v: List[float]) -> List[float]:
        if any(e < 0 for e in v):
            raise ValueError("eps_list 원소는 0 이상이어야 합니다")
        if any(b >= a for a, b in zip(v, v[1:])):
            raise ValueError(f"eps_list는 순감소해야 합니다: {v}")
        return v

    @model_validator(mode="after")
    def _mode_matches_s(self):
        if self.mode == "negative_s" and self.s >= 0:
            raise ValueError("negative_s 모드에서는 s < 0 이어야 합니다")
        return self


class GrowthConfig(_TimedConfig):
    """H^s 성장 추적 + (선택) 균일 지수 상계"""
    eps: float = Field(..., ge=0, allow_inf_nan=False)
    s_list: List[float] = Field(default_factory=lambda: [0.0, 1.0, 2.0])
    datum: Datum = Field(default_factory=GaussianDatum)
    margin: float = Field(default=0.05, ge=0)
    samples: int = Field(default=100, ge=2)
    uniform_s: Optional[float] = Field(default=None, gt=0.5)
    uniform_eps_list: List[float] = Field(default_factory=list)

    @field_validator("s_list")
    @classmethod
    def _nonneg_s(cls, v: List[float]) -> List[float]:
        if any(s < 0 for s in v):
            raise ValueError("growth 추적은 s ≥ 0 에서만 정의됩니다")
        return v


class SolitonConfig(GridConfig):
    """기저 상태 계산 (d는 항등식 평가에만 사용, 해는 1차원)"""
    eps: float = Field(..., gt=0, allow_inf_nan=False)
    tau: float = Field(..., gt=0, allow_inf_nan=False)
    d: int = Field(default=1, ge=1, le=11)
    tol: float = Field(default=1e-10, gt=0)
    max_iter: int = Field(default=500, ge=1)
    init_width: float = Field(default=1.0, gt=0)
    scaling: bool = True
    scaling_s_list: List[float] = Field(default_factory=lambda: [0.0, 1.0, 2.0])
    scaling_k_max: int = Field(default=7, ge=4)


class AuditConfig(StrictModel):
    """커널/근 공식 감사 (기본값만으로 전체 감사 실행 가능)"""
    eps: float = Field(default=1.0, gt=0, allow_inf_nan=False)
    xi_grid: List[float] = Field(default_factory=lambda: [2.0, 10.0, 50.0])
    root_samples: int = Field(default=1000, ge=1)
    seed: int = 0
    tail_a: List[float] = Field(default_factory=lambda: [0.1, 0.25, 0.5, 0.75, 0.9])
    tail_A: List[float] = Field(default_factory=lambda: [0.1, 1.0, 10.0, 1e3])
    phi_pairs: List[List[float]] = Field(
        default_factory=lambda: [[1.5, 0.0], [0.6, 0.6], [1.0, 0.5], [1.2, 0.4]]
    )
    phi_offsets: List[float] = Field(default_factory=lambda: [0.0, 1.0, 10.0, 100.0])
    smoothing: bool = True
    smoothing_b: float = Field(default=0.55, gt=0.5, lt=1.0)
    smoothing_gamma: float = Field(default=0.4, ge=1.0 / 3.0, lt=0.5)
    smoothing_a: float = Field(default=1.0, ge=0, lt=4.0 / 3.0)
    smoothing_s: float = Field(default=0.0, ge=0)
    smoothing_samples: int = Field(default=1000, ge=10)
    smoothing_xi_max: float = Field(default=1e3, gt=1e-2)

    @field_validator("xi_grid")
    @classmethod
    def _xi_above_one(cls, v: List[float]) -> List[float]:
        if not v or any(x <= 1 for x in v):
            raise ValueError("xi_grid의 모든 원소는 1보다 커야 합니다")
        return v

    @model_validator(mode="after")
    def _smoothing_window(self):
        if self.smoothing_b >= 1.0 - self.smoothing_gamma:
            raise ValueError("b ∈ (1/2, 1-γ) 이어야 합니다")
        return self


CONFIG_MODELS = {
    "evolve": RunConfig,
    "sweep-eps": SweepConfig,
    "growth": GrowthConfig,
    "soliton": SolitonConfig,
    "verify-kernels": AuditConfig,
}
