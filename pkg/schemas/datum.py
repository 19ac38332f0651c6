# schemas/datum.py
"""초기값 스키마 (kind 필드로 구분되는 태그 유니온)"""
from __future__ import annotations

from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field

__all__ = [
    "StrictModel",
    "GaussianDatum",
    "PlaneWaveModulatedDatum",
    "SpecialLimitDatum",
    "FileDatum",
    "Datum",
]


class StrictModel(BaseModel):
    """알 수 없는 키는 거부"""

    model_config = ConfigDict(extra="forbid", frozen=True)


class GaussianDatum(StrictModel):
    """A · exp(-(x-c)²/(2w²))"""
    kind: Literal["gaussian"] = "gaussian"
    amp: float = Field(default=1.0, allow_inf_nan=False)
    width: float = Field(default=1.0, gt=0)
    center: float = Field(default=0.0, allow_inf_nan=False)

    @property
    def datum_id(self) -> str:
        return f"gaussian(amp={self.amp:g};width={self.width:g};center={self.center:g})"


class PlaneWaveModulatedDatum(StrictModel):
    """A · exp(iκx) · exp(-x²/(2w²))"""
    kind: Literal["plane_wave_modulated"] = "plane_wave_modulated"
    amp: float = Field(default=1.0, allow_inf_nan=False)
    wavenumber: float = Field(default=1.0, allow_inf_nan=False)
    width: float = Field(default=1.0, gt=0)

    @property
    def datum_id(self) -> str:
        return f"plane_wave_modulated(amp={self.amp:g};k={self.wavenumber:g};width={self.width:g})"


class SpecialLimitDatum(StrictModel):
    """주파수 측 구성: û₀(ξ) = ⟨ξ⟩^{-s} · √(2π) · e^{-ξ²/2}"""
    kind: Literal["special_limit"] = "special_limit"
    s: float = Field(default=0.0, allow_inf_nan=False)

    @property
    def datum_id(self) -> str:
        return f"special_limit(s={self.s:g})"


class FileDatum(StrictModel):
    """QMNLS1 체크포인트 파일에서 읽기 (n, L이 격자와 일치해야 함)"""
    kind: Literal["file"] = "file"
    path: str = Field(..., min_length=1)

    @property
    def datum_id(self) -> str:
        return f"file({self.path})"


Datum = Annotated[
    Union[GaussianDatum, PlaneWaveModulatedDatum, SpecialLimitDatum, FileDatum],
    Field(discriminator="kind"),
]
