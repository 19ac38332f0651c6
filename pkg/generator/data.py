# generator/data.py
"""
초기값 생성기
- 설정 스키마(Datum)를 격자 위의 Field로 실현
- 테스트용 무작위 매끄러운 필드 (고정 시드)
"""
from __future__ import annotations

import numpy as np

from common.errors import ConfigError
from common.logging import get_logger
from config.settings import BOUNDARY_TOL
from engine.spectral import Field, Grid, as_physical, japanese_bracket
from schemas.datum import (
    FileDatum,
    GaussianDatum,
    PlaneWaveModulatedDatum,
    SpecialLimitDatum,
)

logger = get_logger(__name__)


def gaussian(grid: Grid, amp: float = 1.0, width: float = 1.0, center: float = 0.0) -> Field:
    return Field.physical(grid, amp * np.exp(-((grid.x - center) ** 2) / (2.0 * width**2)))


def plane_wave_modulated(grid: Grid, amp: float = 1.0, wavenumber: float = 1.0, width: float = 1.0) -> Field:
    envelope = np.exp(-(grid.x**2) / (2.0 * width**2))
    return Field.physical(grid, amp * np.exp(1j * wavenumber * grid.x) * envelope)


def special_limit_profile(grid: Grid, s: float) -> Field:
    """û₀(ξ) = ⟨ξ⟩^{-s} √(2π) e^{-ξ²/2} (주파수 공간에서 구성)"""
    xi = grid.freqs
    return Field.frequency(grid, japanese_bracket(xi) ** (-s) * np.sqrt(2.0 * np.pi) * np.exp(-0.5 * xi**2))


def nls_soliton(grid: Grid, tau: float = 1.0) -> Field:
    """ε = 0 기저 상태 √(2τ) sech(√τ x)"""
    return Field.physical(grid, np.sqrt(2.0 * tau) / np.cosh(np.sqrt(tau) * grid.x))


def realize_datum(datum, grid: Grid) -> Field:
    if isinstance(datum, GaussianDatum):
        f = gaussian(grid, datum.amp, datum.width, datum.center)
    elif isinstance(datum, PlaneWaveModulatedDatum):
        f = plane_wave_modulated(grid, datum.amp, datum.wavenumber, datum.width)
    elif isinstance(datum, SpecialLimitDatum):
        f = special_limit_profile(grid, datum.s)
    elif isinstance(datum, FileDatum):
        from services.checkpoint import read_checkpoint

        ckpt = read_checkpoint(datum.path)
        if ckpt.grid != grid:
            raise ConfigError(
                "GRID_MISMATCH",
                f"체크포인트 격자가 설정과 다릅니다: file=(n={ckpt.grid.n}, L={ckpt.grid.length}) "
                f"config=(n={grid.n}, L={grid.length})",
            )
        f = ckpt.field
    else:
        raise ConfigError("UNKNOWN_DATUM", f"지원하지 않는 초기값입니다: {datum!r}")

    values = as_physical(f).values
    if not np.all(np.isfinite(values)):
        raise ConfigError("NON_FINITE_DATUM", f"초기값에 NaN/Inf가 있습니다: {datum.datum_id}")
    edge = float(max(abs(values[0]), abs(values[-1])))
    scale = float(np.max(np.abs(values))) or 1.0
    if edge > BOUNDARY_TOL * scale:
        logger.warning(f"[WARN] datum not negligible at boundary: |u(±L/2)|/max={edge / scale:.3e}")
    return f


def random_smooth_field(grid: Grid, rng: np.random.Generator, bandwidth: float = 4.0, real: bool = False) -> Field:
    """가우시안 포락선 주파수 계수를 갖는 무작위 필드"""
    coeffs = rng.standard_normal(grid.n) + 1j * rng.standard_normal(grid.n)
    coeffs *= np.exp(-0.5 * (grid.freqs / bandwidth) ** 2)
    values = np.fft.ifft(coeffs) * grid.n
    if real:
        values = values.real
    return Field.physical(grid, values)
