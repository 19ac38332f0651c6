# solitons/scaling.py
"""
3선형 추정의 스케일링 반례 산술 (d = 1)

    û(ξ) = φ̂(ξ) - φ̂(2ξ),  φ̂(ξ) = exp(-1/(1-ξ²)) (|ξ| < 1), 0 (그 외)
    û_k(ξ) = û(ξ/2^k)
    ‖u_k‖³_{L³} ≃ 2^{2dk},  ‖u_k‖_{H^s} ≃ 2^{(s+d/2)k}
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence

import numpy as np
import pandas as pd

from common.errors import ConfigError
from common.logging import get_logger
from engine.spectral import Field, Grid, inverse_transform, integrate, make_grid, sobolev_norm

logger = get_logger(__name__)

SLOPE_TOL = 0.05


def bump_hat(xi: np.ndarray) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    out = np.zeros_like(xi)
    inside = np.abs(xi) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - xi[inside] ** 2))
    return out


def annulus_hat(xi: np.ndarray) -> np.ndarray:
    return bump_hat(xi) - bump_hat(2.0 * np.asarray(xi, dtype=float))


def dilated_profile(grid: Grid, k: int) -> Field:
    return inverse_transform(Field.frequency(grid, annulus_hat(grid.freqs / 2.0**k)))


@dataclass
class ScalingReport:
    ks: List[int]
    table: pd.DataFrame
    slopes: Dict[str, float]
    expected: Dict[str, float]

    @property
    def deviations(self) -> Dict[str, float]:
        return {key: abs(self.slopes[key] - self.expected[key]) for key in self.slopes}

    @property
    def passed(self) -> bool:
        return all(dev <= SLOPE_TOL for dev in self.deviations.values())


def scaling_exponents_check(
    s_list: Sequence[float] = (0.0, 1.0, 2.0),
    k_max: int = 7,
    *,
    k_min: int = 3,
    n: int = 16384,
    L: float = 200.0,
) -> ScalingReport:
    """log₂‖u_k‖³_{L³} 와 log₂‖u_k‖_{H^s} 의 k에 대한 최소제곱 기울기"""
    grid = make_grid(n, L)
    if 3 * 2**k_max >= 2.0 * grid.xi_max:
        raise ConfigError(
            "GRID_TOO_SMALL",
            f"3·2^k_max < 2ξ_max 이어야 |u_k|³ 가 앨리어싱 없이 적분됩니다: "
            f"k_max={k_max} xi_max={grid.xi_max:.6g}",
        )
    if k_min >= k_max:
        raise ConfigError("INVALID_RANGE", f"k_min < k_max 이어야 합니다: k_min={k_min} k_max={k_max}")

    ks = list(range(k_min, k_max + 1))
    rows = []
    for k in ks:
        u = dilated_profile(grid, k)
        row = {"k": k, "log2_l3_cube": float(np.log2(integrate(np.abs(u.values) ** 3, grid)))}
        for s in s_list:
            row[f"log2_hs_{s:g}"] = float(np.log2(sobolev_norm(u, s)))
        rows.append(row)
    table = pd.DataFrame(rows)

    slopes = {"l3_cube": float(np.polyfit(ks, table["log2_l3_cube"], 1)[0])}
    expected = {"l3_cube": 2.0}
    for s in s_list:
        slopes[f"hs_{s:g}"] = float(np.polyfit(ks, table[f"log2_hs_{s:g}"], 1)[0])
        expected[f"hs_{s:g}"] = s + 0.5

    report = ScalingReport(ks, table, slopes, expected)
    logger.info(f"[AUDIT] scaling slopes={ {k: round(v, 4) for k, v in slopes.items()} } passed={report.passed}")
    return report
