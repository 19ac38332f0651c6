# limits/growth.py
"""
H^s 노름 성장 추적
- growth_tracking: log‖u(t)‖_{H^s} vs log⟨t⟩ 기울기를 다항 성장 지수와 비교
- uniform_bound_check: sup_ε ‖u^ε(t)‖_{H^s} ≤ R e^{Ct} 를 만족하는 최소 C
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from common.logging import get_logger
from config.settings import DEFAULT_THREADS
from engine.spectral import Field, sobolev_norm
from evolution.integrator import hs_norm_array, trajectory
from limits.semiclassical import map_members, schedule

logger = get_logger(__name__)


def growth_exponent(s: float) -> float:
    """
    α = (3^{⌊3s/4⌋+1} - 1)/2, 즉 α_0 = 1, α_k = 3α_{k-1} + 1
    """
    k = math.floor(3.0 * s / 4.0)
    return (3.0 ** (k + 1) - 1.0) / 2.0


def fit_log_slope(times: Sequence[float], norms: Sequence[float]) -> float:
    t = np.asarray(times, dtype=float)
    y = np.asarray(norms, dtype=float)
    if y.size < 2 or not np.all(y > 0):
        return 0.0
    x = 0.5 * np.log1p(t**2)
    return float(np.polyfit(x, np.log(y), 1)[0])


@dataclass
class GrowthResult:
    s: float
    eps: float
    times: List[float]
    norms: List[float]
    slope: float
    exponent: float
    margin: float

    @property
    def within_bound(self) -> bool:
        return self.slope <= self.exponent + self.margin

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"t": self.times, f"hs_{self.s:g}": self.norms})


def growth_tracking(
    initial: Field,
    s: float,
    T: float,
    eps: float,
    dt: float,
    *,
    samples: int = 100,
    margin: float = 0.05,
    dealias: bool = False,
) -> GrowthResult:
    n_steps, dt_eff, stride = schedule(T, dt, samples)
    times, norms = [], []
    for _, t, u in trajectory(initial, eps, dt_eff, n_steps, stride, dealias):
        times.append(t)
        norms.append(hs_norm_array(u, initial.grid, s))
    slope = fit_log_slope(times, norms)
    result = GrowthResult(s, eps, times, norms, slope, growth_exponent(s), margin)
    tag = "[INFO]" if result.within_bound else "[WARN]"
    logger.info(f"{tag} growth s={s:g} slope={slope:.3e} exponent={result.exponent:g}")
    return result


@dataclass
class UniformBoundReport:
    s: float
    radius: float
    C: float
    per_eps: Dict[float, float] = field(default_factory=dict)

    @property
    def finite(self) -> bool:
        return math.isfinite(self.C)

    def spread(self) -> float:
        vals = list(self.per_eps.values())
        return (max(vals) - min(vals)) if vals else 0.0

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {"eps": list(self.per_eps), "C": list(self.per_eps.values()), "s": self.s, "R": self.radius}
        )


def _fitted_rate(times: Sequence[float], norms: Sequence[float], radius: float) -> float:
    """max_{t>0} log(‖u(t)‖/R)/t, 0 이상으로 자름"""
    if radius == 0:
        return 0.0
    rates = [math.log(n / radius) / t for t, n in zip(times, norms) if t > 0 and n > 0]
    return max([0.0] + rates)


def uniform_bound_check(
    initial: Field,
    s: float,
    T: float,
    eps_list: Sequence[float],
    dt: float,
    *,
    radius: Optional[float] = None,
    samples: int = 100,
    threads: int = DEFAULT_THREADS,
) -> UniformBoundReport:
    if s <= 0.5:
        logger.warning(f"[WARN] uniform bound check at s={s:g} is outside s > 1/2")
    R = sobolev_norm(initial, s) if radius is None else radius
    n_steps, dt_eff, stride = schedule(T, dt, samples)

    def member(eps: float) -> float:
        times, norms = [], []
        for _, t, u in trajectory(initial, eps, dt_eff, n_steps, stride):
            times.append(t)
            norms.append(hs_norm_array(u, initial.grid, s))
        return _fitted_rate(times, norms, R)

    rates = map_members(member, list(eps_list), threads, "uniform-bound")
    per_eps = {float(e): c for e, c in zip(eps_list, rates)}
    C = max(rates) if rates else 0.0
    logger.info(f"[INFO] uniform bound R={R:.6g} C={C:.6g}")
    return UniformBoundReport(s, R, C, per_eps)
