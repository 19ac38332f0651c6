# limits/semiclassical.py
"""
비선형 ε → 0 스윕
- semiclassical_sweep: 같은 초기값에서 u^(ε)와 u(ε=0)를 함께 전개, 샘플 시각에서 H^s 차의 최댓값
- negative_s_difference: s < 0 에서 차이의 ε² 스케일링과 지수 포락선 A(e^{Ct} - 1)
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from scipy.optimize import curve_fit
from tqdm import tqdm

from common.errors import NumericalError
from common.logging import get_logger
from config.settings import DEFAULT_THREADS, SHOW_PROGRESS
from engine.spectral import Field, Grid
from evolution.integrator import hs_norm_array, trajectory

logger = get_logger(__name__)


@dataclass
class SweepResult:
    eps_values: List[float]
    sup_errors: List[float]
    meta: Dict[str, object] = field(default_factory=dict)

    @property
    def failed(self) -> List[float]:
        return [e for e, v in zip(self.eps_values, self.sup_errors) if not math.isfinite(v)]

    def to_frame(self) -> pd.DataFrame:
        m = self.meta
        return pd.DataFrame(
            {
                "eps": self.eps_values,
                "sup_err": self.sup_errors,
                "s": m.get("s"),
                "T": m.get("T"),
                "dt": m.get("dt"),
                "n": m.get("n"),
                "L": m.get("L"),
                "datum_id": m.get("datum_id"),
            }
        )


def schedule(T: float, dt: float, samples: int) -> tuple[int, float, int]:
    n_steps = max(1, int(round(T / dt)))
    return n_steps, T / n_steps, max(1, n_steps // samples)


def _sampled_states(initial: Field, eps: float, dt: float, n_steps: int, stride: int, dealias: bool):
    return [(t, u) for _, t, u in trajectory(initial, eps, dt, n_steps, stride, dealias)]


def map_members(fn, eps_list: Sequence[float], threads: int, label: str) -> list:
    workers = max(1, min(threads, len(eps_list)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(
            tqdm(pool.map(fn, eps_list), total=len(eps_list), desc=label, disable=not SHOW_PROGRESS)
        )


def semiclassical_sweep(
    initial: Field,
    s: float,
    T: float,
    eps_list: Sequence[float],
    dt: float,
    *,
    samples: int = 100,
    dealias: bool = False,
    threads: int = DEFAULT_THREADS,
    datum_id: str = "custom",
) -> SweepResult:
    """
    sup_{t ∈ samples} ‖u^(ε)(t) - u(t)‖_{H^s}.
    샘플 간격은 T/samples 이하. 실패한 ε는 NaN으로 기록하고 스윕은 계속된다.
    """
    grid: Grid = initial.grid
    n_steps, dt_eff, stride = schedule(T, dt, samples)
    outside = s <= 0.5
    if outside:
        logger.warning(f"[WARN] s={s:g} is outside the Sobolev-algebra hypothesis (s > 1/2)")
    logger.info(f"[SWEEP] start s={s:g} T={T:g} eps={list(eps_list)} steps={n_steps} stride={stride}")

    reference = _sampled_states(initial, 0.0, dt_eff, n_steps, stride, dealias)

    def member(eps: float) -> float:
        if eps == 0:
            return 0.0
        try:
            sup = 0.0
            for (_, _, u), (_, ref) in zip(trajectory(initial, eps, dt_eff, n_steps, stride, dealias), reference):
                sup = max(sup, hs_norm_array(u - ref, grid, s))
            return sup
        except NumericalError as e:
            logger.error(f"[ERROR] sweep member eps={eps:g} failed: {e}")
            return float("nan")

    errors = map_members(member, list(eps_list), threads, "sweep-eps")
    for eps, err in zip(eps_list, errors):
        logger.info(f"[SWEEP] eps={eps:g} sup_err={err:.6e}")

    meta = {
        "s": s,
        "T": T,
        "dt": dt_eff,
        "n": grid.n,
        "L": grid.length,
        "datum_id": datum_id,
        "outside_hypothesis": outside,
    }
    return SweepResult(list(eps_list), errors, meta)


# ============================================================
# s < 0 차이 실험
# ============================================================

def _envelope(t, A, C):
    return A * np.expm1(C * t)


@dataclass
class NegativeSResult:
    s: float
    times: List[float]
    series: Dict[float, List[float]]
    ref_t: float
    envelopes: Dict[float, tuple] = field(default_factory=dict)

    def at(self, t: float) -> Dict[float, float]:
        idx = int(np.argmin(np.abs(np.asarray(self.times) - t)))
        return {eps: vals[idx] for eps, vals in self.series.items()}

    def successive_ratios(self) -> List[float]:
        """ε를 절반씩 줄일 때 기준 시각 오차비 (ε² 스케일이면 ≈ 4)"""
        at_ref = self.at(self.ref_t)
        eps_sorted = [e for e in sorted(at_ref, reverse=True) if e > 0]
        return [at_ref[a] / at_ref[b] for a, b in zip(eps_sorted, eps_sorted[1:])]

    def scaled(self) -> Dict[float, float]:
        """error(ε)/ε² at ref_t"""
        return {e: v / e**2 for e, v in self.at(self.ref_t).items() if e > 0}

    def to_frame(self) -> pd.DataFrame:
        data = {"t": self.times}
        for eps, vals in self.series.items():
            data[f"err_eps_{eps:g}"] = vals
        return pd.DataFrame(data)


def fit_envelope(times: Sequence[float], values: Sequence[float]) -> tuple:
    """A(e^{Ct} - 1) 최소제곱 적합, 실패 시 (nan, nan)"""
    t = np.asarray(times, dtype=float)
    y = np.asarray(values, dtype=float)
    if not np.any(y > 0):
        return 0.0, 0.0
    try:
        popt, _ = curve_fit(
            _envelope, t, y, p0=(max(y[-1], 1e-300), 1.0), bounds=([0.0, 1e-8], [np.inf, 50.0]), maxfev=20000
        )
        return float(popt[0]), float(popt[1])
    except (RuntimeError, ValueError) as e:
        logger.warning(f"[WARN] envelope fit failed: {e}")
        return float("nan"), float("nan")


def negative_s_difference(
    initial: Field,
    s: float,
    T: float,
    eps_list: Sequence[float],
    dt: float,
    *,
    samples: int = 100,
    ref_t: Optional[float] = None,
    dealias: bool = False,
    threads: int = DEFAULT_THREADS,
) -> NegativeSResult:
    if s >= 0:
        logger.warning(f"[WARN] negative_s_difference called with s={s:g} >= 0")
    grid = initial.grid
    n_steps, dt_eff, stride = schedule(T, dt, samples)
    reference = _sampled_states(initial, 0.0, dt_eff, n_steps, stride, dealias)
    times = [t for t, _ in reference]

    def member(eps: float) -> List[float]:
        if eps == 0:
            return [0.0] * len(times)
        return [
            hs_norm_array(u - ref, grid, s)
            for (_, _, u), (_, ref) in zip(trajectory(initial, eps, dt_eff, n_steps, stride, dealias), reference)
        ]

    rows = map_members(member, list(eps_list), threads, "negative-s")
    series = {float(e): r for e, r in zip(eps_list, rows)}
    result = NegativeSResult(s, times, series, ref_t if ref_t is not None else 0.5 * T)
    result.envelopes = {e: fit_envelope(times, vals) for e, vals in series.items() if e > 0}
    logger.info(f"[SWEEP] negative-s ratios={['%.3f' % r for r in result.successive_ratios()]}")
    return result
