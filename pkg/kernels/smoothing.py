# kernels/smoothing.py
"""
축약 평활 상한의 표본 감사

    S(ξ, τ) = ⟨ξ⟩^{2a} / ⟨τ - d_ε(ξ)⟩^{2γ}
              · ∫∫ ⟨εξ₁⟩^{-4} |ξ₁|^{-1/3} ⟨P(ξ₂)⟩^{-2b} dξ₂ dξ₁

P는 kernels.roots 의 3차식. 안쪽 ξ₂ 적분은 음의 근 r 기준 세 구간
(-∞, r), (r, 0), (0, ∞) 각각에서 로그 거리 변수로 바꿔 quad 로 적분한다.
바깥 ξ₁ 적분은 quad, 분할점은 0, ξ 와 상수항의 영점.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List

import numpy as np
import pandas as pd
from scipy.stats import qmc
from tqdm import tqdm

from common.errors import NumericalError
from common.logging import get_logger
from config.settings import DEFAULT_THREADS, SHOW_PROGRESS
from engine.quadrature import checked_quad
from engine.spectral import DispersionSymbol
from kernels.roots import AUDIT_COLUMNS, cubic_coefficients, cubic_root

logger = get_logger(__name__)

CASES = ("tau_negative", "tau_far", "tau_near")

# math.exp 오버플로 직전; 그 너머 피적분 함수는 0으로 본다
_MAX_LOG = 700.0


def inner_integral(xi: float, tau: float, eps: float, xi1: float, b: float, *, limit: int = 200) -> float:
    """
    ∫ ⟨P(ξ₂)⟩^{-2b} dξ₂ 를 음의 근 r 과 0 에서 나눈 세 구간의 적응 구적 합으로 계산한다.
    구적이 허용치에 못 미치면 NumericalError(QUADRATURE_FAILED).
    """
    ca, cb, cc = cubic_coefficients(xi, tau, eps, xi1)
    r = cubic_root(ca, cb, cc)

    def weight(x: float) -> float:
        p = ((ca * x) * x + cb) * x + cc
        return (1.0 + p * p) ** (-b)

    def from_origin(origin: float, sign: float) -> Callable[[float], float]:
        # ξ₂ = origin + sign·e^y
        def f(y: float) -> float:
            if y > _MAX_LOG:
                return 0.0
            e = math.exp(y)
            return e * weight(origin + sign * e)

        return f

    pieces = [
        (from_origin(0.0, 1.0), -math.inf, math.inf),  # (0, ∞)
        (from_origin(r, -1.0), -math.inf, math.inf),  # (-∞, r)
    ]
    if r < 0:
        pieces.append((from_origin(r, 1.0), -math.inf, math.log(-r)))  # (r, 0)
    return sum(checked_quad(f, lo, hi, epsabs=1e-14, epsrel=1e-9, limit=limit)[0] for f, lo, hi in pieces)


def _constant_term_zeros(xi: float, tau: float, eps: float) -> List[float]:
    """(1+ε²y²)y² + τ = 0 인 ξ₁ = ξ ± y (τ < 0 일 때만)"""
    if tau >= 0:
        return []
    y2 = (-1.0 + math.sqrt(1.0 + 4.0 * eps**2 * (-tau))) / (2.0 * eps**2)
    y = math.sqrt(y2)
    return [xi - y, xi + y]


def double_integral(xi: float, tau: float, eps: float, b: float) -> float:
    def outer(x1: float) -> float:
        if x1 == 0:
            return 0.0
        return (1.0 + (eps * x1) ** 2) ** (-2.0) * abs(x1) ** (-1.0 / 3.0) * inner_integral(xi, tau, eps, x1, b)

    points = sorted(set([0.0, xi] + _constant_term_zeros(xi, tau, eps)))
    nodes = [-np.inf] + points + [np.inf]
    total = 0.0
    for lo, hi in zip(nodes[:-1], nodes[1:]):
        total += checked_quad(outer, lo, hi, epsabs=1e-14, epsrel=1e-7, limit=200)[0]
    return total


def smoothing_value(xi: float, tau: float, eps: float, b: float, gamma: float, a: float) -> float:
    d = float(DispersionSymbol(eps)(xi))
    prefactor = (1.0 + xi * xi) ** a / (1.0 + (tau - d) ** 2) ** gamma
    return prefactor * double_integral(xi, tau, eps, b)


def sample_points(sample_count: int, eps: float, xi_max: float, seed: int = 0) -> List[tuple[str, float, float]]:
    """
    결정적 표본열 (scrambled Halton, 고정 시드)
    ξ 는 [1e-2, ξ_max] 로그균등, 경우는 i mod 3 으로 순환
    """
    u = qmc.Halton(d=3, scramble=True, seed=seed).random(sample_count)
    lo, hi = math.log10(1e-2), math.log10(xi_max)
    points = []
    for i, (u_xi, u_tau, u_side) in enumerate(u):
        xi = 10.0 ** (lo + (hi - lo) * u_xi)
        d = float(DispersionSymbol(eps)(xi))
        case = CASES[i % 3]
        if case == "tau_negative":
            tau = -(1.0 + d) * 10.0 ** (-2.0 + 4.0 * u_tau)
        elif case == "tau_far":
            tau = 0.5 * d * u_tau if u_side < 0.5 else 2.0 * d * 10.0 ** (2.0 * u_tau)
        else:
            tau = d * 2.0 ** (-0.999 + 1.998 * u_tau)
        points.append((case, xi, tau))
    return points


@dataclass
class SmoothingAudit:
    table: pd.DataFrame
    running_max: np.ndarray
    flagged: int

    @property
    def worst(self) -> float:
        return float(self.running_max[-1]) if self.running_max.size else float("nan")

    def final_decade_gain(self) -> float:
        """마지막 10% 표본이 running max를 올린 비율"""
        n = self.running_max.size
        cut = max(0, n - max(1, n // 10) - 1)
        before = self.running_max[cut]
        return float(self.running_max[-1] / before - 1.0) if before > 0 else float("inf")


def smoothing_supremum_sample(
    eps: float,
    b: float,
    gamma: float,
    a: float,
    s: float,
    sample_count: int,
    *,
    xi_max: float = 1e3,
    seed: int = 0,
    threads: int = DEFAULT_THREADS,
) -> SmoothingAudit:
    """
    표본 (ξ, τ) 에서 S(ξ, τ) 를 평가해 running max 를 모은다.

    S 의 식에는 s 가 없다. s 는 (b, γ, a) 가 속한 매개변수 상자를 지정하는 값으로
    로그에만 기록되며, 같은 (ε, b, γ, a, seed) 라면 s 와 무관하게 같은 표가 나온다.
    적분 실패 표본은 NaN 으로 남기고 flagged 에 센다.
    """
    points = sample_points(sample_count, eps, xi_max, seed)
    logger.info(
        f"[AUDIT] smoothing start eps={eps:g} b={b:g} gamma={gamma:g} a={a:g} s={s:g} samples={sample_count}"
    )

    def evaluate(point: tuple[str, float, float]) -> float:
        _, xi, tau = point
        try:
            return smoothing_value(xi, tau, eps, b, gamma, a)
        except NumericalError as e:
            logger.warning(f"[WARN] smoothing sample flagged xi={xi:g} tau={tau:g}: {e}")
            return float("nan")

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        values = list(
            tqdm(pool.map(evaluate, points), total=len(points), desc="smoothing", disable=not SHOW_PROGRESS)
        )

    vals = np.asarray(values, dtype=float)
    running = np.fmax.accumulate(np.where(np.isfinite(vals), vals, -np.inf))
    running = np.where(np.isfinite(running), running, 0.0)
    table = pd.DataFrame(
        {
            "case": [p[0] for p in points],
            "xi": [p[1] for p in points],
            "tau": [p[2] for p in points],
            "xi1_or_na": "na",
            "value": vals,
            "bound": running,
            "ratio": np.where(running > 0, vals / np.where(running > 0, running, 1.0), np.nan),
        },
        columns=AUDIT_COLUMNS,
    )
    flagged = int(np.count_nonzero(~np.isfinite(vals)))
    audit = SmoothingAudit(table, running, flagged)
    logger.info(f"[AUDIT] smoothing worst={audit.worst:.6e} final_decade_gain={audit.final_decade_gain():.3e}")
    return audit
