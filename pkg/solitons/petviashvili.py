# solitons/petviashvili.py
"""
기저 상태 솔리톤 (d = 1)

    ε²Q'''' - Q'' + τQ - J_ε(Q²)Q = 0

v = J_ε(Q²) 를 정확히 소거한 단일 방정식을 Petviashvili 반복으로 푼다.
    M(ξ) = ε²ξ⁴ + ξ² + τ
    γ_n = ⟨MQ_n, Q_n⟩ / ⟨N(Q_n), Q_n⟩,   N(Q) = J_ε(Q²)Q
    Q_{n+1} = γ_n^{3/2} M^{-1} N(Q_n)
반복은 주파수 배열에서 진행하고, 잔차 MQ̂ - N̂ 은 저장된 스펙트럼으로 계산한다.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
from tqdm import tqdm

from common.errors import ConfigError, NumericalError, UsageError
from common.logging import get_logger
from config.settings import SHOW_PROGRESS
from engine.spectral import Field, Grid, as_physical, j_multiplier, l2_norm
from solitons.variational import (
    action,
    action_gradient,
    helmholtz_residual,
    nehari_terms,
    pohozaev_terms,
    reconstruct_v,
    relative_residual,
)

logger = get_logger(__name__)

COLLAPSE_NORM = 1e-12
POSITIVITY_TOL = 1e-10


@dataclass(frozen=True)
class SolitonProblem:
    eps: float
    tau: float
    grid: Grid
    d: int = 1

    def __post_init__(self):
        if not (self.eps > 0) or not math.isfinite(self.eps):
            raise ConfigError("INVALID_EPS", f"ε > 0 이어야 합니다: eps={self.eps}")
        if not (self.tau > 0) or not math.isfinite(self.tau):
            raise ConfigError("INVALID_TAU", f"τ > 0 이어야 합니다: tau={self.tau}")
        if not (1 <= self.d <= 11):
            raise ConfigError("INVALID_DIMENSION", f"d ∈ {{1, …, 11}} 이어야 합니다: d={self.d}")

    def symbol(self) -> np.ndarray:
        xi2 = self.grid.freqs**2
        return self.eps**2 * xi2 * xi2 + xi2 + self.tau


@dataclass
class SolitonResult:
    problem: SolitonProblem
    Q: Field
    v: Field
    action: float
    residual_pde: float
    residual_pohozaev: float
    residual_nehari: float
    iterations: int
    gammas: List[float] = field(default_factory=list, repr=False)
    residual_v: float = 0.0
    symmetry_error: float = 0.0
    gradient_residual: float = 0.0

    @property
    def min_value(self) -> float:
        return float(np.min(self.Q.values.real))

    @property
    def positive(self) -> bool:
        return self.min_value > -POSITIVITY_TOL

    def gamma_monotone(self, window: int = 10) -> bool:
        """마지막 window 회 동안 |γ_n - 1| 비증가 (반올림 여유 1e-13)"""
        dev = np.abs(np.asarray(self.gammas[-window:]) - 1.0)
        return bool(np.all(np.diff(dev) <= 1e-13))

    def meta(self) -> Dict[str, float]:
        return {
            "eps": self.problem.eps,
            "tau": self.problem.tau,
            "action": self.action,
            "residual_pde": self.residual_pde,
            "residual_pohozaev": self.residual_pohozaev,
            "residual_nehari": self.residual_nehari,
            "gradient_residual": self.gradient_residual,
            "iterations": self.iterations,
        }


def _recenter(q: np.ndarray) -> np.ndarray:
    """최댓값을 x = 0 (인덱스 n/2) 으로 옮긴다"""
    n = q.size
    return np.roll(q, n // 2 - int(np.argmax(q)))


def _symmetry_error(q: np.ndarray) -> float:
    mirrored = np.roll(q[::-1], 1)  # j → n - j (mod n)
    scale = float(np.max(np.abs(q))) or 1.0
    return float(np.max(np.abs(q - mirrored))) / scale


def _finish(p: SolitonProblem, q_hat: np.ndarray, residual: float, iterations: int, gammas: List[float]) -> SolitonResult:
    g = p.grid
    q = _recenter(np.fft.ifft(q_hat).real)
    Q = Field.physical(g, q)
    v = reconstruct_v(Q, p.eps)
    grad_u, _ = action_gradient(Q, v, p.eps, p.tau)
    result = SolitonResult(
        problem=p,
        Q=Q,
        v=v,
        action=action(Q, v, p.eps, p.tau),
        residual_pde=residual,
        residual_pohozaev=relative_residual(pohozaev_terms(Q, v, p.eps, p.tau, 1)),
        residual_nehari=relative_residual(nehari_terms(Q, v, p.eps, p.tau)),
        iterations=iterations,
        gammas=gammas,
        residual_v=helmholtz_residual(Q, v, p.eps),
        symmetry_error=_symmetry_error(q),
        gradient_residual=l2_norm(grad_u) / l2_norm(Q),
    )
    if not result.positive:
        logger.warning(f"[WARN] soliton not positive: min Q = {result.min_value:.3e}")
    return result


def petviashvili_solve(
    p: SolitonProblem,
    init: Field,
    tol: float = 1e-10,
    max_iter: int = 500,
) -> SolitonResult:
    """
    성공 시 ‖ε²Q'''' - Q'' + τQ - J_ε(Q²)Q‖ ≤ tol·‖Q‖.
    max_iter 초과 → NumericalError(NON_CONVERGENCE), ‖Q_n‖ < 1e-12 → NumericalError(TRIVIAL_FIXED_POINT)
    """
    if init.grid != p.grid:
        raise ConfigError("GRID_MISMATCH", "초기값 격자가 문제 격자와 다릅니다")
    q0 = as_physical(init)
    if not q0.is_real(tol=1e-12):
        raise UsageError("COMPLEX_FIELD", "초기값은 실수장이어야 합니다")

    g = p.grid
    m = p.symbol()
    j = j_multiplier(p.eps)(g.freqs)
    # np.fft 규약 그대로 사용: 위상/스케일 인자는 γ 와 잔차 비율에서 상쇄된다
    q_hat = np.fft.fft(q0.values.real)
    gammas: List[float] = []
    gamma = float("nan")
    residual = float("inf")

    logger.info(f"[START] petviashvili eps={p.eps:g} tau={p.tau:g} n={g.n} L={g.length:g} tol={tol:g}")
    bar = tqdm(total=max_iter, desc="petviashvili", disable=not SHOW_PROGRESS, leave=False)
    for k in range(1, max_iter + 1):
        bar.update(1)
        q_norm = math.sqrt(float(np.sum(np.abs(q_hat) ** 2)) * g.dx / g.n)
        if q_norm < COLLAPSE_NORM:
            raise NumericalError(
                "TRIVIAL_FIXED_POINT",
                f"반복이 0으로 붕괴했습니다: iteration={k} ‖Q‖={q_norm:.3e}",
                {"iteration": k, "gamma": gamma, "residual": residual},
            )
        q = np.fft.ifft(q_hat).real
        rho = q * q
        n_hat = np.fft.fft(np.fft.ifft(j * np.fft.fft(rho)).real * q)

        numer = float(np.sum(m * np.abs(q_hat) ** 2))
        denom = float(np.real(np.vdot(q_hat, n_hat)))
        if not np.isfinite(numer) or not np.isfinite(denom):
            raise NumericalError(
                "NAN_IN_STATE",
                f"반복 중 NaN/Inf가 발생했습니다: iteration={k}",
                {"iteration": k, "gamma": gamma, "residual": residual},
            )
        if denom <= 0:
            raise NumericalError(
                "TRIVIAL_FIXED_POINT",
                f"⟨N(Q),Q⟩ ≤ 0 이라 안정화 인자를 정의할 수 없습니다: iteration={k}",
                {"iteration": k, "gamma": gamma, "residual": residual},
            )
        gamma = numer / denom
        gammas.append(gamma)

        residual = math.sqrt(float(np.sum(np.abs(m * q_hat - n_hat) ** 2))) / math.sqrt(
            float(np.sum(np.abs(q_hat) ** 2))
        )
        bar.set_postfix(residual=f"{residual:.2e}", gamma=f"{gamma:.12f}")
        if residual <= tol:
            bar.close()
            result = _finish(p, q_hat, residual, k, gammas)
            logger.info(
                f"[DONE] petviashvili converged iterations={k} residual={residual:.3e} "
                f"action={result.action:.12g} gamma={gamma:.15f}"
            )
            return result

        q_hat = gamma**1.5 * n_hat / m

    bar.close()
    logger.error(f"[ERROR] petviashvili did not converge: iterations={max_iter} residual={residual:.3e} gamma={gamma:.15g}")
    raise NumericalError(
        "NON_CONVERGENCE",
        f"Petviashvili 반복이 수렴하지 않았습니다: max_iter={max_iter} residual={residual:.3e} gamma={gamma:.15g}",
        {"iterations": max_iter, "gamma": gamma, "residual": residual},
    )


def default_initial_guess(p: SolitonProblem, width: float = 1.0, amp: Optional[float] = None) -> Field:
    """가우시안 초기값, 진폭 기본값은 ε = 0 기저 상태 높이 √(2τ)"""
    a = math.sqrt(2.0 * p.tau) if amp is None else amp
    return Field.physical(p.grid, a * np.exp(-(p.grid.x**2) / (2.0 * width**2)))
