# evolution/integrator.py
"""
mNLS 시간 적분 (ε = 0이면 3차 NLS)
    i u_t + u_xx - ε² u_xxxx = -J_ε(|u|²) u

Strang 분할 N(dt/2) ∘ L(dt) ∘ N(dt/2)
- L: 선형 흐름, 승수 exp(-i dt d_ε(ξ)) 정확 적용
- N: ∂_t u = i J_ε(|u|²) u, |u|가 점별 불변이므로 u ← exp(i dt J_ε(|u|²)) u 로 정확히 풀림
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from common.errors import NumericalError, UsageError
from common.logging import get_logger
from engine.spectral import (
    DispersionSymbol,
    Field,
    Grid,
    Space,
    as_physical,
    dealias_mask,
    hat,
    integrate,
    j_multiplier,
    sobolev_norm,
)

logger = get_logger(__name__)


# ============================================================
# 보존량
# ============================================================

def mass(f: Field) -> float:
    return sobolev_norm(f, 0.0) ** 2


def energy(f: Field, eps: float) -> float:
    """ε²/2 ‖u_xx‖² + 1/2 ‖u_x‖² - 1/4 ∫ J_ε(|u|²)|u|²"""
    g = f.grid
    power = np.abs(hat(f)) ** 2
    xi2 = g.freqs**2
    kinetic = 0.5 * eps**2 * np.sum(xi2 * xi2 * power) / g.length + 0.5 * np.sum(xi2 * power) / g.length
    rho = np.abs(as_physical(f).values) ** 2
    j_rho = np.fft.ifft(j_multiplier(eps)(g.freqs) * np.fft.fft(rho)).real
    return float(kinetic - 0.25 * integrate(j_rho * rho, g))


def hs_norm_array(u: np.ndarray, grid: Grid, s: float) -> float:
    u_hat = grid.dx * np.fft.fft(u)  # 위상 인자 (-1)^k 는 절댓값에 영향 없음
    return float(np.sqrt(np.sum((1.0 + grid.freqs**2) ** s * np.abs(u_hat) ** 2) / grid.length))


# ============================================================
# 분할 스텝
# ============================================================

class SplitStepper:
    """배열 수준 Strang 스텝 (승수 사전 계산)"""

    def __init__(self, grid: Grid, eps: float, dt: float, dealias: bool = False):
        self.grid = grid
        self.eps = eps
        self.dt = dt
        self._linear = np.exp(-1j * dt * DispersionSymbol(eps)(grid.freqs))
        self._j = j_multiplier(eps)(grid.freqs)
        self._mask = dealias_mask(grid) if dealias else None

    def nonlinear(self, u: np.ndarray, h: float) -> np.ndarray:
        rho = np.abs(u) ** 2
        v = rho if self.eps == 0 else np.fft.ifft(self._j * np.fft.fft(rho)).real
        out = np.exp(1j * h * v) * u
        if self._mask is not None:
            out = np.fft.ifft(self._mask * np.fft.fft(out))
        return out

    def linear(self, u: np.ndarray) -> np.ndarray:
        return np.fft.ifft(self._linear * np.fft.fft(u))

    def step(self, u: np.ndarray) -> np.ndarray:
        half = 0.5 * self.dt
        return self.nonlinear(self.linear(self.nonlinear(u, half)), half)


def _require_physical(f: Field) -> None:
    if f.space is not Space.PHYSICAL:
        raise UsageError("WRONG_SPACE", "시간 적분은 Physical Field만 받습니다")


def nonlinear_step(f: Field, dt: float, eps: float) -> Field:
    _require_physical(f)
    return Field.physical(f.grid, SplitStepper(f.grid, eps, dt).nonlinear(f.values, dt))


def strang_step(f: Field, dt: float, eps: float, dealias: bool = False) -> Field:
    _require_physical(f)
    return Field.physical(f.grid, SplitStepper(f.grid, eps, dt, dealias).step(f.values))


def trajectory(
    initial: Field,
    eps: float,
    dt: float,
    n_steps: int,
    stride: int = 1,
    dealias: bool = False,
) -> Iterator[Tuple[int, float, np.ndarray]]:
    """
    (step, t, u) 를 stride 간격으로 생성한다. t = 0 과 마지막 스텝은 항상 포함.
    상태에 NaN/Inf가 생기면 NumericalError(NAN_IN_STATE).
    """
    stepper = SplitStepper(initial.grid, eps, dt, dealias)
    u = as_physical(initial).values.copy()
    yield 0, 0.0, u
    for k in range(1, n_steps + 1):
        u = stepper.step(u)
        if not np.all(np.isfinite(u)):
            raise NumericalError(
                "NAN_IN_STATE",
                f"상태에 NaN/Inf가 발생했습니다: step={k} t={k * dt:g}",
                {"step": k, "t": k * dt},
            )
        if k % stride == 0 or k == n_steps:
            yield k, k * dt, u


# ============================================================
# 진단
# ============================================================

@dataclass
class Diagnostics:
    times: List[float] = field(default_factory=list)
    mass: List[float] = field(default_factory=list)
    energy: List[float] = field(default_factory=list)
    hs_norms: Dict[float, List[float]] = field(default_factory=dict)

    @classmethod
    def for_orders(cls, orders: Sequence[float]) -> "Diagnostics":
        return cls(hs_norms={float(s): [] for s in orders})

    def record(self, t: float, f: Field, eps: float) -> None:
        self.times.append(t)
        self.mass.append(mass(f))
        self.energy.append(energy(f, eps))
        for s, series in self.hs_norms.items():
            series.append(sobolev_norm(f, s))

    def last(self) -> Dict[str, float]:
        if not self.times:
            return {}
        return self.to_frame().iloc[-1].to_dict()

    def to_frame(self) -> pd.DataFrame:
        data = {"t": self.times, "mass": self.mass, "energy": self.energy}
        for s, series in self.hs_norms.items():
            data[f"hs_{s:g}"] = series
        return pd.DataFrame(data)

    def relative_mass_drift(self) -> float:
        m = np.asarray(self.mass)
        if m.size == 0 or m[0] == 0:
            return float(np.max(np.abs(m))) if m.size else 0.0
        return float(np.max(np.abs(m - m[0])) / m[0])

    def energy_drift(self) -> float:
        e = np.asarray(self.energy)
        return float(np.max(np.abs(e - e[0]))) if e.size else 0.0

    def relative_energy_drift(self) -> float:
        e = np.asarray(self.energy)
        if e.size == 0 or e[0] == 0:
            return self.energy_drift()
        return self.energy_drift() / abs(float(e[0]))


@dataclass
class EvolutionResult:
    final: Field
    diagnostics: Diagnostics
    checkpoints: List[Tuple[int, float, Field]]
    steps: int
    dt: float


def evolve(cfg, initial: Optional[Field] = None) -> EvolutionResult:
    """
    RunConfig 한 건을 실행한다 (결정적, 단일 스레드).
    checkpoint_stride > 0 이면 (step, t, Field) 를 메모리에 모아 반환하며,
    파일 기록은 services.runner 가 담당한다.
    """
    from generator.data import realize_datum

    grid = cfg.make() if hasattr(cfg, "make") else cfg.grid
    f0 = initial if initial is not None else realize_datum(cfg.datum, grid)
    n_steps = cfg.n_steps
    dt = cfg.t_final / n_steps
    if abs(dt - cfg.dt) > 1e-12 * cfg.dt:
        logger.info(f"[INFO] dt adjusted {cfg.dt:g} -> {dt:.17g} to land on t_final")

    phase = dt * float(DispersionSymbol(cfg.eps)(grid.xi_max))
    if phase > 1e3:
        logger.warning(f"[WARN] fastest linear phase per step is {phase:.3e} rad (applied exactly)")

    diag = Diagnostics.for_orders(cfg.sobolev_orders)
    checkpoints: List[Tuple[int, float, Field]] = []
    ck_stride = cfg.checkpoint_stride
    stride = cfg.diag_stride if ck_stride == 0 else int(np.gcd(cfg.diag_stride, ck_stride))

    logger.info(f"[START] evolve n={grid.n} L={grid.length:g} eps={cfg.eps:g} dt={dt:g} steps={n_steps}")
    u = as_physical(f0).values
    try:
        for k, t, u in trajectory(f0, cfg.eps, dt, n_steps, stride, cfg.dealias):
            state = Field.physical(grid, u)
            if k % cfg.diag_stride == 0 or k == n_steps:
                diag.record(t, state, cfg.eps)
            if ck_stride and k % ck_stride == 0:
                checkpoints.append((k, t, state))
    except NumericalError as e:
        e.context["last_good"] = diag.last()
        logger.error(f"[ERROR] evolve aborted at step {e.context.get('step')}: {e.message}")
        raise

    final = Field.physical(grid, u)
    logger.info(
        f"[DONE] evolve mass_drift={diag.relative_mass_drift():.3e} energy_drift={diag.energy_drift():.3e}"
    )
    return EvolutionResult(final, diag, checkpoints, n_steps, dt)
