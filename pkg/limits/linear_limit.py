# limits/linear_limit.py
"""
선형 전파자의 ε → 0 극한

- linear_limit_error: ‖(U_ε(t) - U_0(t)) u₀‖²_{H^s} 의 스펙트럴 계산
    = (1/L) Σ 2(1 - cos(ε² t ξ⁴)) ⟨ξ⟩^{2s} |û₀|²
- limit_integral: 연속 적분 I(t) = ∫ (1 - cos(ε² t ξ⁴)) ⟨ξ⟩^{2s}|û₀|² dξ  (I = π · linear_limit_error)
- limit_integral_plateau: t → ∞ 극한 (cos 항은 Riemann–Lebesgue로 소멸)
- limit_integral_closed_form: 특수 프로파일의 Bessel(J_{±1/4}) 닫힌 형태
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, Literal, Tuple

import numpy as np
from scipy.special import gamma as gamma_fn
from scipy.special import jv

from common.errors import ConfigError
from common.logging import get_logger
from engine.quadrature import checked_quad, quartic_cos_integral
from engine.spectral import Field, Grid, hat, linear_propagate, sobolev_norm

logger = get_logger(__name__)

Profile = Literal["special", "indicator"]

# 결과 보고용 상수: 적분 계산값과 본문 주장값
PLATEAU_STATED = 2.0 * math.pi
PLATEAU_COMPUTED_D1 = 2.0 * math.pi**1.5


def linear_limit_error(f: Field, s: float, t: float, eps: float) -> float:
    g = f.grid
    phase = eps**2 * t * g.freqs**4
    weight = (1.0 + g.freqs**2) ** s
    # 2(1 - cos θ) = 4 sin²(θ/2), 작은 θ에서 상쇄 오차 방지
    return float(np.sum(4.0 * np.sin(0.5 * phase) ** 2 * weight * np.abs(hat(f)) ** 2) / g.length)


def linear_limit_error_direct(f: Field, s: float, t: float, eps: float) -> float:
    """독립 경로: 두 전파 결과의 차를 직접 노름"""
    diff = linear_propagate(f, t, eps).values - linear_propagate(f, t, 0.0).values
    return sobolev_norm(Field(f.grid, diff, f.space), s) ** 2


def operator_norm_gap(t: float, eps: float, grid: Grid) -> float:
    """격자 위 sup_ξ |e^{-itξ²}(e^{-iε²tξ⁴} - 1)| (t > 0, ε > 0 이면 2에 접근)"""
    xi = grid.freqs
    return float(np.max(np.abs(np.exp(-1j * t * xi**2) * (np.exp(-1j * eps**2 * t * xi**4) - 1.0))))


# ============================================================
# 연속 적분 (특수/지시 프로파일)
# ============================================================

def _profile_density(profile: Profile) -> Tuple[Callable[[float], float], float, float, float]:
    """
    (ξ ≥ 0 위의 밀도 ⟨ξ⟩^{2s}|û₀|², 지지 하한, 지지 상한, 대칭 배수)
    특수 프로파일은 ⟨ξ⟩^{2s}|û₀|² = 2π e^{-ξ²} 로 s와 무관하다.
    """
    if profile == "special":
        return (lambda x: 2.0 * math.pi * math.exp(-x * x)), 0.0, math.inf, 2.0
    if profile == "indicator":
        # ⟨ξ⟩^s û₀ = √(2π) 1_{[1,2]}
        return (lambda x: 2.0 * math.pi), 1.0, 2.0, 1.0
    raise ConfigError("UNKNOWN_PROFILE", f"지원하지 않는 프로파일입니다: {profile}")


def limit_integral_plateau(s: float = 0.0, profile: Profile = "special") -> Tuple[float, float]:
    """
    (plateau, abserr)

    두 프로파일 모두 û₀ 에 ⟨ξ⟩^{-s} 가 들어 있어 밀도 ⟨ξ⟩^{2s}|û₀|² 에서 s 가 소거된다.
    따라서 결과는 s 와 무관하며, s 는 호출 규약과 보고용으로만 받는다.
    """
    density, lo, hi, mult = _profile_density(profile)
    value, err = checked_quad(density, lo, hi, epsabs=1e-14, epsrel=1e-13)
    return mult * value, mult * err


def limit_integral(t: float, eps: float, s: float = 0.0, profile: Profile = "special") -> Tuple[float, float]:
    """(I(t), abserr). ε² t 에만 의존한다."""
    c = eps**2 * t
    plateau, p_err = limit_integral_plateau(s, profile)
    if c == 0:
        return 0.0, 0.0
    density, lo, hi, mult = _profile_density(profile)
    cut = 40.0 if math.isinf(hi) else hi
    osc, o_err = quartic_cos_integral(density, lo, hi, c, xi_cut=cut)
    return plateau - mult * osc, p_err + mult * o_err


def sphere_area(d: int) -> float:
    """|S^{d-1}| = 2π^{d/2}/Γ(d/2)"""
    return 2.0 * math.pi ** (d / 2.0) / float(gamma_fn(d / 2.0))


def limit_integral_closed_form(t: float, eps: float, d: int = 1) -> float:
    """
    특수 프로파일 I(t)의 닫힌 형태, z = 1/(8 ε² t):
        (π^{3/2}/4)|S^{d-1}| · ( √(2π)/(ε√t) · [sin(π/8 - z) J_{1/4}(z) - cos(z + π/8) J_{-1/4}(z)] + 4 )
    t → ∞ 에서 π^{3/2}|S^{d-1}|, t → 0 에서 0.
    """
    c = eps**2 * t
    if c == 0:
        return 0.0
    z = 1.0 / (8.0 * c)
    bracket = math.sin(math.pi / 8.0 - z) * jv(0.25, z) - math.cos(z + math.pi / 8.0) * jv(-0.25, z)
    return (math.pi**1.5 / 4.0) * sphere_area(d) * (math.sqrt(2.0 * math.pi) / math.sqrt(c) * bracket + 4.0)


@dataclass
class PlateauReport:
    s: float
    profile: str
    plateau: float
    plateau_err: float
    stated: float
    computed_constant: float
    finite_c: float
    finite_quadrature: float
    finite_closed_form: float

    @property
    def finite_relative_gap(self) -> float:
        return abs(self.plateau - self.finite_quadrature) / self.plateau

    def as_dict(self) -> Dict[str, float]:
        return {
            "s": self.s,
            "profile": self.profile,
            "plateau": self.plateau,
            "plateau_abserr": self.plateau_err,
            "stated_2pi": self.stated,
            "abs_diff_stated": abs(self.plateau - self.stated),
            "computed_2pi_3_2": self.computed_constant,
            "abs_diff_computed": abs(self.plateau - self.computed_constant),
            "finite_eps2_t": self.finite_c,
            "finite_quadrature": self.finite_quadrature,
            "finite_closed_form": self.finite_closed_form,
            "finite_relative_gap": self.finite_relative_gap,
        }


def plateau_report(s: float = 0.0, profile: Profile = "special", finite_c: float = 1e3) -> PlateauReport:
    logger.info(f"[START] plateau s={s:g} profile={profile}")
    plateau, err = limit_integral_plateau(s, profile)
    finite, _ = limit_integral(finite_c, 1.0, s, profile)
    closed = limit_integral_closed_form(finite_c, 1.0) if profile == "special" else float("nan")
    report = PlateauReport(
        s=s,
        profile=profile,
        plateau=plateau,
        plateau_err=err,
        stated=PLATEAU_STATED,
        computed_constant=PLATEAU_COMPUTED_D1,
        finite_c=finite_c,
        finite_quadrature=finite,
        finite_closed_form=closed,
    )
    logger.info(f"[DONE] plateau={plateau:.15g} gap@{finite_c:g}={report.finite_relative_gap:.3e}")
    return report
