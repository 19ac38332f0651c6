# solitons/variational.py
"""
작용 범함수와 변분 항등식 (1차원 실수장, 미분은 모두 스펙트럴)

    I(u,v) = ∫ ε²(u'')²/2 + (u')²/2 + τu²/2 + ε²(v')²/4 + v²/4 - u²v/2

적분 항 이름
    A = ∫(Δu)²   B = ∫|∇u|²   C = ∫u²   D = ∫|∇v|²   E = ∫v²   F = ∫u²v
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, NamedTuple, Tuple

import numpy as np

from common.errors import UsageError
from common.logging import get_logger
from engine.spectral import (
    Field,
    apply_J,
    apply_multiplier,
    as_physical,
    hat,
    integrate,
    sobolev_norm,
)

logger = get_logger(__name__)


class ActionTerms(NamedTuple):
    A: float
    B: float
    C: float
    D: float
    E: float
    F: float


def _real_values(f: Field, name: str) -> np.ndarray:
    p = as_physical(f)
    if not p.is_real(tol=1e-12 * (1.0 + float(np.max(np.abs(p.values), initial=0.0)))):
        raise UsageError("COMPLEX_FIELD", f"{name}는 실수장이어야 합니다")
    return p.values.real


def _spectral_moment(f: Field, power: int) -> float:
    """(1/L) Σ ξ^{2·power} |f̂|²"""
    g = f.grid
    return float(np.sum(g.freqs ** (2 * power) * np.abs(hat(f)) ** 2) / g.length)


def action_terms(u: Field, v: Field) -> ActionTerms:
    uu = _real_values(u, "u")
    vv = _real_values(v, "v")
    g = u.grid
    return ActionTerms(
        A=_spectral_moment(u, 2),
        B=_spectral_moment(u, 1),
        C=_spectral_moment(u, 0),
        D=_spectral_moment(v, 1),
        E=_spectral_moment(v, 0),
        F=integrate(uu * uu * vv, g),
    )


def reconstruct_v(Q: Field, eps: float) -> Field:
    """-ε²v'' + v = Q² 의 해 v = J_ε(Q²)"""
    q = _real_values(Q, "Q")
    return apply_J(Field.physical(Q.grid, q * q), eps)


def helmholtz_residual(Q: Field, v: Field, eps: float) -> float:
    """‖-ε²v'' + v - Q²‖_{L²} / ‖Q²‖_{L²}"""
    q = _real_values(Q, "Q")
    lhs = apply_multiplier(v, lambda xi: 1.0 + eps**2 * xi**2)
    q2 = Field.physical(Q.grid, q * q)
    denom = sobolev_norm(q2, 0.0)
    diff = Field.physical(Q.grid, as_physical(lhs).values.real - q * q)
    return sobolev_norm(diff, 0.0) / denom if denom > 0 else sobolev_norm(diff, 0.0)


def action(u: Field, v: Field, eps: float, tau: float) -> float:
    t = action_terms(u, v)
    return (
        0.5 * eps**2 * t.A
        + 0.5 * t.B
        + 0.5 * tau * t.C
        + 0.25 * eps**2 * t.D
        + 0.25 * t.E
        - 0.5 * t.F
    )


def action_gradient(u: Field, v: Field, eps: float, tau: float) -> Tuple[Field, Field]:
    """L² 쌍에 대한 기울기 (ε²u'''' - u'' + τu - uv, (-ε²v'' + v - u²)/2)"""
    uu = _real_values(u, "u")
    vv = _real_values(v, "v")
    g = u.grid
    lin_u = as_physical(apply_multiplier(u, lambda xi: eps**2 * xi**4 + xi**2 + tau)).values.real
    lin_v = as_physical(apply_multiplier(v, lambda xi: 1.0 + eps**2 * xi**2)).values.real
    return (
        Field.physical(g, lin_u - uu * vv),
        Field.physical(g, 0.5 * (lin_v - uu * uu)),
    )


# ============================================================
# 항등식
# ============================================================

def pohozaev_terms(u: Field, v: Field, eps: float, tau: float, d: int) -> np.ndarray:
    t = action_terms(u, v)
    return np.array(
        [
            -2.0 * eps**2 * (d - 4) * t.A,
            -2.0 * (d - 2) * t.B,
            -2.0 * tau * d * t.C,
            -(eps**2) * (d - 2) * t.D,
            -d * t.E,
            2.0 * d * t.F,
        ]
    )


def nehari_terms(u: Field, v: Field, eps: float, tau: float) -> np.ndarray:
    t = action_terms(u, v)
    return np.array(
        [
            eps**2 * t.A,
            t.B,
            tau * t.C,
            0.5 * eps**2 * t.D,
            0.5 * t.E,
            -1.5 * t.F,
        ]
    )


def pohozaev_residual(u: Field, v: Field, eps: float, tau: float, d: int = 1) -> float:
    return float(np.sum(pohozaev_terms(u, v, eps, tau, d)))


def nehari_residual(u: Field, v: Field, eps: float, tau: float) -> float:
    return float(np.sum(nehari_terms(u, v, eps, tau)))


def relative_residual(terms: np.ndarray) -> float:
    """|Σ항| / Σ|항|, 모든 항이 0이면 0"""
    scale = float(np.sum(np.abs(terms)))
    return abs(float(np.sum(terms))) / scale if scale > 0 else 0.0


def combined_identity(u: Field, v: Field, eps: float, tau: float, d: int = 1) -> float:
    """
    (8 - 2d/3)ε²A + (4 - 2d/3)B + (2 - d/3)ε²D  -  (d/3)(2τC + E)

    좌변 - 우변. 대수적으로 Pohozaev + (4d/3)·Nehari 와 같다.
    """
    t = action_terms(u, v)
    c_a, c_b, c_d = nonexistence_coefficients(d)
    left = c_a * eps**2 * t.A + c_b * t.B + c_d * eps**2 * t.D
    right = (d / 3.0) * (2.0 * tau * t.C + t.E)
    return left - right


# ============================================================
# 비존재 산술
# ============================================================

def nonexistence_coefficients(d: int) -> Tuple[float, float, float]:
    return 8.0 - 2.0 * d / 3.0, 4.0 - 2.0 * d / 3.0, 2.0 - d / 3.0


@dataclass(frozen=True)
class NonexistenceReport:
    d: int
    eps_zero: bool
    coefficients: Tuple[float, float, float]
    forced: bool
    trilinear_margin: float

    @property
    def trilinear_applies(self) -> bool:
        return self.trilinear_margin >= 0

    def as_dict(self) -> Dict[str, object]:
        c_a, c_b, c_d = self.coefficients
        return {
            "d": self.d,
            "eps_zero": self.eps_zero,
            "coef_laplacian": c_a,
            "coef_gradient": c_b,
            "coef_v_gradient": c_d,
            "triviality_forced": self.forced,
            "trilinear_margin": self.trilinear_margin,
            "trilinear_applies": self.trilinear_applies,
        }


def nonexistence_report(d: int, eps_zero: bool = False) -> NonexistenceReport:
    """
    결합 항등식의 좌변 계수가 모두 ≤ 0 이면 우변(> 0)과 모순 → (0,0)만 가능
    ε = 0 이면 ε² 항이 사라지므로 나머지 두 계수만 본다.
    """
    if d < 1:
        raise UsageError("INVALID_DIMENSION", f"d는 1 이상이어야 합니다: d={d}")
    coeffs = nonexistence_coefficients(d)
    relevant = coeffs[1:] if eps_zero else coeffs
    forced = all(c <= 0 for c in relevant)
    report = NonexistenceReport(d, eps_zero, coeffs, forced, 5.0 - d / 2.0)
    logger.info(f"[INFO] nonexistence d={d} eps_zero={eps_zero} coefficients={coeffs} forced={forced}")
    return report


# ============================================================
# 3선형 추정
# ============================================================

def trilinear_ratio(u: Field, v: Field, w: Field) -> float:
    """‖uvw‖_{L¹} / (‖u‖_{H²} ‖v‖_{H²} ‖w‖_{H¹})"""
    g = u.grid
    prod = as_physical(u).values * as_physical(v).values * as_physical(w).values
    denom = sobolev_norm(u, 2.0) * sobolev_norm(v, 2.0) * sobolev_norm(w, 1.0)
    return integrate(np.abs(prod), g) / denom
