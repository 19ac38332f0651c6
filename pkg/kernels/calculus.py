# kernels/calculus.py
"""
미적분 커널 감사

- phi_kernel: ∫ dτ / (⟨τ-a₁⟩^β ⟨τ-a₂⟩^γ)  ≲  ⟨a₁-a₂⟩^{-γ} φ_β(a₁-a₂)
    φ_β(a) = 1 (β > 1), log(1+⟨a⟩) (β = 1), ⟨a⟩^{1-β} (β < 1)
- tail_integral: ∫_A^∞ dz / (z (z-A)^a) = A^{-a} π / sin(πa),  0 < a < 1
"""
from __future__ import annotations

import math
from typing import List, Sequence

import numpy as np
import pandas as pd
from scipy.special import gamma as gamma_fn

from common.errors import DomainError
from common.logging import get_logger
from engine.quadrature import checked_quad
from kernels.roots import AUDIT_COLUMNS

logger = get_logger(__name__)


def _bracket(x: float) -> float:
    return math.sqrt(1.0 + x * x)


def _check_phi_params(beta: float, gamma: float) -> None:
    if not (beta >= gamma >= 0) or beta + gamma <= 1:
        raise DomainError(
            "DIVERGENT_KERNEL",
            f"β ≥ γ ≥ 0, β + γ > 1 이어야 합니다: beta={beta} gamma={gamma}",
        )


def phi_beta(beta: float, a: float) -> float:
    br = _bracket(a)
    if beta > 1:
        return 1.0
    if beta == 1:
        return math.log(1.0 + br)
    return br ** (1.0 - beta)


def phi_kernel_bound(beta: float, gamma: float, a: float) -> float:
    return _bracket(a) ** (-gamma) * phi_beta(beta, a)


def phi_kernel_integral(beta: float, gamma: float, a1: float, a2: float) -> float:
    """평행이동으로 a = a₁ - a₂ 만 남긴 뒤 {0, a}에서 분할해 적분"""
    _check_phi_params(beta, gamma)
    a = a1 - a2

    def integrand(t: float) -> float:
        return _bracket(t - a) ** (-beta) * _bracket(t) ** (-gamma)

    lo, hi = min(0.0, a), max(0.0, a)
    total = checked_quad(integrand, -np.inf, lo, epsabs=1e-12, epsrel=1e-9, tol=1e-6)[0]
    if hi > lo:
        total += checked_quad(integrand, lo, hi, epsabs=1e-12, epsrel=1e-9, tol=1e-6)[0]
    total += checked_quad(integrand, hi, np.inf, epsabs=1e-12, epsrel=1e-9, tol=1e-6)[0]
    return total


def single_weight_integral(beta: float) -> float:
    """∫ ⟨τ⟩^{-β} dτ = √π Γ((β-1)/2) / Γ(β/2), β > 1"""
    if beta <= 1:
        raise DomainError("DIVERGENT_KERNEL", f"β > 1 이어야 합니다: beta={beta}")
    return math.sqrt(math.pi) * float(gamma_fn((beta - 1.0) / 2.0) / gamma_fn(beta / 2.0))


def phi_kernel_audit(beta: float, gamma: float, offsets: Sequence[float]) -> pd.DataFrame:
    _check_phi_params(beta, gamma)
    regime = "beta_gt_1" if beta > 1 else ("beta_eq_1" if beta == 1 else "beta_lt_1")
    rows: List[dict] = []
    for a in offsets:
        value = phi_kernel_integral(beta, gamma, a, 0.0)
        bound = phi_kernel_bound(beta, gamma, a)
        rows.append(
            {
                "case": f"phi_{regime}(beta={beta:g};gamma={gamma:g})",
                "xi": float("nan"),
                "tau": a,
                "xi1_or_na": "na",
                "value": value,
                "bound": bound,
                "ratio": value / bound,
            }
        )
    table = pd.DataFrame(rows, columns=AUDIT_COLUMNS)
    logger.info(f"[AUDIT] phi kernel beta={beta:g} gamma={gamma:g} ratios={table['ratio'].round(4).tolist()}")
    return table


# ============================================================
# 꼬리 적분
# ============================================================

def tail_closed_form(A: float, a: float) -> float:
    return A ** (-a) * math.pi / math.sin(math.pi * a)


def tail_stated_bound(A: float, a: float) -> float:
    return (1.0 / (1.0 - a) + 1.0 / a) * A ** (-a)


def tail_integral(A: float, a: float) -> float:
    """
    z = A + y 로 옮긴 뒤
    - [0, A]: y^{-a}/(A+y), weight='alg'
    - [A, ∞): y = A/w 치환 → A^{-a} ∫₀¹ w^{a-1}/(1+w) dw, weight='alg'
    """
    if not (A > 0) or not (0 < a < 1):
        raise DomainError("TAIL_WINDOW", f"A > 0, 0 < a < 1 이어야 합니다: A={A} a={a}")
    near = checked_quad(lambda y: 1.0 / (A + y), 0.0, A, weight="alg", wvar=(-a, 0.0), epsabs=0.0, epsrel=1e-13)[0]
    far = checked_quad(lambda w: 1.0 / (1.0 + w), 0.0, 1.0, weight="alg", wvar=(a - 1.0, 0.0), epsabs=0.0, epsrel=1e-13)[0]
    return near + A ** (-a) * far


def tail_integral_audit(A_grid: Sequence[float], a_grid: Sequence[float]) -> pd.DataFrame:
    rows: List[dict] = []
    for a in a_grid:
        for A in A_grid:
            value = tail_integral(A, a)
            exact = tail_closed_form(A, a)
            stated = tail_stated_bound(A, a)
            rows.append(
                {
                    "case": f"tail(a={a:g})",
                    "xi": A,
                    "tau": float("nan"),
                    "xi1_or_na": "na",
                    "value": value,
                    "bound": exact,
                    "ratio": value / exact,
                    "stated_bound": stated,
                }
            )
    table = pd.DataFrame(rows, columns=AUDIT_COLUMNS + ["stated_bound"])
    worst = float(np.max(np.abs(table["ratio"] - 1.0)))
    logger.info(f"[AUDIT] tail integral max |value/closed - 1| = {worst:.3e}")
    return table
