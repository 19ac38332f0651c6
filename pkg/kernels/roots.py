# kernels/roots.py
"""
3차 다항식 P(ξ₂) = 4ε²ξ₂³ + |ξ₁|^{2/3}(ε²ξ₁²+2) ξ₂ + |(1+ε²(ξ₁-ξ)²)(ξ₁-ξ)² + τ|
의 유일한 음의 근 r(ξ₁)과 그 양측 상계/하계 감사

P' > 0 (두 비상수 계수가 양수) 이므로 음의 근은 정확히 하나다.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List, Sequence

import numpy as np
import pandas as pd
from scipy.optimize import brentq

from common.errors import DomainError
from common.logging import get_logger
from engine.spectral import DispersionSymbol

logger = get_logger(__name__)

DEGENERATE_XI1 = 1e-12
AUDIT_COLUMNS = ["case", "xi", "tau", "xi1_or_na", "value", "bound", "ratio"]


def cubic_coefficients(xi: float, tau: float, eps: float, xi1: float) -> tuple[float, float, float]:
    """(a, b, c): P(x) = a x³ + b x + c"""
    y = xi1 - xi
    a = 4.0 * eps**2
    b = abs(xi1) ** (2.0 / 3.0) * (eps**2 * xi1**2 + 2.0)
    c = abs((1.0 + eps**2 * y**2) * y**2 + tau)
    return a, b, c


def cubic_root(a: float, b: float, c: float) -> float:
    """a x³ + b x + c = 0 (a > 0, b ≥ 0, c ≥ 0) 의 실근 (≤ 0)"""
    if c == 0:
        return 0.0
    if b < DEGENERATE_XI1 * a:
        return -((c / a) ** (1.0 / 3.0))
    scale = 2.0 * math.sqrt(b / (3.0 * a))
    arg = 1.5 * c / b * math.sqrt(3.0 * a / b)
    return -scale * math.sinh(math.asinh(arg) / 3.0)


@dataclass(frozen=True)
class RootProblem:
    xi: float
    tau: float
    eps: float
    xi1: float

    def __post_init__(self):
        if not (self.eps > 0):
            raise DomainError("ROOT_WINDOW", f"ε > 0 이어야 합니다: eps={self.eps}")
        if not (self.xi > 1):
            raise DomainError("ROOT_WINDOW", f"ξ > 1 이어야 합니다: xi={self.xi}")
        d = self.d_eps
        if not (0.5 * d < self.tau < 2.0 * d):
            raise DomainError(
                "ROOT_WINDOW",
                f"τ ∈ (d_ε(ξ)/2, 2d_ε(ξ)) 이어야 합니다: tau={self.tau} d={d}",
            )
        if not math.isfinite(self.xi1):
            raise DomainError("ROOT_WINDOW", f"ξ₁이 유한하지 않습니다: {self.xi1}")

    @property
    def d_eps(self) -> float:
        return float(DispersionSymbol(self.eps)(self.xi))

    @property
    def coefficients(self) -> tuple[float, float, float]:
        return cubic_coefficients(self.xi, self.tau, self.eps, self.xi1)

    @property
    def constant_term(self) -> float:
        return self.coefficients[2]

    def with_xi1(self, xi1: float) -> "RootProblem":
        return RootProblem(self.xi, self.tau, self.eps, xi1)


def eval_P(p: RootProblem, xi2):
    a, b, c = p.coefficients
    return ((a * xi2) * xi2 + b) * xi2 + c


def eval_dP(p: RootProblem, xi2):
    a, b, _ = p.coefficients
    return 3.0 * a * xi2 * xi2 + b


def root_r(p: RootProblem) -> float:
    """
    sinh 표현:
        r = -(|ξ₁|^{1/3}(ε²ξ₁²+2)^{1/2} / (√3 ε)) · sinh( (1/3) asinh( 3√3 ε c / (|ξ₁|(ε²ξ₁²+2)^{3/2}) ) )
    |ξ₁| < 1e-12 이면 r = -(c/(4ε²))^{1/3}
    """
    a, b, c = p.coefficients
    if abs(p.xi1) < DEGENERATE_XI1:
        return -((c / a) ** (1.0 / 3.0))
    return cubic_root(a, b, c)


def root_bisection(p: RootProblem) -> float:
    """독립 오라클: (-10|r|, 0) 에서 부호 변화 구간 brentq"""
    a, _, c = p.coefficients
    guess = (c / a) ** (1.0 / 3.0)
    lo = -10.0 * max(guess, 1e-300)
    return float(brentq(lambda x: eval_P(p, x), lo, 0.0, xtol=1e-300, rtol=8.9e-16, maxiter=500))


def sign_changes(p: RootProblem, grid: Sequence[float]) -> int:
    vals = np.sign(eval_P(p, np.asarray(grid, dtype=float)))
    vals = vals[vals != 0]
    return int(np.count_nonzero(np.diff(vals)))


def alpha_ratio(xi: float, xi1: float, tau: float, eps: float) -> float:
    """α₁/α₂, 두 asinh 인자의 비 (ξ₁ → -ξ₁ 대칭 비교)"""
    plus = (1.0 + eps**2 * (xi1 + xi) ** 2) * (xi1 + xi) ** 2 + tau
    minus = (1.0 + eps**2 * (xi1 - xi) ** 2) * (xi1 - xi) ** 2 + tau
    return plus / minus


# ============================================================
# 감사
# ============================================================

def audit_xi1_grid(xi: float, points: int = 120) -> np.ndarray:
    """(-10³ξ, 10³ξ) 로그 간격 + 구조점 {0, ±ξ/2, ±ξ, ±2ξ}"""
    mags = np.logspace(math.log10(xi) - 6.0, math.log10(xi) + 3.0, points, endpoint=False)
    structural = np.array([0.5 * xi, xi, 2.0 * xi])
    pos = np.concatenate([mags, structural])
    return np.unique(np.concatenate([-pos, [0.0], pos]))


def window_taus(xi: float, eps: float, margin: float = 1e-9) -> List[float]:
    d = float(DispersionSymbol(eps)(xi))
    return [0.5 * d * (1.0 + margin), d, 2.0 * d * (1.0 - margin)]


def _rows(case: str, xi: float, tau: float, xi1s: Iterable[float], values, bounds) -> List[dict]:
    return [
        {"case": case, "xi": xi, "tau": tau, "xi1_or_na": x1, "value": v, "bound": bd, "ratio": v / bd}
        for x1, v, bd in zip(xi1s, values, bounds)
    ]


@dataclass
class BoundAudit:
    table: pd.DataFrame
    summary: pd.DataFrame
    checks: dict

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def lower_bound_audit(eps: float, xi_grid: Sequence[float]) -> BoundAudit:
    """min_{ξ₁} |r(ξ₁)| / ξ^{4/3} (ξ, τ 별)"""
    rows: List[dict] = []
    tau_monotone = True
    reflection = True
    for xi in xi_grid:
        xi1s = audit_xi1_grid(xi)
        per_tau = []
        for tau in window_taus(xi, eps):
            base = RootProblem(xi, tau, eps, 0.0)
            radii = np.array([abs(root_r(base.with_xi1(x1))) for x1 in xi1s])
            per_tau.append(radii)
            rows += _rows("lower_bound", xi, tau, xi1s, radii, np.full(radii.shape, xi ** (4.0 / 3.0)))
            pos = xi1s > 0
            mirrored = np.array([abs(root_r(base.with_xi1(-x1))) for x1 in xi1s[pos]])
            reflection &= bool(np.all(mirrored >= radii[pos] * (1.0 - 1e-12)))
        tau_monotone &= bool(np.all(per_tau[-1] >= per_tau[0] * (1.0 - 1e-12)))

    table = pd.DataFrame(rows, columns=AUDIT_COLUMNS)
    summary = table.groupby("xi", as_index=False)["ratio"].min().rename(columns={"ratio": "min_ratio"})
    mins = summary["min_ratio"].to_numpy()
    checks = {
        "positive": bool(np.all(mins > 0)),
        "stable_2x": bool(mins.max() <= 2.0 * mins.min()),
        "tau_monotone": tau_monotone,
        "reflection": reflection,
    }
    logger.info(f"[AUDIT] lower bound eps={eps:g} minima={mins.round(6).tolist()} checks={checks}")
    return BoundAudit(table, summary, checks)


def upper_branch_bound(xi: float, xi1: float, eps: float) -> float:
    if abs(xi1) <= 0.5 * xi:
        return float(DispersionSymbol(eps)(xi)) ** (1.0 / 3.0)
    return abs(xi1) ** (1.0 / 3.0) * math.sqrt(1.0 + (eps * xi1) ** 2)


def upper_bound_audit(eps: float, xi_grid: Sequence[float]) -> BoundAudit:
    """|r| / (분기별 상계) 최대값, (0, ξ) 위 |r| 단조감소, ratio-91"""
    rows: List[dict] = []
    decreasing = True
    ratio_91 = True
    for xi in xi_grid:
        xi1s = audit_xi1_grid(xi)
        for tau in window_taus(xi, eps):
            base = RootProblem(xi, tau, eps, 0.0)
            radii = np.array([abs(root_r(base.with_xi1(x1))) for x1 in xi1s])
            bounds = np.array([upper_branch_bound(xi, x1, eps) for x1 in xi1s])
            cases = ["upper_inner" if abs(x1) <= 0.5 * xi else "upper_outer" for x1 in xi1s]
            for case, x1, v, bd in zip(cases, xi1s, radii, bounds):
                rows += _rows(case, xi, tau, [x1], [v], [bd])

            inside = (xi1s > 0) & (xi1s < xi)
            decreasing &= bool(np.all(np.diff(radii[inside]) <= 1e-12 * radii[inside][:-1]))

            half = xi1s[(xi1s >= 0) & (xi1s < 0.5 * xi)]
            alphas = np.array([alpha_ratio(xi, x1, tau, eps) for x1 in half])
            rows += _rows("ratio_91", xi, tau, half, alphas, np.full(alphas.shape, 91.0))
            ratio_91 &= bool(np.all(alphas <= 91.0))

    table = pd.DataFrame(rows, columns=AUDIT_COLUMNS)
    branch = table[table["case"].isin(["upper_inner", "upper_outer"])]
    summary = branch.groupby(["case", "xi"], as_index=False)["ratio"].max().rename(columns={"ratio": "max_ratio"})
    checks = {
        "finite": bool(np.all(np.isfinite(summary["max_ratio"]))),
        "decreasing_on_0_xi": decreasing,
        "ratio_91": ratio_91,
    }
    logger.info(f"[AUDIT] upper bound eps={eps:g} checks={checks}")
    return BoundAudit(table, summary, checks)


def random_root_problems(rng: np.random.Generator, count: int, eps: float | None = None) -> List[RootProblem]:
    """유효 창 안의 무작위 문제 (ξ ∈ (1, 10³) 로그균등, ξ₁ ∈ ±(10⁻⁶ξ, 10³ξ))"""
    problems = []
    for _ in range(count):
        e = eps if eps is not None else 10.0 ** rng.uniform(-2, 1)
        xi = 10.0 ** rng.uniform(0.01, 3.0)
        d = float(DispersionSymbol(e)(xi))
        tau = d * 2.0 ** rng.uniform(-0.999, 0.999)
        xi1 = rng.choice([-1.0, 1.0]) * xi * 10.0 ** rng.uniform(-6.0, 3.0)
        problems.append(RootProblem(xi, tau, e, xi1))
    return problems


def root_formula_audit(problems: Sequence[RootProblem]) -> pd.DataFrame:
    """잔차 |P(r)|/(1+c) 와 brentq 오라클 상대 차이"""
    records = []
    for p in problems:
        r = root_r(p)
        oracle = root_bisection(p)
        c = p.constant_term
        records.append(
            {
                "xi": p.xi,
                "tau": p.tau,
                "eps": p.eps,
                "xi1": p.xi1,
                "r": r,
                "residual": abs(eval_P(p, r)) / (1.0 + c),
                "oracle_rel": abs(r - oracle) / abs(oracle),
            }
        )
    return pd.DataFrame(records)
