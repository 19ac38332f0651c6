# engine/quadrature.py
"""
QUADPACK(scipy.integrate.quad) 래퍼
- IntegrationWarning을 잡아 달성 오차와 함께 NumericalError로 올린다
- 진동 적분: 위상 π 배수 분할 + QAWO/QAWF(weight='cos')
"""
from __future__ import annotations

import math
import warnings
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from common.errors import NumericalError

DEFAULT_LIMIT = 500


def checked_quad(
    func: Callable[[float], float],
    a: float,
    b: float,
    *,
    epsabs: float = 1e-13,
    epsrel: float = 1e-11,
    tol: float | None = None,
    **kwargs,
) -> tuple[float, float]:
    """
    quad 호출 후 (value, abserr) 반환.
    경고가 발생했고 abserr가 tol(기본: max(epsabs, epsrel·|value|)·1e3)을 넘으면 QUADRATURE_FAILED.
    """
    kwargs.setdefault("limit", DEFAULT_LIMIT)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IntegrationWarning)
        value, err = quad(func, a, b, epsabs=epsabs, epsrel=epsrel, **kwargs)[:2]
    if not math.isfinite(value):
        raise NumericalError("QUADRATURE_FAILED", f"적분값이 유한하지 않습니다 [{a}, {b}]", {"abserr": err})
    limit = tol if tol is not None else 1e3 * max(epsabs, epsrel * abs(value))
    if caught and err > limit:
        raise NumericalError(
            "QUADRATURE_FAILED",
            f"구적 허용치 미달 [{a}, {b}]: abserr={err:.3e} > {limit:.3e}",
            {"abserr": err, "value": value, "warning": str(caught[-1].message)},
        )
    return float(value), float(err)


def quad_pieces(func: Callable[[float], float], nodes: Sequence[float], **kwargs) -> tuple[float, float]:
    """연속한 노드 구간별 적분 합"""
    total, err = 0.0, 0.0
    for lo, hi in zip(nodes[:-1], nodes[1:]):
        if hi <= lo:
            continue
        v, e = checked_quad(func, lo, hi, **kwargs)
        total += v
        err += e
    return total, err


def quartic_cos_integral(
    density: Callable[[float], float],
    a: float,
    b: float,
    c: float,
    *,
    phase_pieces: int = 50,
    xi_cut: float = math.inf,
) -> tuple[float, float]:
    """
    ∫_a^b cos(c ξ⁴) density(ξ) dξ  (0 ≤ a < b ≤ ∞, c ≥ 0)

    - 원점 근처 [a, ξ_s]: ξ 변수, 위상 cξ⁴ = kπ 지점에서 분할 (ξ_s = (phase_pieces·π/c)^{1/4})
    - 나머지 [ξ_s, b]: w = ξ⁴ 치환 후 weight='cos' (b = ∞ 이면 QAWF)
    """
    if c == 0:
        return quad_pieces(density, [a, min(b, xi_cut)])

    xi_s = min(b, xi_cut, max(a, (phase_pieces * math.pi / c) ** 0.25))
    k_lo = math.ceil(c * a**4 / math.pi)
    k_hi = math.floor(c * xi_s**4 / math.pi)
    breaks = [(k * math.pi / c) ** 0.25 for k in range(max(k_lo, 1), k_hi + 1)]
    nodes = [a] + [p for p in breaks if a < p < xi_s] + [xi_s]
    head, head_err = quad_pieces(lambda x: math.cos(c * x**4) * density(x), nodes)
    if xi_s >= b:
        return head, head_err

    def in_w(w: float) -> float:
        return 0.25 * density(w**0.25) * w ** (-0.75)

    w_lo = xi_s**4
    w_hi = np.inf if math.isinf(b) else b**4
    tail, tail_err = checked_quad(in_w, w_lo, w_hi, weight="cos", wvar=c, epsabs=1e-14)
    return head + tail, head_err + tail_err
