# engine/spectral.py
"""
주기 격자 위의 의사스펙트럴 연산 모듈
- Grid: 균일 1차원 주기 격자와 쌍대 주파수 격자
- Field: 격자 위의 복소수 값 (Physical / Frequency 태그)
- 변환 규약: f̂(ξ_k) = dx · Σ_j f(x_j) e^{-i ξ_k x_j},  x_j = -L/2 + j·dx
  → f̂ = dx · (-1)^k · FFT(f),  f = (1/dx) · IFFT((-1)^k · f̂)
- Parseval: ‖f‖² = dx Σ|f_j|² = (1/L) Σ|f̂_k|²

모든 함수는 입력을 변경하지 않는 순수 함수이며, Field 값 배열은 읽기 전용이다.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Union

import numpy as np

from common.errors import ConfigError, NumericalError, UsageError

Multiplier = Union[Callable[[np.ndarray], np.ndarray], np.ndarray]


class Space(str, Enum):
    PHYSICAL = "physical"
    FREQUENCY = "frequency"


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Grid:
    """
    균일 주기 격자

    freqs는 FFT 고유 순서(0, 1, ..., n/2-1, -n/2, ..., -1)로 저장된다.
    부호 있는 인덱스 k는 signed_index()로 얻으며 freqs == 2πk/L 이다.
    """

    n: int
    length: float
    dx: float = field(init=False)
    x: np.ndarray = field(init=False, repr=False, compare=False)
    freqs: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        dx = self.length / self.n
        object.__setattr__(self, "dx", dx)
        object.__setattr__(self, "x", _readonly(-0.5 * self.length + dx * np.arange(self.n)))
        k = np.fft.fftfreq(self.n, d=1.0 / self.n)
        object.__setattr__(self, "freqs", _readonly(2.0 * np.pi * k / self.length))

    def signed_index(self) -> np.ndarray:
        """고유 순서 위치 m → 부호 있는 주파수 인덱스 k ∈ [-n/2, n/2)"""
        return np.rint(np.fft.fftfreq(self.n, d=1.0 / self.n)).astype(np.int64)

    @property
    def xi_max(self) -> float:
        return float(np.max(np.abs(self.freqs)))

    def _parity(self) -> np.ndarray:
        # (-1)^k, n이 짝수이므로 고유 인덱스 m과 부호 인덱스 k의 홀짝이 같다
        return np.where(np.arange(self.n) % 2 == 0, 1.0, -1.0)


@dataclass(frozen=True)
class Field:
    grid: Grid
    values: np.ndarray = field(repr=False, compare=False)
    space: Space = Space.PHYSICAL

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.complex128, copy=True).reshape(-1)
        if vals.shape[0] != self.grid.n:
            raise ConfigError(
                "FIELD_SIZE_MISMATCH",
                f"값 개수가 격자 크기와 다릅니다: expected={self.grid.n} got={vals.shape[0]}",
            )
        object.__setattr__(self, "values", _readonly(vals))

    @classmethod
    def physical(cls, grid: Grid, values) -> "Field":
        return cls(grid, values, Space.PHYSICAL)

    @classmethod
    def frequency(cls, grid: Grid, values) -> "Field":
        return cls(grid, values, Space.FREQUENCY)

    @classmethod
    def zeros(cls, grid: Grid) -> "Field":
        return cls(grid, np.zeros(grid.n), Space.PHYSICAL)

    def is_real(self, tol: float = 0.0) -> bool:
        return self.space is Space.PHYSICAL and bool(np.all(np.abs(self.values.imag) <= tol))

    @property
    def real(self) -> np.ndarray:
        return as_physical(self).values.real.copy()


@dataclass(frozen=True)
class DispersionSymbol:
    """d_ε(ξ) = ξ² + ε²ξ⁴ (짝함수, 음이 아니며 |ξ|에 대해 순증가)"""

    eps: float

    def __post_init__(self):
        if not np.isfinite(self.eps) or self.eps < 0:
            raise ConfigError("INVALID_EPS", f"ε는 0 이상이어야 합니다: eps={self.eps}")

    def __call__(self, xi):
        xi2 = np.square(xi)
        return xi2 + self.eps**2 * xi2 * xi2


def make_grid(n: int, length: float) -> Grid:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise ConfigError("INVALID_GRID", f"n은 정수여야 합니다: n={n!r}")
    n = int(n)
    if n < 8 or (n & (n - 1)) != 0:
        raise ConfigError("INVALID_GRID", f"n은 8 이상의 2의 거듭제곱이어야 합니다: n={n}")
    if not np.isfinite(length) or length <= 0:
        raise ConfigError("INVALID_GRID", f"L은 양수여야 합니다: L={length}")
    return Grid(n, float(length))


# ============================================================
# 변환
# ============================================================

def forward_transform(f: Field) -> Field:
    if f.space is not Space.PHYSICAL:
        raise UsageError("WRONG_SPACE", "forward_transform은 Physical Field만 받습니다")
    g = f.grid
    return Field.frequency(g, g.dx * g._parity() * np.fft.fft(f.values))


def inverse_transform(f: Field) -> Field:
    if f.space is not Space.FREQUENCY:
        raise UsageError("WRONG_SPACE", "inverse_transform은 Frequency Field만 받습니다")
    g = f.grid
    return Field.physical(g, np.fft.ifft(g._parity() * f.values) / g.dx)


def as_physical(f: Field) -> Field:
    return f if f.space is Space.PHYSICAL else inverse_transform(f)


def as_frequency(f: Field) -> Field:
    return f if f.space is Space.FREQUENCY else forward_transform(f)


def hat(f: Field) -> np.ndarray:
    """주파수 값 배열 (고유 순서)"""
    return as_frequency(f).values


# ============================================================
# 푸리에 승수
# ============================================================

def apply_multiplier(f: Field, m: Multiplier) -> Field:
    """
    주파수 공간에서 m(ξ_k)를 곱한다. 출력 공간 태그는 입력과 같다.
    m은 ξ 배열을 받는 호출 가능 객체이거나 고유 순서의 배열이다.
    """
    g = f.grid
    mv = np.asarray(m(g.freqs) if callable(m) else m, dtype=np.complex128)
    mv = np.broadcast_to(mv, (g.n,))
    if not np.all(np.isfinite(mv)):
        bad = int(np.flatnonzero(~np.isfinite(mv))[0])
        raise NumericalError(
            "NON_FINITE_MULTIPLIER",
            f"승수 값이 유한하지 않습니다: xi={g.freqs[bad]}",
            {"index": bad},
        )
    out = Field.frequency(g, hat(f) * mv)
    return out if f.space is Space.FREQUENCY else inverse_transform(out)


def j_multiplier(eps: float) -> Callable[[np.ndarray], np.ndarray]:
    return lambda xi: 1.0 / (1.0 + eps**2 * np.square(xi))


def apply_J(f: Field, eps: float) -> Field:
    """J_ε = (I - ε²∂ₓ²)^{-1}; ε = 0이면 항등"""
    if eps == 0:
        return f
    out = apply_multiplier(f, j_multiplier(eps))
    if f.is_real():
        # 실수 짝 승수이므로 실수 입력의 출력도 실수
        out = Field.physical(f.grid, out.values.real)
    return out


def spectral_derivative(f: Field, order: int = 1) -> Field:
    g = f.grid
    mult = (1j * g.freqs) ** order
    if order % 2 == 1:
        # 나이퀴스트 모드는 짝이 없으므로 홀수 차 미분에서 제거
        mult = mult.copy()
        mult[g.n // 2] = 0.0
    out = apply_multiplier(f, mult)
    if f.is_real():
        out = Field.physical(g, out.values.real)
    return out


def linear_propagate(f: Field, t: float, eps: float) -> Field:
    """U_ε(t) = exp(-i t d_ε(ξ))"""
    if t == 0:
        return f
    d = DispersionSymbol(eps)
    return apply_multiplier(f, lambda xi: np.exp(-1j * t * d(xi)))


def dealias_mask(grid: Grid) -> np.ndarray:
    """2/3 규칙 마스크: |k| ≤ n/3 만 유지"""
    return (np.abs(grid.signed_index()) <= grid.n // 3).astype(np.float64)


# ============================================================
# 노름
# ============================================================

def japanese_bracket(xi):
    return np.sqrt(1.0 + np.square(xi))


def sobolev_norm(f: Field, s: float) -> float:
    """‖f‖²_{H^s} = (1/L) Σ ⟨ξ_k⟩^{2s} |f̂_k|²  (음의 s 허용)"""
    g = f.grid
    w = (1.0 + np.square(g.freqs)) ** s
    return float(np.sqrt(np.sum(w * np.abs(hat(f)) ** 2) / g.length))


def l2_norm(f: Field) -> float:
    """물리 공간 이산 L² 노름 sqrt(dx Σ|f_j|²)"""
    p = as_physical(f)
    return float(np.sqrt(p.grid.dx * np.sum(np.abs(p.values) ** 2)))


def l2_inner(f: Field, g: Field) -> float:
    """이산 L² 쌍 Re(dx Σ conj(f_j) g_j)"""
    a, b = as_physical(f), as_physical(g)
    return float(np.real(a.grid.dx * np.vdot(a.values, b.values)))


def integrate(values: np.ndarray, grid: Grid) -> float:
    """주기 격자 위 사다리꼴 적분 (스펙트럴 정확도)"""
    return float(np.real(grid.dx * np.sum(values)))
