# grader/checker.py
"""
실험 결과 판정
측정값을 임계값과 비교하고, 위반 시 InvariantViolation(error_type, message)을 던진다.
CLI는 위반을 종료 코드 1로 매핑한다.
"""
from __future__ import annotations

import math

import numpy as np
import pandas as pd

from common.errors import QmnlsError


class InvariantViolation(QmnlsError):
    """측정된 불변량이 허용 범위를 벗어남"""


def _require(ok: bool, error_type: str, message: str, **context) -> None:
    if not ok:
        raise InvariantViolation(error_type, message, context)


# ===== 전개 =====

def check_mass_drift(relative_drift: float, tol: float = 1e-10) -> None:
    _require(
        relative_drift <= tol,
        "MASS_DRIFT",
        f"질량 상대 변화가 허용치를 넘었습니다: drift={relative_drift:.3e} tol={tol:.1e}",
        drift=relative_drift,
    )


def check_energy_drift(relative_drift: float, tol: float = 1e-5) -> None:
    _require(
        relative_drift <= tol,
        "ENERGY_DRIFT",
        f"에너지 상대 변화가 허용치를 넘었습니다: drift={relative_drift:.3e} tol={tol:.1e}",
        drift=relative_drift,
    )


def check_sweep(result) -> None:
    failed = result.failed
    _require(
        not failed,
        "SWEEP_MEMBER_FAILED",
        f"스윕 구성원이 수치적으로 실패했습니다: eps={failed}",
        failed=failed,
    )


def check_growth(result) -> None:
    _require(
        result.within_bound,
        "GROWTH_EXPONENT",
        f"H^{result.s:g} 성장 기울기가 상계를 넘었습니다: slope={result.slope:.4f} "
        f"exponent={result.exponent:g} margin={result.margin:g}",
        slope=result.slope,
    )


# ===== 근 공식 / 커널 =====

def check_root_formula(frame: pd.DataFrame, residual_tol: float = 1e-8, oracle_tol: float = 1e-10) -> None:
    worst_res = float(frame["residual"].max())
    worst_oracle = float(frame["oracle_rel"].max())
    _require(
        worst_res <= residual_tol,
        "ROOT_RESIDUAL",
        f"|P(r)|/(1+c) 최댓값이 허용치를 넘었습니다: {worst_res:.3e} > {residual_tol:.1e}",
        worst=worst_res,
    )
    _require(
        worst_oracle <= oracle_tol,
        "ROOT_ORACLE",
        f"이분법 오라클과의 상대 차이가 허용치를 넘었습니다: {worst_oracle:.3e} > {oracle_tol:.1e}",
        worst=worst_oracle,
    )


def check_bound_audit(audit, name: str) -> None:
    failed = [key for key, ok in audit.checks.items() if not ok]
    code = "RATIO_91" if failed == ["ratio_91"] else "BOUND_AUDIT"
    _require(not failed, code, f"{name} 감사 실패 항목: {failed}", failed=failed)


def check_tail_audit(table: pd.DataFrame, rel_tol: float = 1e-8) -> None:
    worst = float(np.max(np.abs(table["ratio"] - 1.0)))
    _require(
        worst <= rel_tol,
        "TAIL_CLOSED_FORM",
        f"꼬리 적분이 닫힌 형태와 다릅니다: max rel={worst:.3e}",
        worst=worst,
    )
    violated = table[table["value"] > table["stated_bound"]]
    _require(
        violated.empty,
        "TAIL_STATED_BOUND",
        f"꼬리 적분이 (1/(1-a) + 1/a)A^(-a) 를 넘었습니다: rows={violated.index.tolist()}",
    )


def check_phi_audit(table: pd.DataFrame) -> None:
    ratios = table["ratio"].to_numpy()
    _require(
        bool(np.all(np.isfinite(ratios)) and np.all(ratios > 0)),
        "PHI_KERNEL",
        f"φ 커널 비율이 유한한 양수가 아닙니다: {ratios.tolist()}",
    )


def check_smoothing(audit, gain_tol: float = 0.05) -> None:
    gain = audit.final_decade_gain()
    _require(
        math.isfinite(audit.worst) and gain < gain_tol,
        "SMOOTHING_UNSTABLE",
        f"평활 상한 running max가 안정화되지 않았습니다: worst={audit.worst:.6e} final_decade_gain={gain:.3e}",
        gain=gain,
    )


# ===== 솔리톤 =====

def check_soliton(
    result,
    identity_tol: float = 1e-6,
    v_tol: float = 1e-10,
    pde_tol: float = 1e-8,
    gradient_tol: float = 1e-7,
) -> None:
    _require(
        result.residual_pde <= pde_tol,
        "PDE_RESIDUAL",
        f"프로파일 방정식 잔차가 큽니다: {result.residual_pde:.3e} > {pde_tol:.1e}",
    )
    _require(
        result.gradient_residual <= gradient_tol,
        "ACTION_GRADIENT",
        f"작용 기울기 ‖∂_u I‖/‖Q‖ 가 큽니다: {result.gradient_residual:.3e} > {gradient_tol:.1e}",
    )
    _require(
        result.gamma_monotone(),
        "GAMMA_NOT_MONOTONE",
        "마지막 반복들에서 안정화 인자 γ 가 1로 단조 수렴하지 않았습니다",
    )
    _require(
        result.positive,
        "SOLITON_POSITIVITY",
        f"Q가 양수가 아닙니다: min={result.min_value:.3e}",
    )
    _require(
        result.residual_pohozaev <= identity_tol,
        "POHOZAEV_RESIDUAL",
        f"Pohozaev 상대 잔차가 큽니다: {result.residual_pohozaev:.3e}",
    )
    _require(
        result.residual_nehari <= identity_tol,
        "NEHARI_RESIDUAL",
        f"Nehari 상대 잔차가 큽니다: {result.residual_nehari:.3e}",
    )
    _require(
        result.residual_v <= v_tol,
        "HELMHOLTZ_RESIDUAL",
        f"v = J_ε(Q²) 잔차가 큽니다: {result.residual_v:.3e}",
    )


# ===== 산출물 비교 =====

def compare_frames(actual: pd.DataFrame, expected: pd.DataFrame, float_tol: float = 0.0) -> None:
    """회귀 비교. float_tol = 0 이면 비트 단위 일치 (NaN끼리는 같음)"""
    if list(actual.columns) != list(expected.columns):
        raise InvariantViolation(
            "SCHEMA_MISMATCH",
            f"컬럼 불일치 expected={list(expected.columns)} got={list(actual.columns)}",
        )
    if len(actual) != len(expected):
        raise InvariantViolation(
            "ROW_COUNT_MISMATCH",
            f"행 수 불일치 expected={len(expected)} got={len(actual)}",
        )
    for col in actual.columns:
        a, e = actual[col], expected[col]
        if pd.api.types.is_float_dtype(a) and pd.api.types.is_float_dtype(e):
            av, ev = a.to_numpy(), e.to_numpy()
            both_nan = np.isnan(av) & np.isnan(ev)
            bad = ~both_nan & ~(np.abs(av - ev) <= float_tol)
        else:
            bad = (a != e).to_numpy()
        if np.any(bad):
            i = int(np.flatnonzero(bad)[0])
            raise InvariantViolation(
                "VALUE_MISMATCH",
                f"{i + 1}번째 row, {col} 값 불일치 expected={e.iloc[i]} got={a.iloc[i]}",
            )
