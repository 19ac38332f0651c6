# tests/test_checker.py
"""
grader.checker 단위 테스트
"""
import math
from types import SimpleNamespace

import numpy as np
import pandas as pd
import pytest

from grader.checker import (
    InvariantViolation,
    check_bound_audit,
    check_energy_drift,
    check_growth,
    check_mass_drift,
    check_root_formula,
    check_smoothing,
    check_soliton,
    check_sweep,
    check_tail_audit,
    compare_frames,
)
from kernels.smoothing import SmoothingAudit


class TestCompareFrames:
    """compare_frames 함수 테스트"""

    def test_identical_frames(self):
        """동일한 DataFrame은 오류 없이 통과"""
        df1 = pd.DataFrame({"eps": [0.4, 0.2], "datum_id": ["gaussian", "gaussian"]})
        df2 = pd.DataFrame({"eps": [0.4, 0.2], "datum_id": ["gaussian", "gaussian"]})
        compare_frames(df1, df2)

    def test_column_mismatch(self):
        df1 = pd.DataFrame({"eps": [1.0], "sup_err": [2.0]})
        df2 = pd.DataFrame({"eps": [1.0], "err": [2.0]})
        with pytest.raises(InvariantViolation, match="SCHEMA_MISMATCH"):
            compare_frames(df1, df2)

    def test_row_count_mismatch(self):
        df1 = pd.DataFrame({"t": [0.0, 0.1, 0.2]})
        df2 = pd.DataFrame({"t": [0.0, 0.1]})
        with pytest.raises(InvariantViolation, match="ROW_COUNT_MISMATCH"):
            compare_frames(df1, df2)

    def test_bitwise_by_default(self):
        """기본은 비트 단위 일치"""
        df1 = pd.DataFrame({"mass": [1.0]})
        df2 = pd.DataFrame({"mass": [np.nextafter(1.0, 2.0)]})
        with pytest.raises(InvariantViolation, match="VALUE_MISMATCH"):
            compare_frames(df1, df2)

    def test_float_tolerance(self):
        df1 = pd.DataFrame({"mass": [1.0000000001]})
        df2 = pd.DataFrame({"mass": [1.0000000002]})
        compare_frames(df1, df2, float_tol=1e-9)

    def test_nan_equals_nan(self):
        """실패한 스윕 구성원(NaN)끼리는 일치"""
        df1 = pd.DataFrame({"sup_err": [1e-3, math.nan]})
        df2 = pd.DataFrame({"sup_err": [1e-3, math.nan]})
        compare_frames(df1, df2)


class TestEvolutionChecks:
    """전개/스윕/성장 판정"""

    def test_mass_drift(self):
        check_mass_drift(5e-11)
        with pytest.raises(InvariantViolation, match="MASS_DRIFT") as exc:
            check_mass_drift(2e-10)
        assert exc.value.exit_code == 1

    def test_energy_drift(self):
        check_energy_drift(5e-6)
        with pytest.raises(InvariantViolation, match="ENERGY_DRIFT"):
            check_energy_drift(2e-5)

    def test_sweep_failed_member(self):
        check_sweep(SimpleNamespace(failed=[]))
        with pytest.raises(InvariantViolation, match="SWEEP_MEMBER_FAILED"):
            check_sweep(SimpleNamespace(failed=[0.05]))

    def test_growth_exponent(self):
        ok = SimpleNamespace(within_bound=True, s=2.0, slope=1.0, exponent=4.0, margin=0.05)
        check_growth(ok)
        with pytest.raises(InvariantViolation, match="GROWTH_EXPONENT"):
            check_growth(SimpleNamespace(within_bound=False, s=2.0, slope=4.2, exponent=4.0, margin=0.05))


class TestKernelChecks:
    """감사 판정"""

    def test_root_formula(self):
        good = pd.DataFrame({"residual": [1e-15, 2e-16], "oracle_rel": [1e-15, 0.0]})
        check_root_formula(good)
        with pytest.raises(InvariantViolation, match="ROOT_RESIDUAL"):
            check_root_formula(good.assign(residual=[1e-6, 0.0]))
        with pytest.raises(InvariantViolation, match="ROOT_ORACLE"):
            check_root_formula(good.assign(oracle_rel=[1e-9, 0.0]))

    def test_bound_audit_codes(self):
        only_91 = SimpleNamespace(checks={"finite": True, "ratio_91": False})
        with pytest.raises(InvariantViolation, match="RATIO_91"):
            check_bound_audit(only_91, "upper_bound")
        several = SimpleNamespace(checks={"finite": False, "ratio_91": False})
        with pytest.raises(InvariantViolation, match="BOUND_AUDIT"):
            check_bound_audit(several, "upper_bound")

    def test_tail_audit(self):
        table = pd.DataFrame({"ratio": [1.0, 1.0 + 1e-12], "value": [1.0, 2.0], "stated_bound": [1.5, 2.5]})
        check_tail_audit(table)
        with pytest.raises(InvariantViolation, match="TAIL_CLOSED_FORM"):
            check_tail_audit(table.assign(ratio=[1.0, 1.001]))
        with pytest.raises(InvariantViolation, match="TAIL_STATED_BOUND"):
            check_tail_audit(table.assign(stated_bound=[0.5, 2.5]))

    def test_smoothing_stability(self):
        """running max가 마지막 10%에서 5% 이상 오르면 실패"""
        flat = np.concatenate([np.linspace(1.0, 2.0, 50), np.full(50, 2.0)])
        check_smoothing(SmoothingAudit(pd.DataFrame(), flat, 0))
        rising = np.concatenate([np.full(95, 1.0), np.full(5, 1.2)])
        with pytest.raises(InvariantViolation, match="SMOOTHING_UNSTABLE"):
            check_smoothing(SmoothingAudit(pd.DataFrame(), rising, 0))


class TestSolitonChecks:
    """솔리톤 판정"""

    @staticmethod
    def _result(**overrides):
        base = dict(
            positive=True,
            min_value=0.0,
            residual_pohozaev=1e-9,
            residual_nehari=1e-9,
            residual_v=1e-14,
            residual_pde=1e-11,
            gradient_residual=1e-9,
            gamma_monotone=lambda: True,
        )
        base.update(overrides)
        return SimpleNamespace(**base)

    def test_passes(self):
        check_soliton(self._result())

    @pytest.mark.parametrize(
        "overrides, code",
        [
            ({"residual_pde": 1e-6}, "PDE_RESIDUAL"),
            ({"gradient_residual": 1e-5}, "ACTION_GRADIENT"),
            ({"gamma_monotone": lambda: False}, "GAMMA_NOT_MONOTONE"),
            ({"positive": False, "min_value": -0.1}, "SOLITON_POSITIVITY"),
            ({"residual_pohozaev": 1e-3}, "POHOZAEV_RESIDUAL"),
            ({"residual_nehari": 1e-3}, "NEHARI_RESIDUAL"),
            ({"residual_v": 1e-6}, "HELMHOLTZ_RESIDUAL"),
        ],
    )
    def test_violations(self, overrides, code):
        with pytest.raises(InvariantViolation, match=code):
            check_soliton(self._result(**overrides))
