# tests/test_cli.py
"""
CLI / runner 통합 테스트
- 설정 파싱, 종료 코드(0/1/2), 산출물 파일, 결정성, 체크포인트 코덱
"""
import json

import numpy as np
import pandas as pd
import pytest

from common.errors import ConfigError
from generator.data import gaussian
from grader.checker import compare_frames
from schemas.config import RunConfig
from scripts.qmnls import main
from services.checkpoint import decode_checkpoint, encode_checkpoint, read_checkpoint
from services.runner import parse_config
from tests.conftest import slow

EVOLVE_BASE = {
    "n": 128,
    "L": 30.0,
    "eps": 0.5,
    "dt": 1e-3,
    "t_final": 0.02,
    "datum": {"kind": "gaussian", "amp": 1.0, "width": 1.0, "center": 0.0},
    "diag_stride": 5,
    "sobolev_orders": [1.0],
}


def _write_config(tmp_path, name, data):
    path = tmp_path / f"{name}.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


class TestParseConfig:
    """JSON → pydantic 모델"""

    def test_valid_evolve(self, tmp_path):
        cfg = parse_config(_write_config(tmp_path, "ok", EVOLVE_BASE), "evolve")
        assert isinstance(cfg, RunConfig)
        assert cfg.n_steps == 20

    @pytest.mark.parametrize(
        "override, needle",
        [
            ({"dt": 0.0}, "dt"),
            ({"n": 100}, "n"),
            ({"eps": -0.1}, "eps"),
            ({"surprise": 1}, "surprise"),
            ({"dt": 0.5, "t_final": 0.1}, "dt < t_final"),
        ],
    )
    def test_invalid_evolve(self, tmp_path, override, needle):
        path = _write_config(tmp_path, "bad", {**EVOLVE_BASE, **override})
        with pytest.raises(ConfigError, match="INVALID_CONFIG") as exc:
            parse_config(path, "evolve")
        assert needle in exc.value.message
        assert exc.value.exit_code == 2

    def test_sweep_not_decreasing(self, tmp_path):
        data = {"n": 128, "L": 30.0, "dt": 1e-3, "t_final": 0.1, "s": 1.0, "eps_list": [0.1, 0.2]}
        with pytest.raises(ConfigError, match="INVALID_CONFIG"):
            parse_config(_write_config(tmp_path, "sweep", data), "sweep-eps")

    def test_negative_mode_requires_negative_s(self, tmp_path):
        data = {"n": 128, "L": 30.0, "dt": 1e-3, "t_final": 0.1, "s": 1.0, "eps_list": [0.2], "mode": "negative_s"}
        with pytest.raises(ConfigError, match="INVALID_CONFIG"):
            parse_config(_write_config(tmp_path, "neg", data), "sweep-eps")

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="CONFIG_NOT_FOUND"):
            parse_config(tmp_path / "nope.json", "evolve")

    def test_broken_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{ not json", encoding="utf-8")
        with pytest.raises(ConfigError, match="CONFIG_PARSE"):
            parse_config(path, "evolve")

    def test_command_without_config(self, tmp_path):
        with pytest.raises(ConfigError, match="UNKNOWN_COMMAND"):
            parse_config(_write_config(tmp_path, "x", {}), "limit-integral")

    def test_audit_defaults(self, tmp_path):
        cfg = parse_config(_write_config(tmp_path, "audit", {}), "verify-kernels")
        assert cfg.xi_grid == [2.0, 10.0, 50.0]
        assert cfg.smoothing


class TestExitCodes:
    """main() 종료 코드와 요약 줄"""

    def test_evolve_zero_datum(self, tmp_path, out_dir, capsys):
        data = {**EVOLVE_BASE, "datum": {"kind": "gaussian", "amp": 0.0}}
        code = main(["evolve", "--config", _write_config(tmp_path, "zero", data), "--out", str(out_dir)])
        assert code == 0
        assert "✅ evolve" in capsys.readouterr().out
        frame = pd.read_csv(out_dir / "diagnostics.csv")
        assert list(frame.columns) == ["t", "mass", "energy", "hs_1"]
        assert (frame[["mass", "energy", "hs_1"]] == 0).all().all()
        assert (out_dir / "final.qmnls").exists()

    def test_energy_drift_exit_one(self, tmp_path, out_dir, capsys):
        """굵은 dt 와 큰 진폭에서는 분할 오차로 에너지가 1e-5 넘게 움직인다"""
        data = {
            **EVOLVE_BASE,
            "dt": 0.05,
            "t_final": 0.5,
            "datum": {"kind": "gaussian", "amp": 3.0, "width": 0.5, "center": 0.0},
        }
        code = main(["evolve", "--config", _write_config(tmp_path, "coarse", data), "--out", str(out_dir)])
        assert code == 1
        assert "❌ evolve ENERGY_DRIFT" in capsys.readouterr().out
        assert (out_dir / "diagnostics.csv").exists()

    def test_invalid_config_exit_two(self, tmp_path, out_dir, capsys):
        path = _write_config(tmp_path, "bad", {**EVOLVE_BASE, "dt": 0.0})
        assert main(["evolve", "--config", path, "--out", str(out_dir)]) == 2
        assert "❌ evolve INVALID_CONFIG" in capsys.readouterr().out

    def test_missing_config_flag(self):
        assert main(["evolve"]) == 2

    def test_unknown_subcommand(self):
        assert main(["explode"]) == 2

    def test_invalid_threads(self, tmp_path):
        path = _write_config(tmp_path, "ok", EVOLVE_BASE)
        assert main(["evolve", "--config", path, "--threads", "0"]) == 2

    def test_soliton_non_convergence_exit_one(self, tmp_path, out_dir, capsys):
        data = {"n": 512, "L": 60.0, "eps": 0.5, "tau": 1.0, "max_iter": 1, "scaling": False}
        code = main(["soliton", "--config", _write_config(tmp_path, "sol", data), "--out", str(out_dir)])
        assert code == 1
        assert "❌ soliton NON_CONVERGENCE" in capsys.readouterr().out
        failure = (out_dir / "soliton_failure.txt").read_text(encoding="utf-8")
        assert "error_type = NON_CONVERGENCE" in failure
        assert "iterations = 1" in failure

    def test_soliton_success(self, tmp_path, out_dir):
        data = {"n": 1024, "L": 60.0, "eps": 0.5, "tau": 1.0, "scaling": False}
        assert main(["soliton", "--config", _write_config(tmp_path, "sol", data), "--out", str(out_dir)]) == 0
        for name in ("soliton.qmnls", "soliton_meta.csv", "soliton_profile.csv", "identities.txt", "nonexistence.csv"):
            assert (out_dir / name).exists(), name
        ck = read_checkpoint(out_dir / "soliton.qmnls")
        assert ck.eps == 0.5 and ck.t == 1.0
        meta = pd.read_csv(out_dir / "soliton_meta.csv", comment="#")
        assert meta.loc[0, "residual_pde"] <= 1e-10
        table = pd.read_csv(out_dir / "nonexistence.csv")
        assert len(table) == 24
        forced = table[(table["d"] == 12) & (~table["eps_zero"])]["triviality_forced"]
        assert bool(forced.iloc[0])

    def test_limit_integral(self, out_dir, capsys):
        assert main(["limit-integral", "--s", "0", "--out", str(out_dir)]) == 0
        text = (out_dir / "plateau_special_s0.txt").read_text(encoding="utf-8")
        assert "stated_2pi = " in text
        assert "computed_2pi_3_2 = " in text
        assert "✅ limit-integral" in capsys.readouterr().out

    def test_limit_integral_indicator(self, out_dir):
        assert main(["limit-integral", "--s", "1.5", "--profile", "indicator", "--out", str(out_dir)]) == 0
        assert (out_dir / "plateau_indicator_s1.5.txt").exists()

    def test_sweep_and_growth(self, tmp_path, out_dir):
        sweep = {"n": 128, "L": 30.0, "dt": 1e-3, "t_final": 0.05, "s": 1.0, "eps_list": [0.4, 0.2], "samples": 5}
        assert main(["sweep-eps", "--config", _write_config(tmp_path, "sw", sweep), "--out", str(out_dir / "sw")]) == 0
        frame = pd.read_csv(out_dir / "sw" / "sweep.csv")
        assert list(frame["eps"]) == [0.4, 0.2]
        assert frame["sup_err"].iloc[0] > frame["sup_err"].iloc[1] > 0

        growth = {
            "n": 128,
            "L": 30.0,
            "eps": 0.3,
            "dt": 1e-3,
            "t_final": 0.05,
            "s_list": [0.0],
            "samples": 5,
            "uniform_s": 1.0,
            "uniform_eps_list": [0.3, 0.1],
        }
        assert main(["growth", "--config", _write_config(tmp_path, "gr", growth), "--out", str(out_dir / "gr")]) == 0
        for name in ("growth_s0.csv", "growth_summary.csv", "uniform_bound.csv"):
            assert (out_dir / "gr" / name).exists(), name

    def test_verify_kernels_quick(self, tmp_path, out_dir):
        data = {"smoothing": False, "root_samples": 50, "xi_grid": [2.0, 10.0]}
        assert main(["verify-kernels", "--config", _write_config(tmp_path, "k", data), "--out", str(out_dir)]) == 0
        summary = pd.read_csv(out_dir / "audit_summary.csv")
        assert set(summary["audit"]) == {"root_formula", "lower_bound", "upper_bound", "phi_kernel", "tail_integral"}
        assert summary["passed"].all()
        assert not (out_dir / "smoothing.csv").exists()


class TestDeterminism:
    """같은 설정 ⇒ 바이트 동일 산출물"""

    def test_evolve_csv_identical(self, tmp_path):
        path = _write_config(tmp_path, "det", EVOLVE_BASE)
        assert main(["evolve", "--config", path, "--out", str(tmp_path / "a")]) == 0
        assert main(["evolve", "--config", path, "--out", str(tmp_path / "b")]) == 0
        assert (tmp_path / "a" / "diagnostics.csv").read_bytes() == (tmp_path / "b" / "diagnostics.csv").read_bytes()
        assert (tmp_path / "a" / "final.qmnls").read_bytes() == (tmp_path / "b" / "final.qmnls").read_bytes()

    def test_sweep_frames_match(self, tmp_path):
        """스레드 수가 달라도 스윕 표는 비트 단위로 같다"""
        sweep = {"n": 128, "L": 30.0, "dt": 1e-3, "t_final": 0.05, "s": 1.0, "eps_list": [0.4, 0.2], "samples": 5}
        path = _write_config(tmp_path, "sw", sweep)
        assert main(["sweep-eps", "--config", path, "--out", str(tmp_path / "a"), "--threads", "1"]) == 0
        assert main(["sweep-eps", "--config", path, "--out", str(tmp_path / "b"), "--threads", "2"]) == 0
        compare_frames(pd.read_csv(tmp_path / "a" / "sweep.csv"), pd.read_csv(tmp_path / "b" / "sweep.csv"))

    def test_evolve_frames_match(self, tmp_path):
        path = _write_config(tmp_path, "det", EVOLVE_BASE)
        assert main(["evolve", "--config", path, "--out", str(tmp_path / "a")]) == 0
        assert main(["evolve", "--config", path, "--out", str(tmp_path / "b")]) == 0
        compare_frames(
            pd.read_csv(tmp_path / "a" / "diagnostics.csv"), pd.read_csv(tmp_path / "b" / "diagnostics.csv")
        )


class TestCheckpoint:
    """QMNLS1 코덱"""

    def test_round_trip_and_restart(self, tmp_path, out_dir):
        data = {**EVOLVE_BASE, "checkpoint_stride": 10}
        assert main(["evolve", "--config", _write_config(tmp_path, "ck", data), "--out", str(out_dir)]) == 0
        names = sorted(p.name for p in (out_dir / "checkpoints").iterdir())
        assert names == ["step_00000000.qmnls", "step_00000010.qmnls", "step_00000020.qmnls"]

        final = read_checkpoint(out_dir / "final.qmnls")
        assert final.grid.n == 128 and final.grid.length == 30.0
        assert final.eps == 0.5 and final.t == pytest.approx(0.02)
        again = decode_checkpoint(encode_checkpoint(final.field, final.eps, final.t))
        np.testing.assert_array_equal(again.field.values, final.field.values)

        restart = {**EVOLVE_BASE, "datum": {"kind": "file", "path": str(out_dir / "final.qmnls")}}
        code = main(["evolve", "--config", _write_config(tmp_path, "re", restart), "--out", str(tmp_path / "re")])
        assert code == 0

    @pytest.mark.parametrize("raw", [b"NOTQMN" + b"\x00" * 40, b"QMNLS1\x01", b""])
    def test_bad_checkpoint(self, raw):
        with pytest.raises(ConfigError, match="BAD_CHECKPOINT"):
            decode_checkpoint(raw)

    def test_size_mismatch(self, grid):
        raw = encode_checkpoint(gaussian(grid), 0.5, 0.0)
        with pytest.raises(ConfigError, match="BAD_CHECKPOINT"):
            decode_checkpoint(raw[:-16])


@slow
class TestFullRuns:
    """기본값 전체 감사와 스케일링 포함 솔리톤"""

    def test_verify_kernels_defaults(self, tmp_path, out_dir):
        assert main(["verify-kernels", "--config", _write_config(tmp_path, "k", {}), "--out", str(out_dir)]) == 0
        assert (out_dir / "smoothing.csv").exists()

    def test_soliton_with_scaling(self, tmp_path, out_dir):
        data = {"n": 1024, "L": 60.0, "eps": 0.5, "tau": 1.0}
        assert main(["soliton", "--config", _write_config(tmp_path, "sol", data), "--out", str(out_dir)]) == 0
        slopes = pd.read_csv(out_dir / "scaling_slopes.csv")
        assert (np.abs(slopes["slope"] - slopes["expected"]) <= 0.05).all()
