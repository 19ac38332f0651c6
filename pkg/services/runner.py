# services/runner.py
"""
실험 실행기
- parse_config: JSON 설정 → pydantic 모델 (위반 시 ConfigError, 종료 코드 2)
- run: 명령 1건 실행 → 산출물 기록 + 한 줄 요약 출력 → 종료 코드
    0 성공, 1 수치 실패/불변량 위반, 2 설정 오류
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Callable, Dict, List, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, ValidationError

from common.errors import ConfigError, QmnlsError
from common.logging import get_logger
from config.settings import DEFAULT_THREADS, OUTPUT_DIR
from evolution import evolve
from generator.data import realize_datum
from grader.checker import (
    InvariantViolation,
    check_bound_audit,
    check_energy_drift,
    check_growth,
    check_mass_drift,
    check_phi_audit,
    check_root_formula,
    check_smoothing,
    check_soliton,
    check_sweep,
    check_tail_audit,
)
from kernels.calculus import phi_kernel_audit, tail_integral_audit
from kernels.roots import lower_bound_audit, random_root_problems, root_formula_audit, upper_bound_audit
from kernels.smoothing import smoothing_supremum_sample
from limits import growth_tracking, negative_s_difference, plateau_report, semiclassical_sweep, uniform_bound_check
from schemas.config import CONFIG_MODELS
from services.checkpoint import write_checkpoint
from services.reports import key_value_text, plateau_text, soliton_meta_text, write_csv, write_text
from solitons import (
    SolitonProblem,
    combined_identity,
    default_initial_guess,
    nehari_residual,
    nonexistence_report,
    petviashvili_solve,
    pohozaev_residual,
    scaling_exponents_check,
)

logger = get_logger(__name__)

COMMANDS = ("evolve", "sweep-eps", "limit-integral", "soliton", "verify-kernels", "growth")


# ============================================================
# 설정 파싱
# ============================================================

def _field_errors(err: ValidationError) -> str:
    parts = []
    for e in err.errors():
        loc = ".".join(str(p) for p in e["loc"]) or "<root>"
        parts.append(f"{loc}: {e['msg']}")
    return "; ".join(parts)


def parse_config(path: Path | str, command: str) -> BaseModel:
    model = CONFIG_MODELS.get(command)
    if model is None:
        raise ConfigError("UNKNOWN_COMMAND", f"설정 파일을 받지 않는 명령입니다: {command}")
    path = Path(path)
    if not path.is_file():
        raise ConfigError("CONFIG_NOT_FOUND", f"설정 파일이 없습니다: {path}")
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ConfigError("CONFIG_PARSE", f"JSON 파싱 실패 ({path}): {e}")
    try:
        return model.model_validate(raw)
    except ValidationError as e:
        raise ConfigError("INVALID_CONFIG", _field_errors(e), {"path": str(path)})


# ============================================================
# 명령별 실행
# ============================================================

def _run_evolve(cfg, out: Path, threads: int) -> str:
    result = evolve(cfg)
    write_csv(result.diagnostics.to_frame(), out / "diagnostics.csv")
    for k, t, state in result.checkpoints:
        write_checkpoint(out / "checkpoints" / f"step_{k:08d}.qmnls", state, cfg.eps, t)
    write_checkpoint(out / "final.qmnls", result.final, cfg.eps, cfg.t_final)

    drift = result.diagnostics.relative_mass_drift()
    energy_drift = result.diagnostics.relative_energy_drift()
    # 2/3 마스크는 질량과 에너지를 모두 깎으므로 dealias 실행은 판정하지 않는다
    if not cfg.dealias:
        check_mass_drift(drift)
        check_energy_drift(energy_drift)
    return f"steps={result.steps} mass_drift={drift:.3e} energy_drift={energy_drift:.3e}"


def _run_sweep(cfg, out: Path, threads: int) -> str:
    grid = cfg.make()
    f0 = realize_datum(cfg.datum, grid)
    if cfg.mode == "negative_s":
        res = negative_s_difference(
            f0, cfg.s, cfg.t_final, cfg.eps_list, cfg.dt, samples=cfg.samples, dealias=cfg.dealias, threads=threads
        )
        write_csv(res.to_frame(), out / "negative_s.csv")
        env = pd.DataFrame(
            [{"eps": e, "A": a, "C": c, "scaled_at_ref_t": res.scaled().get(e)} for e, (a, c) in res.envelopes.items()]
        )
        write_csv(env, out / "negative_s_envelopes.csv")
        ratios = res.successive_ratios()
        return f"ref_t={res.ref_t:g} ratios={[round(r, 4) for r in ratios]}"

    res = semiclassical_sweep(
        f0,
        cfg.s,
        cfg.t_final,
        cfg.eps_list,
        cfg.dt,
        samples=cfg.samples,
        dealias=cfg.dealias,
        threads=threads,
        datum_id=cfg.datum.datum_id,
    )
    write_csv(res.to_frame(), out / "sweep.csv")
    check_sweep(res)
    errs = res.sup_errors
    if any(b >= a for a, b in zip(errs, errs[1:])):
        logger.warning(f"[WARN] sup errors are not strictly decreasing: {errs}")
    return f"sup_err={['%.3e' % e for e in errs]}"


def _run_growth(cfg, out: Path, threads: int) -> str:
    grid = cfg.make()
    f0 = realize_datum(cfg.datum, grid)
    rows: List[Dict[str, float]] = []
    results = []
    for s in cfg.s_list:
        res = growth_tracking(
            f0, s, cfg.t_final, cfg.eps, cfg.dt, samples=cfg.samples, margin=cfg.margin, dealias=cfg.dealias
        )
        write_csv(res.to_frame(), out / f"growth_s{s:g}.csv")
        rows.append({"s": s, "slope": res.slope, "exponent": res.exponent, "within_bound": res.within_bound})
        results.append(res)
    write_csv(pd.DataFrame(rows), out / "growth_summary.csv")

    detail = f"slopes={[round(r['slope'], 4) for r in rows]}"
    if cfg.uniform_s is not None:
        eps_list = cfg.uniform_eps_list or [cfg.eps]
        report = uniform_bound_check(
            f0, cfg.uniform_s, cfg.t_final, eps_list, cfg.dt, samples=cfg.samples, threads=threads
        )
        write_csv(report.to_frame(), out / "uniform_bound.csv")
        detail += f" uniform_C={report.C:.4g}"

    for res in results:
        check_growth(res)
    return detail


def _run_soliton(cfg, out: Path, threads: int) -> str:
    grid = cfg.make()
    problem = SolitonProblem(cfg.eps, cfg.tau, grid, cfg.d)
    try:
        result = petviashvili_solve(problem, default_initial_guess(problem, cfg.init_width), cfg.tol, cfg.max_iter)
    except QmnlsError as e:
        write_text(key_value_text({"error_type": e.error_type, **e.context}), out / "soliton_failure.txt")
        raise

    write_checkpoint(out / "soliton.qmnls", result.Q, cfg.eps, cfg.tau)
    write_text(soliton_meta_text(result), out / "soliton_meta.csv")
    write_csv(
        pd.DataFrame({"x": grid.x, "Q": result.Q.values.real, "v": result.v.values.real}),
        out / "soliton_profile.csv",
    )
    identities = {
        "pohozaev_d1": pohozaev_residual(result.Q, result.v, cfg.eps, cfg.tau, 1),
        "nehari": nehari_residual(result.Q, result.v, cfg.eps, cfg.tau),
        f"combined_d{cfg.d}": combined_identity(result.Q, result.v, cfg.eps, cfg.tau, cfg.d),
        "residual_v": result.residual_v,
        "symmetry_error": result.symmetry_error,
        "min_Q": result.min_value,
        "action_gradient": result.gradient_residual,
        "gamma_monotone": result.gamma_monotone(),
    }
    write_text(key_value_text(identities), out / "identities.txt")
    write_csv(
        pd.DataFrame([nonexistence_report(d, z).as_dict() for z in (False, True) for d in range(1, 13)]),
        out / "nonexistence.csv",
    )
    detail = f"iterations={result.iterations} action={result.action:.12g} residual={result.residual_pde:.3e}"
    if cfg.scaling:
        scaling = scaling_exponents_check(cfg.scaling_s_list, cfg.scaling_k_max)
        write_csv(scaling.table, out / "scaling.csv")
        write_csv(
            pd.DataFrame(
                [{"quantity": k, "slope": v, "expected": scaling.expected[k]} for k, v in scaling.slopes.items()]
            ),
            out / "scaling_slopes.csv",
        )
        if not scaling.passed:
            raise InvariantViolation("SCALING_SLOPE", f"스케일링 기울기 편차: {scaling.deviations}")
    check_soliton(result)
    return detail


def _run_verify_kernels(cfg, out: Path, threads: int) -> str:
    outcomes: Dict[str, Optional[InvariantViolation]] = {}

    def attempt(name: str, check: Callable[[], None]) -> None:
        try:
            check()
            outcomes[name] = None
        except InvariantViolation as e:
            logger.error(f"[ERROR] audit {name} failed: {e}")
            outcomes[name] = e

    rng = np.random.default_rng(cfg.seed)
    roots = root_formula_audit(random_root_problems(rng, cfg.root_samples, cfg.eps))
    write_csv(roots, out / "root_formula.csv")
    attempt("root_formula", lambda: check_root_formula(roots))

    lower = lower_bound_audit(cfg.eps, cfg.xi_grid)
    write_csv(lower.table, out / "lower_bound.csv")
    write_csv(lower.summary, out / "lower_bound_summary.csv")
    attempt("lower_bound", lambda: check_bound_audit(lower, "lower_bound"))

    upper = upper_bound_audit(cfg.eps, cfg.xi_grid)
    write_csv(upper.table, out / "upper_bound.csv")
    write_csv(upper.summary, out / "upper_bound_summary.csv")
    attempt("upper_bound", lambda: check_bound_audit(upper, "upper_bound"))

    phi = pd.concat([phi_kernel_audit(b, g, cfg.phi_offsets) for b, g in cfg.phi_pairs], ignore_index=True)
    write_csv(phi, out / "phi_kernel.csv")
    attempt("phi_kernel", lambda: check_phi_audit(phi))

    tail = tail_integral_audit(cfg.tail_A, cfg.tail_a)
    write_csv(tail, out / "tail_integral.csv")
    attempt("tail_integral", lambda: check_tail_audit(tail))

    if cfg.smoothing:
        audit = smoothing_supremum_sample(
            cfg.eps,
            cfg.smoothing_b,
            cfg.smoothing_gamma,
            cfg.smoothing_a,
            cfg.smoothing_s,
            cfg.smoothing_samples,
            xi_max=cfg.smoothing_xi_max,
            seed=cfg.seed,
            threads=threads,
        )
        write_csv(audit.table, out / "smoothing.csv")
        attempt("smoothing", lambda: check_smoothing(audit))

    summary = pd.DataFrame(
        [
            {"audit": name, "passed": err is None, "error_type": err.error_type if err else ""}
            for name, err in outcomes.items()
        ]
    )
    write_csv(summary, out / "audit_summary.csv")
    failed = [name for name, err in outcomes.items() if err is not None]
    if failed:
        first = outcomes[failed[0]]
        raise InvariantViolation(first.error_type, f"실패한 감사: {failed}", {"failed": failed})
    return f"audits={len(outcomes)} all passed"


def _run_limit_integral(out: Path, s: float, profile: str) -> str:
    report = plateau_report(s, profile)
    write_text(plateau_text(report), out / f"plateau_{profile}_s{s:g}.txt")
    return (
        f"plateau={report.plateau:.12g} stated_2pi={report.stated:.12g} "
        f"computed_2pi^1.5={report.computed_constant:.12g}"
    )


HANDLERS: Dict[str, Callable] = {
    "evolve": _run_evolve,
    "sweep-eps": _run_sweep,
    "growth": _run_growth,
    "soliton": _run_soliton,
    "verify-kernels": _run_verify_kernels,
}


def run(
    command: str,
    config: Optional[BaseModel] = None,
    *,
    out: Optional[Path | str] = None,
    threads: Optional[int] = None,
    s: float = 0.0,
    profile: str = "special",
) -> int:
    """명령 1건 실행 후 종료 코드 반환 (예외를 밖으로 던지지 않음)"""
    out_dir = Path(out) if out is not None else OUTPUT_DIR / command
    workers = threads if threads is not None else DEFAULT_THREADS
    logger.info(f"[START] {command} out={out_dir} threads={workers}")
    try:
        if command == "limit-integral":
            detail = _run_limit_integral(out_dir, s, profile)
        elif command in HANDLERS:
            if config is None:
                raise ConfigError("MISSING_CONFIG", f"{command} 명령에는 --config 가 필요합니다")
            detail = HANDLERS[command](config, out_dir, workers)
        else:
            raise ConfigError("UNKNOWN_COMMAND", f"알 수 없는 명령입니다: {command}")
    except QmnlsError as e:
        logger.error(f"[ERROR] {command} {e.error_type}: {e.message} context={e.context}")
        print(f"❌ {command} {e.error_type}: {e.message}")
        return e.exit_code

    logger.info(f"[DONE] {command} {detail}")
    print(f"✅ {command}: {detail}")
    return 0
