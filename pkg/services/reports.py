# services/reports.py
"""
산출물 기록
- CSV: 헤더 포함, 17 유효숫자, 타임스탬프 없음 (동일 설정 ⇒ 바이트 동일)
- 텍스트 보고서: key = value 줄
"""
from __future__ import annotations

from pathlib import Path
from typing import Mapping

import pandas as pd

from common.logging import get_logger

logger = get_logger(__name__)

FLOAT_FORMAT = "%.17g"


def write_csv(frame: pd.DataFrame, path: Path | str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, na_rep="nan", lineterminator="\n")
    logger.info(f"[INFO] csv written: {path} rows={len(frame)}")
    return path


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return FLOAT_FORMAT % value
    return str(value)


def key_value_text(values: Mapping[str, object]) -> str:
    return "".join(f"{key} = {_fmt(v)}\n" for key, v in values.items())


def write_text(text: str, path: Path | str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info(f"[INFO] report written: {path}")
    return path


def plateau_text(report) -> str:
    """plateau, 2π 과 2π^{3/2} 두 상수와의 차이, 탐침 시각 비교"""
    return key_value_text(report.as_dict())


def soliton_meta_text(result) -> str:
    """체크포인트 옆 메타데이터: 헤더 + 값 한 줄 (체크포인트의 t 자리는 τ)"""
    meta = result.meta()
    header = ",".join(meta)
    row = ",".join(_fmt(float(v)) if not isinstance(v, int) else str(v) for v in meta.values())
    note = "# checkpoint t field holds tau\n"
    return note + header + "\n" + row + "\n"
