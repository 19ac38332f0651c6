# config/settings.py
"""
프로젝트 전역 설정 모듈
- 환경 변수 기반 설정 (.env 지원)
- CLI 플래그(--out, --threads)가 있으면 그쪽이 우선
"""
from __future__ import annotations
import os
from pathlib import Path
from dotenv import load_dotenv

load_dotenv()


def _env_int(key: str, default: int) -> int:
    return int(os.getenv(key, str(default)))


def _env_float(key: str, default: float) -> float:
    return float(os.getenv(key, str(default)))


def _env_flag(key: str, default: bool) -> bool:
    return os.getenv(key, "1" if default else "0") == "1"


# ============================================================
# 출력 설정
# ============================================================
OUTPUT_DIR = Path(os.getenv("QMNLS_OUT_DIR", "runs"))
LOG_DIR = Path(os.getenv("LOG_DIR", "logs"))

# ============================================================
# 실행 설정
# ============================================================
DEFAULT_THREADS = max(1, _env_int("QMNLS_THREADS", 1))
SHOW_PROGRESS = _env_flag("QMNLS_PROGRESS", True)

# 토러스 절단 허용치: 경계에서 초기값 크기가 이보다 크면 경고
BOUNDARY_TOL = _env_float("QMNLS_BOUNDARY_TOL", 1e-14)
