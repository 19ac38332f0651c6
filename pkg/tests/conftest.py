# tests/conftest.py
"""
pytest 공통 fixture 및 설정
"""
import os

# 진행 막대는 테스트 출력에서 끈다 (settings import 전에 설정)
os.environ.setdefault("QMNLS_PROGRESS", "0")

import numpy as np
import pytest

from engine.spectral import make_grid

slow = pytest.mark.skipif(
    os.getenv("RUN_SLOW_TESTS", "0") != "1",
    reason="Set RUN_SLOW_TESTS=1 to run long acceptance runs",
)


@pytest.fixture
def grid():
    """기본 격자 n=256, L=40"""
    return make_grid(256, 40.0)


@pytest.fixture
def small_grid():
    """빠른 전개용 격자 n=128, L=30"""
    return make_grid(128, 30.0)


@pytest.fixture
def rng():
    """고정 시드 난수 생성기"""
    return np.random.default_rng(20240611)


@pytest.fixture
def out_dir(tmp_path):
    """실행별 출력 디렉터리"""
    path = tmp_path / "out"
    path.mkdir()
    return path
