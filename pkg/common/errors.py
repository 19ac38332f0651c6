# common/errors.py
"""
공통 예외 타입
- error_type: 안정적인 대문자 코드 (예: NAN_IN_STATE)
- message: 사람이 읽는 설명
"""
from __future__ import annotations

from typing import Any


class QmnlsError(Exception):
    """모든 실험 오류의 기반 클래스"""

    exit_code = 1

    def __init__(self, error_type: str, message: str, context: dict[str, Any] | None = None):
        self.error_type = error_type
        self.message = message
        self.context = dict(context or {})
        super().__init__(f"{error_type}: {message}")


class ConfigError(QmnlsError):
    """설정/스키마 위반, 잘못된 격자 파라미터"""

    exit_code = 2


class UsageError(QmnlsError):
    """잘못된 공간(Physical/Frequency)의 Field 전달 등 호출 규약 위반"""


class DomainError(QmnlsError):
    """수학적 파라미터 구간을 벗어난 입력 (근 문제 창, 발산 커널 등)"""


class NumericalError(QmnlsError):
    """NaN/Inf, 비유한 승수, 비수렴, 구적 실패, 자명 고정점"""
