# common/__init__.py
"""공통 유틸리티 패키지"""
from common.logging import get_logger

__all__ = ["get_logger"]
