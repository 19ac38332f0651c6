# schemas/__init__.py
"""실험 설정 Pydantic 스키마"""
from schemas.datum import *
from schemas.config import *
