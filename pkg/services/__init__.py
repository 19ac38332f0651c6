# services/__init__.py
"""서비스 레이어 패키지"""
