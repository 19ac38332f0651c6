# tests/__init__.py
"""테스트 패키지"""
