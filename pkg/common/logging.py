# common/logging.py
"""
실행 로그 설정
- 콘솔 + $LOG_DIR/qmnls.log
- 데이터 파일(CSV, 체크포인트)에는 시각을 남기지 않는다. 실행 시각은 이 로그에만 기록.
"""
import logging
import os

from config.settings import LOG_DIR

LOG_FILE = LOG_DIR / "qmnls.log"
LOG_FORMAT = "%(asctime)s | %(levelname)s | %(name)s | %(message)s"

LOG_DIR.mkdir(parents=True, exist_ok=True)

logging.basicConfig(
    level=os.getenv("LOG_LEVEL", "INFO"),
    format=LOG_FORMAT,
    handlers=[
        logging.StreamHandler(),
        logging.FileHandler(LOG_FILE, encoding="utf-8"),
    ],
)

# 수치 라이브러리 쪽 잡음은 경고 이상만
for _name in ("numpy", "scipy"):
    logging.getLogger(_name).setLevel(logging.WARNING)


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(name)
