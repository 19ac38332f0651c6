# services/checkpoint.py
"""
바이너리 체크포인트 코덱 (little-endian)
- magic "QMNLS1" (6 bytes)
- u64 n, f64 L, f64 eps, f64 t
- n개 레코드 (f64 re, f64 im), 물리 공간, index 0 = x = -L/2
솔리톤 결과는 같은 레이아웃을 쓰고 t 자리에 τ를 기록한다.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from common.errors import ConfigError
from common.logging import get_logger
from engine.spectral import Field, Grid, as_physical, make_grid

logger = get_logger(__name__)

MAGIC = b"QMNLS1"
HEADER_DTYPE = np.dtype([("n", "<u8"), ("L", "<f8"), ("eps", "<f8"), ("t", "<f8")])


@dataclass(frozen=True)
class Checkpoint:
    field: Field
    eps: float
    t: float

    @property
    def grid(self) -> Grid:
        return self.field.grid


def encode_checkpoint(f: Field, eps: float, t: float) -> bytes:
    p = as_physical(f)
    header = np.array([(p.grid.n, p.grid.length, eps, t)], dtype=HEADER_DTYPE)
    return MAGIC + header.tobytes() + p.values.astype("<c16").tobytes()


def decode_checkpoint(raw: bytes) -> Checkpoint:
    if raw[: len(MAGIC)] != MAGIC:
        raise ConfigError("BAD_CHECKPOINT", "체크포인트 magic이 QMNLS1이 아닙니다")
    offset = len(MAGIC)
    if len(raw) < offset + HEADER_DTYPE.itemsize:
        raise ConfigError("BAD_CHECKPOINT", f"체크포인트 헤더가 잘렸습니다: size={len(raw)}")
    header = np.frombuffer(raw, dtype=HEADER_DTYPE, count=1, offset=offset)[0]
    offset += HEADER_DTYPE.itemsize
    n = int(header["n"])
    expected = offset + 16 * n
    if len(raw) != expected:
        raise ConfigError(
            "BAD_CHECKPOINT",
            f"체크포인트 크기 불일치 expected={expected} got={len(raw)}",
        )
    values = np.frombuffer(raw, dtype="<c16", count=n, offset=offset)
    grid = make_grid(n, float(header["L"]))
    return Checkpoint(Field.physical(grid, values), float(header["eps"]), float(header["t"]))


def write_checkpoint(path: Path | str, f: Field, eps: float, t: float) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_checkpoint(f, eps, t))
    logger.info(f"[INFO] checkpoint written: {path} (t={t:g})")
    return path


def read_checkpoint(path: Path | str) -> Checkpoint:
    path = Path(path)
    if not path.exists():
        raise ConfigError("CHECKPOINT_NOT_FOUND", f"체크포인트 파일이 없습니다: {path}")
    return decode_checkpoint(path.read_bytes())
