# scripts/qmnls.py
"""
qmnls <subcommand> --config <path> [--out <dir>] [--threads <k>]
qmnls limit-integral [--s <s>] [--profile special|indicator] [--out <dir>]
"""
from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from common.errors import ConfigError
from common.logging import get_logger
from services.runner import parse_config, run

logger = get_logger(__name__)

CONFIG_COMMANDS = ("evolve", "sweep-eps", "soliton", "verify-kernels", "growth")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qmnls", description="qmNLS 수치 실험실")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in CONFIG_COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON 설정 파일")
        p.add_argument("--out", default=None, help="출력 디렉터리 (기본: $QMNLS_OUT_DIR/<command>)")
        p.add_argument("--threads", type=int, default=None, help="작업자 수")

    p = sub.add_parser("limit-integral")
    p.add_argument("--s", type=float, default=0.0)
    p.add_argument("--profile", choices=("special", "indicator"), default="special")
    p.add_argument("--out", default=None)
    p.add_argument("--threads", type=int, default=None)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse 사용법 오류도 설정 오류(2)로 취급
        return int(e.code or 0)

    if args.threads is not None and args.threads < 1:
        print(f"❌ {args.command} INVALID_THREADS: --threads는 1 이상이어야 합니다")
        return 2

    if args.command == "limit-integral":
        return run(args.command, out=args.out, threads=args.threads, s=args.s, profile=args.profile)

    try:
        config = parse_config(args.config, args.command)
    except ConfigError as e:
        logger.error(f"[ERROR] config {e.error_type}: {e.message}")
        print(f"❌ {args.command} {e.error_type}: {e.message}")
        return e.exit_code
    return run(args.command, config, out=args.out, threads=args.threads)


if __name__ == "__main__":
    sys.exit(main())
