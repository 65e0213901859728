"""One console script per figure: ``--in <dir> --out <file>``."""

from __future__ import annotations

import argparse
import sys

from .render import build_spec, render
from .tables import FigureInputError


def _main(kind: str, argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog=f"fig-{kind}", description=f"render the {kind} figure from result tables"
    )
    parser.add_argument("--in", dest="in_dir", required=True, help="directory of result tables")
    parser.add_argument("--out", dest="out_path", required=True, help="output image path")
    args = parser.parse_args(argv)
    try:
        spec = build_spec(kind, args.in_dir, args.out_path)
        path = render(spec)
    except FigureInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(path)
    return 0


def main_otoc_growth(argv=None) -> int:
    return _main("otoc-growth", argv)


def main_time_reversal(argv=None) -> int:
    return _main("time-reversal", argv)


def main_decomposition(argv=None) -> int:
    return _main("decomposition", argv)


def main_soliton_overlap(argv=None) -> int:
    return _main("soliton-overlap", argv)


def main_soliton_map(argv=None) -> int:
    return _main("soliton-map", argv)
