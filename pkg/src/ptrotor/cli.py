"""Command-line entry point: one subcommand per experiment kind."""

from __future__ import annotations

import argparse
import sys

from .errors import ConfigError, RotorError
from .harness import KINDS, load_config, run

_KIND_HELP = {
    "evolve": "forward evolution with observables per kick",
    "reverse-check": "forward evolution, p pivot, backward retrace",
    "otoc": "full correlator decomposition C1/C2/C3 versus time",
    "scan-k": "growth-rate staircase over a list of kick strengths",
    "classical": "dissipative soliton point map trajectory",
    "oracle-check": "dense-matrix verification battery on a small grid",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ptrotor",
        description="PT-symmetric kicked rotor simulator",
    )
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind in KINDS:
        p = sub.add_parser(kind, help=_KIND_HELP[kind])
        p.add_argument("--config", default=None, help="config file (ini-style sections)")
        p.add_argument(
            "--set",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            dest="overrides",
            help="override one config field",
        )
        p.add_argument("--out", default="results", help="output directory")
        p.add_argument("--jobs", type=int, default=1, help="parallel workers for scan-k")
    return parser


def _parse_overrides(pairs: list[str]) -> dict[str, str]:
    overrides = {}
    for pair in pairs:
        if "=" not in pair:
            raise ConfigError(f"--set expects KEY=VALUE, got {pair!r}")
        key, value = pair.split("=", 1)
        overrides[key.strip()] = value.strip()
    return overrides


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(
            kind=args.kind,
            config_path=args.config,
            overrides=_parse_overrides(args.overrides),
            out_dir=args.out,
            jobs=args.jobs,
        )
        written = run(config)
    except RotorError as exc:
        print(f"error[{exc.category}]: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
