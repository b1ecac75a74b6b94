"""One figure per invocation: pick a kind, point at CSVs, name the image."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import FigureSpec, SchemaError, render

_KIND_BY_COMMAND = {
    "power": "power_vs_eps",
    "coverage": "coverage_vs_distance",
    "rate": "rate_vs_eps",
    "cost": "cost_vs_eps",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="upc-figures",
        description="Regenerate trade-off figures from upc-sim CSV output",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    for name, kind in _KIND_BY_COMMAND.items():
        sub = commands.add_parser(name, help=f"render a {kind} figure")
        sub.add_argument("--csv", action="append", required=True, metavar="FILE",
                         help="input CSV (repeat for multi-curve coverage figures)")
        sub.add_argument("--out", required=True, metavar="IMAGE",
                         help="output image path (.png or .svg)")
        sub.add_argument("--title", default=None)
        sub.add_argument("--xlabel", default=None)
        sub.add_argument("--ylabel", default=None)
        sub.set_defaults(kind=kind)
    return parser


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 1
    try:
        spec = FigureSpec(
            kind=args.kind,
            csv_paths=tuple(Path(p) for p in args.csv),
            out_path=Path(args.out),
            title=args.title,
            xlabel=args.xlabel,
            ylabel=args.ylabel,
        )
        path = render(spec)
    except (FileNotFoundError, SchemaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"{args.kind}: {len(args.csv)} input(s) -> {path}")
    return 0


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
