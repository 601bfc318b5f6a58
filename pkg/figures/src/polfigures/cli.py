"""figures <kind> --in <csv> [--in <csv> ...] --out <png|svg>"""

import argparse
import sys

from .render import KINDS, FigureError, FigureSpec, render


def build_parser():
    parser = argparse.ArgumentParser(
        prog="figures",
        description="Render pulsepol CSV outputs (sweep, trace, comparison, "
                    "scan files) to PNG or SVG figures.",
    )
    parser.add_argument("kind", choices=KINDS)
    parser.add_argument("--in", dest="inputs", action="append", required=True,
                        nargs="+", help="input CSV (repeatable for trace)")
    parser.add_argument("--out", required=True, help="output .png or .svg")
    parser.add_argument("--title", default="")
    parser.add_argument("--x", dest="x_column", default="",
                        help="x column for scan figures")
    parser.add_argument("--y", dest="y_column", default="",
                        help="y column for scan figures")
    parser.add_argument("--label", dest="label_column", default="",
                        help="grouping column for scan figures")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    inputs = [path for group in args.inputs for path in group]
    try:
        spec = FigureSpec(inputs=inputs, kind=args.kind, out=args.out,
                          title=args.title, x_column=args.x_column,
                          y_column=args.y_column,
                          label_column=args.label_column)
        render(spec)
    except (FigureError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
