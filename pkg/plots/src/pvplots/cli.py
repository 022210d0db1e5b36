"""render: turn a figure CSV into a deterministic PNG.

Usage: render --fig N --in table.csv --out figure.png
Exits nonzero with a schema diagnostic when the CSV does not match the
figure's expected columns; on success prints one JSON line with the
recorded axis limits.
"""

from __future__ import annotations

import argparse
import json
import sys

from .render import FigureSpec, SchemaError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="render", description=__doc__)
    parser.add_argument("--fig", type=int, required=True, help="figure id, 1..4")
    parser.add_argument("--in", dest="input_csv", required=True, help="input CSV table")
    parser.add_argument("--out", dest="output_image", required=True, help="output PNG path")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = render(
            FigureSpec(
                input_csv=args.input_csv,
                figure_id=args.fig,
                output_image=args.output_image,
            )
        )
    except SchemaError as exc:
        print(json.dumps({"error": {"kind": "schema", "message": str(exc)}}), file=sys.stderr)
        return 2
    print(
        json.dumps(
            {
                "written": str(result.output_image),
                "figure": result.figure_id,
                "ylim": list(result.ylim),
                "series": list(result.series),
            }
        )
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
