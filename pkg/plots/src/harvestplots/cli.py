"""`plots render --in <csv> --style <style> --out <png|svg>`."""

from __future__ import annotations

import argparse
import sys

from .render import STYLES, PlotSpec, SchemaError, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plots", description="Render becharvest sweep/dispersion CSVs")
    sub = parser.add_subparsers(dest="command", required=True)
    p_render = sub.add_parser("render", help="render one figure")
    p_render.add_argument("--in", dest="input_path", required=True,
                          help="sweep or dispersion CSV file")
    p_render.add_argument("--style", choices=STYLES, required=True)
    p_render.add_argument("--out", dest="output_path", required=True,
                          help="output image (png or svg)")
    p_render.add_argument("--title", default=None)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        spec = PlotSpec(input_path=args.input_path, style=args.style,
                        output_path=args.output_path, title=args.title)
        path = render(spec)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
