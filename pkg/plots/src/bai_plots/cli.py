"""bai-plot: render a minimax-bai CSV into a deterministic SVG figure.

Usage: ``bai-plot <kind> <input.csv> -o <out.svg> [--ref <float>]``.
Exit codes: 0 success, 1 schema/IO error, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .csvio import SchemaError
from .render import KINDS, PlotJob, render


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bai-plot",
        description="Render minimax-bai CSV output as a deterministic SVG figure.")
    parser.add_argument("kind", choices=KINDS)
    parser.add_argument("input", type=Path, help="CSV file produced by minimax-bai")
    parser.add_argument("-o", "--output", type=Path, required=True,
                        help="output SVG path")
    parser.add_argument("--ref", type=float, default=None,
                        help="horizontal reference value to draw")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    job = PlotJob(input_csv_path=args.input, kind=args.kind,
                  output_path=args.output, reference_value=args.ref)
    try:
        render(job)
    except (SchemaError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
