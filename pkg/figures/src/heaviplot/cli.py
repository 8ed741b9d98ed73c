"""plot: render one figure from experiment CSV output."""

from __future__ import annotations

import argparse
import sys

from .jobs import COLOR_SCALES, KINDS, FigureJob, JobError
from .render import render


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="plot",
        description="Render a heatmap, difference heatmap, or singular-value "
        "spectrum from the inversion CLI's CSV files.",
    )
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--in", dest="in_path", required=True, metavar="CSV",
                   help="matrix CSV (heatmaps) or neuron,m,sigma CSV (spectrum)")
    p.add_argument("--in2", dest="in2_path", metavar="CSV",
                   help="reference matrix, subtracted for diff_heatmap")
    p.add_argument("--out", required=True, help="figure file (.png or .svg)")
    p.add_argument("--title")
    p.add_argument("--color-scale", default="shared_symmetric_about_zero",
                   choices=COLOR_SCALES)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        job = FigureJob(
            kind=args.kind,
            path=args.in_path,
            path2=args.in2_path,
            out=args.out,
            color_scale=args.color_scale,
            title=args.title,
        )
        info = render(job)
    except (JobError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {info['out']}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
