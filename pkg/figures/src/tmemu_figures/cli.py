"""Batch figure renderer: one image per (csv, kind) pair.

Usage:
    tmemu-figures --out-dir figs histogram=run/behaviour.csv \\
        boxplot=run/counts.csv function-plot=run/function.csv
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import KINDS, FigureError, FigureSpec, render


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="tmemu-figures", description=__doc__)
    parser.add_argument(
        "specs",
        nargs="+",
        metavar="KIND=CSV",
        help=f"figure kind ({'|'.join(KINDS)}) and its input CSV",
    )
    parser.add_argument("--out-dir", default=".", help="directory for images")
    parser.add_argument("--bin-width", type=int, default=4)
    parser.add_argument("--format", default="png", choices=("png", "svg", "pdf"))
    args = parser.parse_args(argv)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        for item in args.specs:
            kind, sep, csv_path = item.partition("=")
            if not sep:
                raise FigureError(f"bad spec {item!r}; want KIND=CSV")
            stem = Path(csv_path).stem
            spec = FigureSpec(
                csv_path=csv_path,
                kind=kind,
                out_path=str(out_dir / f"{kind}-{stem}.{args.format}"),
                bin_width=args.bin_width,
            )
            print(render(spec))
    except (FigureError, OSError) as e:
        print(f"tmemu-figures: error: {e}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
