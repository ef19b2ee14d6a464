#!/usr/bin/env python3
"""Measure peak screen cells against run length on a doubling grid and
fit the scaling exponent.

Typical use:

    python scripts/run_area_law.py counter palin --emin 10 --emax 18 \
        --csv out/area.csv --svg out/area.svg

The exponent should land near 0.5: the replay arena is the only screen
component that grows, and it is sized by the block length b = ceil(sqrt t).
Bookkeeping stays logarithmic; pass --show-book to see it.
"""

from __future__ import annotations

import argparse
import math
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from holosim import area_law_study, render_scaling_svg, report_to_csv
from holosim.samples import counter_input, load_sample, palin_input

INPUT_FOR = {
    "writer2": lambda t: "",
    "sweep": lambda t: "",
    "counter": lambda t: counter_input(20),
    "palin": palin_input,
}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("machines", nargs="*", default=None, help="bundled machine names")
    ap.add_argument("--emin", type=int, default=10, help="smallest exponent, t=2^emin")
    ap.add_argument("--emax", type=int, default=18, help="largest exponent, t=2^emax")
    ap.add_argument("--c-int", type=int, default=2, dest="c_int")
    ap.add_argument("--csv", type=pathlib.Path, default=None)
    ap.add_argument("--svg", type=pathlib.Path, default=None)
    ap.add_argument("--show-book", action="store_true")
    args = ap.parse_args(argv)

    names = args.machines or ["counter", "palin"]
    grid = [1 << e for e in range(args.emin, args.emax + 1)]

    csv_parts = []
    svg_last = None
    for name in names:
        if name not in INPUT_FOR:
            ap.error(f"unknown machine {name!r}, have {sorted(INPUT_FOR)}")
        report = area_law_study(
            load_sample(name), INPUT_FOR[name], grid, c_int=args.c_int
        )
        print(f"== {name} ==")
        for row in report.rows:
            ratio = row.max_screen / (math.sqrt(row.t) * math.log2(row.t))
            line = (
                f"  t={row.t:>8d} b={row.b:>4d} screen={row.max_screen:>6d} "
                f"ratio={ratio:5.3f}"
            )
            if args.show_book:
                line += f" book={row.max_book:>4d}"
            print(line)
        for t, reason in report.failures:
            print(f"  t={t}: FAILED ({reason})")
        if report.exponent is not None:
            print(
                f"  exponent={report.exponent:.4f} residual={report.residual:.4f}"
            )
        csv_parts.append(report_to_csv(report))
        svg_last = report

    if args.csv:
        args.csv.parent.mkdir(parents=True, exist_ok=True)
        header, *_ = csv_parts[0].splitlines()
        body = [header]
        for part in csv_parts:
            body.extend(part.splitlines()[1:])
        args.csv.write_text("\n".join(body) + "\n")
        print(f"wrote {args.csv}")
    if args.svg and svg_last is not None:
        args.svg.parent.mkdir(parents=True, exist_ok=True)
        args.svg.write_text(render_scaling_svg(svg_last))
        print(f"wrote {args.svg} (last machine only)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
