"""Produce the parameter-plane region data and a boundary summary.

Writes the full grid as CSV (same format as `bellgap scan --format csv`)
and prints, per angle, the last mimicked weight and the first violating
weight, i.e. the two boundary curves with the gap band between them.
"""

import argparse
import sys

import numpy as np

from bellgap.regions import ScanConfig, scan, write_csv
from bellgap.states import XI_MAX


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--grid", type=int, default=200, help="points per axis (default 200)")
    ap.add_argument("--out", default="region_scan.csv", help="CSV output path")
    args = ap.parse_args(argv)

    config = ScanConfig(n_xi=args.grid, n_p=args.grid)
    result = scan(config)
    with open(args.out, "w", encoding="utf-8") as fh:
        write_csv(result, fh)

    by_xi: dict[float, list] = {}
    for pt in result.points:
        by_xi.setdefault(pt.xi, []).append(pt)

    print(f"wrote {len(result.points)} points to {args.out}")
    print("xi/pi    modelled<=   violating>   gap width")
    for xi in sorted(by_xi):
        pts = by_xi[xi]
        modelled = [pt.p for pt in pts if pt.lhv_modelled]
        violating = [pt.p for pt in pts if pt.bell_violating]
        top = max(modelled) if modelled else float("nan")
        bottom = min(violating) if violating else float("nan")
        width = bottom - top if violating else 1.0 - top
        print(f"{xi / np.pi:7.4f}  {top:10.4f}  {bottom if violating else float('nan'):10.4f}  {width:10.4f}")

    last = sorted(by_xi)[-1]
    assert abs(last - XI_MAX) < 1e-12
    return 0


if __name__ == "__main__":
    sys.exit(main())
