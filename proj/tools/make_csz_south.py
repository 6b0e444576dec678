#!/usr/bin/env python3
"""Writes data/csz_south.csv: a synthetic 540-patch megathrust geometry.

8 along-strike segments (36 columns in total) by 15 down-dip rows, in a
local Cartesian frame (x east, y north, meters) with centroid depths.
Dip steepens with depth from 7 to 13 degrees.
"""
import argparse
import csv
import math

SEGMENT_STRIKES = [352.0, 355.0, 358.0, 2.0, 5.0, 8.0, 4.0, 0.0]
SEGMENT_COLUMNS = [5, 4, 5, 4, 5, 4, 5, 4]
ROWS = 15
COLUMN_LENGTH = 325.0e3 / 36
WIDTH = 100.0e3
TOP_DEPTH = 2.0e3
DIP_TOP, DIP_BOTTOM = 7.0, 13.0
RAKE = 90.0


def patches():
    row_width = WIDTH / ROWS
    dips = [DIP_TOP + (DIP_BOTTOM - DIP_TOP) * r / (ROWS - 1) for r in range(ROWS)]
    tx, ty = 0.0, 0.0  # trench point at the start of the current column
    for strike, ncol in zip(SEGMENT_STRIKES, SEGMENT_COLUMNS):
        s = math.radians(strike)
        along = (math.sin(s), math.cos(s))
        down = (math.cos(s), -math.sin(s))
        for _ in range(ncol):
            mx = tx + 0.5 * COLUMN_LENGTH * along[0]
            my = ty + 0.5 * COLUMN_LENGTH * along[1]
            horiz, depth = 0.0, TOP_DEPTH
            for dip in dips:
                d = math.radians(dip)
                ch = horiz + 0.5 * row_width * math.cos(d)
                cd = depth + 0.5 * row_width * math.sin(d)
                yield (mx + ch * down[0], my + ch * down[1], cd, strike, dip, RAKE,
                       COLUMN_LENGTH, row_width)
                horiz += row_width * math.cos(d)
                depth += row_width * math.sin(d)
            tx += COLUMN_LENGTH * along[0]
            ty += COLUMN_LENGTH * along[1]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="data/csz_south.csv")
    args = ap.parse_args()
    rows = list(patches())
    with open(args.out, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["x_m", "y_m", "depth_m", "strike_deg", "dip_deg", "rake_deg",
                    "length_m", "width_m"])
        for row in rows:
            w.writerow([f"{v:.3f}" for v in row])
    depths = [r[2] for r in rows]
    print(f"{len(rows)} patches, centroid depth {min(depths):.1f}..{max(depths):.1f} m")


if __name__ == "__main__":
    main()
