#!/usr/bin/env python3
"""Writes data/lens_vectors.csv: fisheye lens reference points.

r' = R * m * (r/R) / (1 + (m - 1) * (r/R)) for 0 < r < R, identity otherwise.
"""
import csv
import math
import pathlib
import sys

FOCI = [(500.0, 500.0, 200.0), (120.0, 340.0, 75.0)]
FRACTIONS = [0.0, 0.1, 0.25, 0.5, 0.9, 1.0, 2.0]
MAGNIFICATIONS = [1.0, 2.0, 3.0, 5.0]
ANGLES = [0.0, 1.1]


def lens(fx, fy, radius, m, px, py):
    dx, dy = px - fx, py - fy
    r = math.hypot(dx, dy)
    if r == 0.0 or r >= radius:
        return px, py
    t = r / radius
    scale = radius * m * t / (1.0 + (m - 1.0) * t) / r
    return fx + dx * scale, fy + dy * scale


def main(out):
    with open(out, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["fx", "fy", "radius", "magnification", "px", "py", "ex", "ey"])
        for fx, fy, radius in FOCI:
            for m in MAGNIFICATIONS:
                for frac in FRACTIONS:
                    for a in ANGLES[:1] if frac == 0.0 else ANGLES:
                        px = fx + frac * radius * math.cos(a)
                        py = fy + frac * radius * math.sin(a)
                        ex, ey = lens(fx, fy, radius, m, px, py)
                        w.writerow([repr(v) for v in (fx, fy, radius, m, px, py, ex, ey)])


if __name__ == "__main__":
    root = pathlib.Path(__file__).resolve().parents[2]
    main(sys.argv[1] if len(sys.argv) > 1 else root / "data" / "lens_vectors.csv")
