"""Side-view outlines of power-law tapered beams for several gradient indices.

Each row gives the upper and lower surface (+-h/2) and the half-width along
the axis, ready for plotting the beam silhouettes.

    python scripts/beam_profiles.py --index 0.25 0.5 1 2 4 8
"""

import argparse
from pathlib import Path

import numpy as np
from scipy.integrate import trapezoid

from twbeam import cases
from twbeam.csvio import write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--index", type=float, nargs="+", default=[0.25, 0.5, 1.0, 2.0, 4.0, 8.0])
    ap.add_argument("--points", type=int, default=401)
    ap.add_argument("--out", default="out/beam_profiles")
    args = ap.parse_args()
    for n in args.index:
        beam = cases.linear_taper_beam(n)
        x = np.linspace(0.0, beam.length, args.points)
        h = beam.thickness(x, beam.length)
        b = beam.width(x, beam.length)
        path = write_csv(zip(x, h / 2, -h / 2, b / 2), Path(args.out) / f"taper_N{n:g}.csv",
                         ["x_m", "top_m", "bottom_m", "half_width_m"], {"gradient_index": n})
        print(f"N={n:g}: mean thickness {trapezoid(h, x) / beam.length * 1e3:.3f} mm -> {path}")


if __name__ == "__main__":
    main()
