"""Optimal-region fraction against absorber location, taper, grading ratio and gradient index.

    python scripts/parameter_sweeps.py location taper modulus density index
"""

import argparse
from pathlib import Path

import numpy as np

from twbeam import cases
from twbeam.basis import ModalBasis
from twbeam.csvio import write_csv
from twbeam.sweeps import (geometry_sweep, gradient_index_sweep, location_sweep, material_schedule,
                           taper_schedule)

F = 3400.0
L1 = 0.8


def run(kind, modes, threads):
    beam = cases.reference_beam()
    if kind == "location":
        locs = np.round(np.arange(0.2, 1.5001, 0.05), 10)
        return location_sweep(beam, ModalBasis(modes, beam.length), F, locs, threads=threads)
    if kind == "taper":
        ratios = np.round(np.arange(1.0, 4.0001, 0.1), 10)
        return geometry_sweep(beam, modes, F, taper_schedule(ratios), L1, values=ratios, threads=threads)
    if kind in ("modulus", "density"):
        ratios = np.round(np.arange(1.0, 16.0001, 0.5), 10)
        return geometry_sweep(beam, modes, F, material_schedule(kind, ratios), L1, values=ratios,
                              threads=threads)
    rows = []
    for label, graded, loc in (("taper", cases.linear_taper_beam(), L1),
                               ("modulus", cases.modulus_graded_beam(), L1),
                               ("modulus_0.42L", cases.modulus_graded_beam(), 0.84),
                               ("density", cases.density_graded_beam(), L1)):
        res = gradient_index_sweep(graded, modes, [0.25, 0.5, 1, 2, 3, 4, 6, 8], F, loc, threads=threads)
        for e in res.entries:
            e.label = label
        rows.append(res)
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("kinds", nargs="+", choices=["location", "taper", "modulus", "density", "index"])
    ap.add_argument("--modes", type=int, default=100)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out", default="out/parameter_sweeps")
    args = ap.parse_args()
    for kind in args.kinds:
        results = run(kind, args.modes, args.threads)
        results = results if isinstance(results, list) else [results]
        rows = [(e.value, e.fraction, e.min_cf, e.label) for r in results for e in r.entries]
        path = write_csv(rows, Path(args.out) / f"{kind}.csv", ["value", "optimal_fraction", "min_cf", "label"],
                         {"frequency_Hz": F})
        for v, fr, mn, lab in rows:
            print(f"{kind:8s} {lab:14s} {v:8.4g}  fraction {fr:.4f}  min CF {mn:.4f}")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
