"""Envelope convergence against the number of trial functions.

Writes one CSV per beam: max |W| deviation from the largest n, and the
envelope itself at every n for plotting.

    python scripts/convergence_study.py --out out/convergence
"""

import argparse
from pathlib import Path

import numpy as np

from twbeam import cases
from twbeam.basis import ModalBasis
from twbeam.csvio import write_csv
from twbeam.sweeps import ResponseContext

BEAMS = {
    "uniform": (cases.reference_beam, cases.REFERENCE_ABSORBER),
    "taper9": (cases.tapered_convergence_beam, cases.TAPERED_CONVERGENCE_ABSORBER),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="out/convergence")
    ap.add_argument("--frequency", type=float, default=3400.0)
    ap.add_argument("--modes", type=int, nargs="+", default=[20, 40, 60, 80, 100])
    args = ap.parse_args()
    out = Path(args.out)
    omega = 2 * np.pi * args.frequency

    for name, (make, (L1, k, c)) in BEAMS.items():
        beam = make()
        env = {}
        for n in args.modes:
            ctx = ResponseContext(beam, ModalBasis(n, beam.length))
            env[n] = np.abs(ctx.field(omega, L1, k, c))
        grid = ctx.grid
        ref = env[max(args.modes)]
        rows = [(n, np.max(np.abs(env[n] - ref)), np.max(np.abs(env[n] - ref)) / ref.max())
                for n in args.modes]
        write_csv(rows, out / f"{name}_deviation.csv", ["n", "max_deviation_m", "relative_to_peak"],
                  {"frequency_Hz": args.frequency})
        write_csv(zip(grid, *(env[n] for n in args.modes)), out / f"{name}_envelopes.csv",
                  ["x_m"] + [f"abs_W_n{n}_m" for n in args.modes])
        for n, dev, rel in rows:
            print(f"{name:8s} n={n:4d} deviation {100 * rel:.3f}% of peak")


if __name__ == "__main__":
    main()
