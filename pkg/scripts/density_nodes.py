"""Node positions of the absorber-free response as the density grading grows.

Ends move linearly from uniform 2700 kg/m^3 toward 8640/540 kg/m^3; for each
step the script lists the interior nodes and the node nearest the absorber
(the clamped end counted as node 1), and writes the response envelope.

    python scripts/density_nodes.py --t 0.2 0.508 0.572 0.968
"""

import argparse
from pathlib import Path

import numpy as np

from twbeam import cases
from twbeam.basis import ModalBasis
from twbeam.csvio import write_csv
from twbeam.sweeps import DENSITY_PRESET, ResponseContext, apply_endpoints, interpolated_endpoints, node_locations


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--t", type=float, nargs="+", default=[0.0, 0.2, 0.508, 0.572, 0.968])
    ap.add_argument("--frequency", type=float, default=3400.0)
    ap.add_argument("--location", type=float, default=0.8)
    ap.add_argument("--out", default="out/density_nodes")
    args = ap.parse_args()
    base = cases.reference_beam()
    basis = ModalBasis(100, base.length)
    summary = []
    for t in args.t:
        ends = interpolated_endpoints((2700.0, 2700.0), DENSITY_PRESET, t)
        beam = apply_endpoints(base, {"density": ends})
        ctx = ResponseContext(beam, basis)
        nodes = node_locations(ctx, None, args.frequency)
        j = int(np.argmin(np.abs(nodes - args.location)))
        ratio = ends[0] / ends[1]
        summary.append((t, ratio, nodes.size, j + 2, nodes[j]))
        w = ctx.field(2 * np.pi * args.frequency, args.location, 0.0, 0.0)
        write_csv(zip(ctx.grid, w.real), Path(args.out) / f"response_t{t:g}.csv", ["x_m", "W_m"],
                  {"density_left": ends[0], "density_right": ends[1]})
        print(f"t={t:<6g} ratio {ratio:8.4f}: {nodes.size} interior nodes, node {j + 2} at "
              f"{nodes[j]:.4f} m (absorber at {args.location} m)")
    write_csv(summary, Path(args.out) / "summary.csv",
              ["t", "density_ratio", "interior_nodes", "nearest_node_ordinal", "nearest_node_m"])


if __name__ == "__main__":
    main()
