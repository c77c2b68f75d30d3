"""Command-line interface: ``twbeam <command> --config run.toml --out dir``.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .assembly import assemble
from .basis import ModalBasis
from .config import ConfigError, RunConfig, load_config
from .csvio import format_value, write_csv
from .metrics import Envelope, cost_function
from .solver import (EigenSolverError, NearSingularError, harmonic_response,
                     natural_frequencies, nondimensionalize_frequency, physical_field)
from .assembly import coupling_vector
from .sweeps import (MODULUS_PRESET, DENSITY_PRESET, CFMap, ResponseContext, SweepResult,
                     cf_map, evaluation_grid, frequency_axis, geometry_sweep,
                     gradient_index_sweep, location_sweep, material_schedule,
                     optimal_region_measure, taper_schedule)
from .verify import format_table, run_verification

log = logging.getLogger("twbeam")

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3
COMMANDS = ("natfreq", "respond", "cfmap", "stack", "sweep", "converge", "verify")


def _beam_metadata(cfg: RunConfig) -> dict:
    b = cfg.beam
    meta = {"length_m": b.length}
    for name in ("width", "thickness", "modulus", "density"):
        p = getattr(b, name)
        meta[name] = (f"{format_value(p.left_value)}/{format_value(p.right_value)} "
                      f"N={format_value(p.gradient_index)}")
    meta["modes"] = cfg.modes
    return meta


def _context(cfg: RunConfig, beam=None) -> ResponseContext:
    beam = beam or cfg.beam
    basis = ModalBasis(cfg.modes, beam.length)
    return ResponseContext(beam, basis, cfg.quad, evaluation_grid(beam.length, cfg.grid_points))


def cmd_natfreq(cfg: RunConfig, out: Path, threads: int) -> int:
    basis = ModalBasis(cfg.modes, cfg.beam.length)
    sys_ = assemble(cfg.beam, basis, cfg.quad)
    u = coupling_vector(basis, cfg.absorber.location)
    w = natural_frequencies(sys_, u, cfg.absorber.stiffness, cfg.eigen_count)
    rows = [(i + 1, wi, wi / (2 * np.pi), nondimensionalize_frequency(wi, cfg.beam))
            for i, wi in enumerate(w)]
    meta = _beam_metadata(cfg) | {"absorber_location_m": cfg.absorber.location,
                                  "absorber_stiffness_N_per_m": cfg.absorber.stiffness}
    path = write_csv(rows, out / "natfreq.csv", ["mode", "omega_rad_per_s", "f_Hz", "omega_bar"], meta)
    for r in rows:
        print(f"mode {r[0]:3d}: {r[2]:12.4f} Hz  (omega_bar {r[3]:.4f})")
    print(f"wrote {path}")
    return EXIT_OK


def cmd_respond(cfg: RunConfig, out: Path, threads: int) -> int:
    ctx = _context(cfg)
    sol = harmonic_response(ctx.system, cfg.absorber, cfg.excitation)
    w = physical_field(sol, ctx.basis, ctx.grid)
    section = cfg.tw_section()
    cf = cost_function(Envelope(ctx.grid, w), section)
    meta = _beam_metadata(cfg) | {
        "frequency_Hz": cfg.excitation.frequency, "amplitude_N": cfg.excitation.amplitude,
        "absorber_location_m": cfg.absorber.location,
        "absorber_stiffness_N_per_m": cfg.absorber.stiffness,
        "absorber_damping_Ns_per_m": cfg.absorber.damping,
        "section_start_m": section.start, "section_end_m": section.end, "cf": cf,
        "condition_estimate": sol.condition_estimate}
    rows = zip(ctx.grid, np.abs(w), w.real, w.imag)
    path = write_csv(rows, out / "response.csv", ["x_m", "abs_W_m", "re_W_m", "im_W_m"], meta)
    print(f"CF over [{section.start:.6g}, {section.end:.6g}] m: {cf:.6f}")
    print(f"wrote {path}")
    return EXIT_OK


def _map_rows(m: CFMap):
    ks, cs = m.k_axis.values, m.c_axis.values
    for i, k in enumerate(ks):
        for j, c in enumerate(cs):
            yield k, c, m.values[i, j]


def _write_map(m: CFMap, path: Path, cfg: RunConfig, extra=None):
    meta = {"frequency_Hz": m.frequency, "absorber_location_m": m.location}
    meta |= _beam_metadata(cfg)
    meta |= {"optimal_fraction": optimal_region_measure(m, cfg.threshold),
             "threshold": cfg.threshold,
             "direct_solve_cells": int(np.count_nonzero(m.flags == 1)),
             "failed_cells": int(np.count_nonzero(m.flags == 2))}
    meta |= extra or {}
    if np.any(m.flags == 2):
        log.warning("%d cells failed (undamped resonance); written as CF=1",
                    int(np.count_nonzero(m.flags == 2)))
    rows = ((k, c, 1.0 if not np.isfinite(v) else v) for k, c, v in _map_rows(m))
    return write_csv(rows, path, ["k_N_per_m", "c_Ns_per_m", "cf"], meta)


def cmd_cfmap(cfg: RunConfig, out: Path, threads: int) -> int:
    ctx = _context(cfg)
    m = cf_map(ctx, None, cfg.absorber.location, cfg.excitation.frequency, cfg.k_axis,
               cfg.c_axis, cfg.tw_section(), cfg.excitation.amplitude, threads=threads)
    path = _write_map(m, out / "cfmap.csv", cfg)
    print(f"min CF {m.min:.6f}, optimal fraction {optimal_region_measure(m, cfg.threshold):.4f}")
    print(f"wrote {path}")
    return EXIT_OK


def cmd_stack(cfg: RunConfig, out: Path, threads: int) -> int:
    ctx = _context(cfg)
    sw = cfg.sweep
    freqs = frequency_axis(sw.f_min, sw.f_max, sw.f_step) if sw else frequency_axis()
    index_rows = []
    for f in freqs:
        m = cf_map(ctx, None, cfg.absorber.location, float(f), cfg.k_axis, cfg.c_axis,
                   cfg.tw_section(), cfg.excitation.amplitude, threads=threads)
        name = f"cfmap_{f:010.3f}Hz.csv"
        _write_map(m, out / "stack" / name, cfg)
        index_rows.append((f, f"stack/{name}", optimal_region_measure(m, cfg.threshold), m.min))
        log.info("f=%g Hz fraction=%.4f", f, index_rows[-1][2])
    path = write_csv(index_rows, out / "stack_index.csv",
                     ["frequency_Hz", "file", "optimal_fraction", "min_cf"], _beam_metadata(cfg))
    print(f"wrote {len(index_rows)} maps; index {path}")
    return EXIT_OK


def run_sweep(cfg: RunConfig, threads: int = 1) -> SweepResult:
    sw = cfg.sweep
    if sw is None or sw.parameter is None:
        raise ConfigError(f"{cfg.source}: [sweep] parameter is required for the sweep command")
    keep = sw.full_maps
    f = cfg.excitation.frequency
    L1 = cfg.absorber.location
    common = dict(k_axis=sw.k_axis, c_axis=sw.c_axis, threshold=cfg.threshold,
                  threads=threads, keep_maps=keep)
    if sw.parameter == "location":
        return location_sweep(cfg.beam, ModalBasis(cfg.modes, cfg.beam.length), f, sw.values,
                              margin=cfg.margin, **common)
    section = cfg.section
    if sw.parameter == "taper":
        b = cfg.beam
        mw = 0.5 * (b.width.left_value + b.width.right_value)
        mh = 0.5 * (b.thickness.left_value + b.thickness.right_value)
        schedule = taper_schedule(sw.values, mw, mh)
        return geometry_sweep(cfg.beam, cfg.modes, f, schedule, L1, values=sw.values,
                              section=section, quad=cfg.quad, **common)
    if sw.parameter in ("modulus", "density"):
        p = getattr(cfg.beam, sw.parameter)
        target = sw.target or (MODULUS_PRESET if sw.parameter == "modulus" else DENSITY_PRESET)
        schedule = material_schedule(sw.parameter, sw.values, (p.left_value, p.right_value), target)
        return geometry_sweep(cfg.beam, cfg.modes, f, schedule, L1, values=sw.values,
                              section=section, quad=cfg.quad, **common)
    return gradient_index_sweep(cfg.beam, cfg.modes, sw.values, f, L1, sw.properties or None,
                                section=section, **common)


def cmd_sweep(cfg: RunConfig, out: Path, threads: int) -> int:
    res = run_sweep(cfg, threads)
    rows = []
    for i, e in enumerate(res.entries):
        rows.append((e.value, e.fraction, e.min_cf, e.label))
        if e.cf_map is not None:
            _write_map(e.cf_map, out / "maps" / f"sweep_{i:03d}.csv", cfg,
                       {"parameter": res.parameter, "value": e.value})
    meta = _beam_metadata(cfg) | {"parameter": cfg.sweep.parameter,
                                  "frequency_Hz": cfg.excitation.frequency,
                                  "absorber_location_m": cfg.absorber.location,
                                  "threshold": cfg.threshold}
    path = write_csv(rows, out / "sweep.csv", ["value", "optimal_fraction", "min_cf", "label"], meta)
    for r in rows:
        print(f"{cfg.sweep.parameter}={r[0]:<12.6g} fraction={r[1]:.4f} min CF={r[2]:.4f}")
    print(f"wrote {path}")
    return EXIT_OK


def convergence_table(cfg: RunConfig):
    modes = cfg.convergence_modes
    n_ref = max(modes)
    env = {}
    for n in modes:
        c = replace(cfg, modes=n, panels=None if cfg.panels is None else cfg.panels)
        ctx = _context(c)
        sol = harmonic_response(ctx.system, cfg.absorber, cfg.excitation)
        env[n] = np.abs(physical_field(sol, ctx.basis, ctx.grid))
    peak = float(np.max(env[n_ref]))
    rows = []
    for n in modes:
        dev = float(np.max(np.abs(env[n] - env[n_ref])))
        rows.append((n, dev, dev / peak))
    return rows, n_ref


def cmd_converge(cfg: RunConfig, out: Path, threads: int) -> int:
    rows, n_ref = convergence_table(cfg)
    meta = _beam_metadata(cfg) | {"frequency_Hz": cfg.excitation.frequency, "reference_modes": n_ref}
    path = write_csv(rows, out / "converge.csv", ["n", "max_deviation_m", "relative_to_peak"], meta)
    for n, dev, rel in rows:
        print(f"n={n:4d}  max deviation {dev:.4e} m  ({100 * rel:.3f}% of peak)")
    print(f"wrote {path}")
    return EXIT_OK


def cmd_verify(cfg: RunConfig | None, out: Path | None, threads: int) -> int:
    modes = cfg.modes if cfg else 100
    checks = run_verification(modes)
    print(format_table(checks))
    if out is not None:
        write_csv([(c.name, c.measured, c.expected, c.tolerance, c.passed) for c in checks],
                  out / "verify.csv", ["check", "measured", "expected", "tolerance", "passed"])
    failed = [c.name for c in checks if not c.passed]
    if failed:
        print("FAILED: " + "; ".join(failed), file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


HANDLERS = {"natfreq": cmd_natfreq, "respond": cmd_respond, "cfmap": cmd_cfmap,
            "stack": cmd_stack, "sweep": cmd_sweep, "converge": cmd_converge}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="twbeam",
        description="Traveling-wave response of graded cantilevers with a spring-damper absorber.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="TOML run configuration (optional for verify)")
    ap.add_argument("--out", help="output directory (overrides [output] dir)")
    ap.add_argument("--threads", type=int, default=1, help="worker threads for sweeps (0 = auto)")
    ap.add_argument("--n", type=int, dest="modes", help="number of trial functions")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args.config) if args.config else None
        if cfg is not None and args.modes is not None:
            if args.modes < 1:
                raise ConfigError("--n must be >= 1")
            cfg = replace(cfg, modes=args.modes)
        if args.command != "verify" and cfg is None:
            raise ConfigError(f"--config is required for '{args.command}'")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.threads < 0:
        print("config error: --threads must be >= 0", file=sys.stderr)
        return EXIT_CONFIG

    out = Path(args.out) if args.out else (Path(cfg.output_dir) if cfg else None)
    try:
        if args.command == "verify":
            return cmd_verify(cfg, out, args.threads)
        return HANDLERS[args.command](cfg, out, args.threads)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NearSingularError, EigenSolverError, FloatingPointError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
