"""Built-in end-to-end verification cases (no external data)."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import cases
from .assembly import assemble, coupling_vector, quadrature_nodes, QuadratureSpec
from .basis import ModalBasis
from .metrics import cost_function, default_tw_section
from .profiles import AbsorberConfig, ExcitationConfig
from .solver import (FactoredBase, dimensional_stiffness, harmonic_response,
                     harmonic_response_rank1, natural_frequencies, nondimensionalize_frequency)
from .sweeps import ResponseContext, cf_map, default_c_axis, default_k_axis

__all__ = ["Check", "run_verification", "format_table",
           "constrained_taper_frequencies", "convergence_deviation",
           "thin_strip_check", "rank1_equivalence", "basis_orthogonality"]


@dataclass
class Check:
    name: str
    measured: float
    expected: float
    tolerance: float
    passed: bool
    note: str = ""


def constrained_taper_frequencies(n_modes: int = 100, fixed_end_larger: bool = True):
    beam = cases.constrained_taper_beam(fixed_end_larger)
    basis = ModalBasis(n_modes, beam.length)
    sys = assemble(beam, basis)
    u = coupling_vector(basis, 0.6 * beam.length)
    out = []
    for kbar in cases.CONSTRAINED_TAPER_STIFFNESS:
        w = natural_frequencies(sys, u, dimensional_stiffness(kbar, beam), 1)[0]
        out.append(nondimensionalize_frequency(w, beam))
    return np.array(out)


def convergence_deviation(beam, absorber, frequency=3400.0, n_test=80, n_ref=100):
    """Max envelope difference between ``n_test`` and ``n_ref`` modes, relative to the reference peak."""
    L1, k, c = absorber
    omega = 2 * np.pi * frequency
    env = {}
    for n in (n_test, n_ref):
        ctx = ResponseContext(beam, ModalBasis(n, beam.length))
        env[n] = np.abs(ctx.field(omega, L1, k, c))
    return float(np.max(np.abs(env[n_test] - env[n_ref])) / np.max(env[n_ref]))


def thin_strip_check(n_modes: int = 100):
    """CF at the tuned absorber and its percentile among the default (k, c) grid."""
    beam = cases.thin_strip_beam()
    L1, k, c = cases.THIN_STRIP_ABSORBER
    f = cases.THIN_STRIP_FREQUENCY
    ctx = ResponseContext(beam, ModalBasis(n_modes, beam.length))
    section = default_tw_section(L1, beam.length)
    cf = cost_function(ctx.envelope(f, L1, k, c), section)
    grid = cf_map(ctx, None, L1, f, default_k_axis(), default_c_axis(), section)
    percentile = float(np.mean(grid.values < cf))
    return cf, percentile, grid


def rank1_equivalence(samples: int = 1000, n_modes: int = 100, seed: int = 0):
    """Largest relative difference between rank-1 and direct solutions over random (k, c, f)."""
    rng = np.random.default_rng(seed)
    beam = cases.reference_beam()
    sys = assemble(beam, ModalBasis(n_modes, beam.length))
    L1 = cases.REFERENCE_ABSORBER[0]
    u = coupling_vector(sys.basis, L1)
    worst = 0.0
    freqs = rng.uniform(300.0, 3400.0, size=max(1, samples // 100))
    per = int(np.ceil(samples / freqs.size))
    for f in freqs:
        ex = ExcitationConfig(float(f))
        base = FactoredBase(sys, ex.omega)
        ks = np.exp(rng.uniform(np.log(1e4), np.log(3e7), per))
        cs = rng.uniform(1.0, 5000.0, per)
        for k, c in zip(ks, cs):
            fast = harmonic_response_rank1(base, u, k, c, ex.omega, sys.tip)
            ref = harmonic_response(sys, AbsorberConfig(L1, k, c), ex)
            err = np.linalg.norm(fast.eta - ref.eta) / np.linalg.norm(ref.eta)
            worst = max(worst, float(err))
    return worst


def basis_orthogonality(n_modes: int = 100, length: float = 2.0):
    """Max deviations of the mass and bending Gram matrices from their analytic diagonals."""
    basis = ModalBasis(n_modes, length)
    x, w = quadrature_nodes(length, QuadratureSpec.default_for(n_modes))
    phi = basis.evaluate(x, 0)
    phixx = basis.evaluate(x, 2)
    gram = (phi * w) @ phi.T / length
    bend = (phixx * w) @ phixx.T
    diag = basis.roots**4 / length**3
    mass_err = float(np.max(np.abs(gram - np.eye(n_modes))))
    bend_err = float(np.max(np.abs(bend - np.diag(diag)) / np.sqrt(np.outer(diag, diag))))
    return mass_err, bend_err


def run_verification(n_modes: int = 100, rank1_samples: int = 1000) -> list[Check]:
    checks = []
    measured = constrained_taper_frequencies(n_modes)
    for kbar, m, gal, exact in zip(cases.CONSTRAINED_TAPER_STIFFNESS, measured,
                                   cases.CONSTRAINED_TAPER_GALERKIN, cases.CONSTRAINED_TAPER_EXACT):
        rel = abs(m / gal - 1)
        checks.append(Check(f"taper k_bar={kbar:g} vs Galerkin", m, gal, 5e-3, rel < 5e-3))
        rel = abs(m / exact - 1)
        checks.append(Check(f"taper k_bar={kbar:g} vs exact", m, exact, 5e-2, rel < 5e-2))

    for name, beam, absorber in (
            ("convergence uniform 80 vs 100", cases.reference_beam(), cases.REFERENCE_ABSORBER),
            ("convergence tapered 80 vs 100", cases.tapered_convergence_beam(),
             cases.TAPERED_CONVERGENCE_ABSORBER)):
        dev = convergence_deviation(beam, absorber)
        checks.append(Check(name, dev, 0.0, 1e-2, dev < 1e-2, "fraction of peak envelope"))

    cf, pct, _ = thin_strip_check(n_modes)
    checks.append(Check("thin strip CF at tuned absorber", cf, 0.0, 0.3, cf < 0.3))
    checks.append(Check("thin strip CF percentile in grid", pct, 0.0, 0.1, pct <= 0.1))

    err = rank1_equivalence(rank1_samples, n_modes)
    checks.append(Check("rank-1 vs direct solve", err, 0.0, 1e-8, err < 1e-8))

    mass_err, bend_err = basis_orthogonality(n_modes)
    checks.append(Check("basis orthonormality", mass_err, 0.0, 1e-6, mass_err < 1e-6))
    checks.append(Check("bending orthogonality", bend_err, 0.0, 1e-6, bend_err < 1e-6))
    return checks


def format_table(checks: list[Check]) -> str:
    width = max(len(c.name) for c in checks)
    lines = [f"{'check':<{width}}  {'measured':>14}  {'expected':>10}  {'tol':>8}  result"]
    for c in checks:
        lines.append(f"{c.name:<{width}}  {c.measured:>14.6g}  {c.expected:>10.6g}  "
                     f"{c.tolerance:>8.2g}  {'PASS' if c.passed else 'FAIL'}")
    n_fail = sum(not c.passed for c in checks)
    lines.append(f"{len(checks) - n_fail}/{len(checks)} checks passed")
    return "\n".join(lines)
