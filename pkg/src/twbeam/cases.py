"""Canonical beam configurations used by the verification runner, tests and scripts."""

from __future__ import annotations

from .profiles import BeamConfig, PowerLawProfile, reference_beam, uniform_beam

__all__ = [
    "REFERENCE_ABSORBER",
    "TAPERED_CONVERGENCE_ABSORBER",
    "reference_beam",
    "thin_strip_beam",
    "THIN_STRIP_ABSORBER",
    "THIN_STRIP_FREQUENCY",
    "tapered_convergence_beam",
    "linear_taper_beam",
    "modulus_graded_beam",
    "density_graded_beam",
    "constrained_taper_beam",
    "CONSTRAINED_TAPER_STIFFNESS",
    "CONSTRAINED_TAPER_EXACT",
    "CONSTRAINED_TAPER_GALERKIN",
]

# (L1 [m], k [N/m], c [N s/m]) on the 2 m uniform beam
REFERENCE_ABSORBER = (0.8, 5.625e6, 875.0)
TAPERED_CONVERGENCE_ABSORBER = (0.8, 1.875e6, 2187.5)

# thin aluminium strip with an absorber tuned for 1300 Hz
THIN_STRIP_ABSORBER = (0.4 * 1.5812, 71e3, 9.0)
THIN_STRIP_FREQUENCY = 1300.0

# k L^3 / EI(L) and the fundamental omega sqrt(rho A(L) L^4 / EI(L)) of a linearly
# tapered cantilever (width and thickness 1.4x larger at the clamp) with a
# grounded spring at 0.6 L: exact values from Craver & Jampala (JSV 166, 1993)
# and the Galerkin values obtained with 100 cantilever trial functions.
CONSTRAINED_TAPER_STIFFNESS = (0.0, 1.0, 10.0, 50.0, 100.0, 500.0, 505.8, 1000.0)
CONSTRAINED_TAPER_EXACT = (5.6483, 5.7172, 6.2943, 8.2427, 9.9085, 14.8324, 14.8629, 16.3405)
CONSTRAINED_TAPER_GALERKIN = (5.6478, 5.7072, 6.2099, 7.9580, 9.5057, 14.4252, 14.4578, 16.0735)


def thin_strip_beam() -> BeamConfig:
    """1.5812 m x 12.7 mm x 1.5875 mm aluminium strip."""
    return uniform_beam(1.5812, 12.7e-3, 1.5875e-3, 71e9, 2700.0)


def tapered_convergence_beam() -> BeamConfig:
    """Reference-beam material, width 45 -> 15 mm and thickness 15 -> 5 mm (A(0) = 9 A(L))."""
    b = reference_beam()
    return b.with_profiles(width=PowerLawProfile(45e-3, 15e-3), thickness=PowerLawProfile(15e-3, 5e-3))


def linear_taper_beam(gradient_index: float = 1.0) -> BeamConfig:
    """Width 48 -> 12 mm, thickness 16 -> 4 mm (A(0) = 16 A(L))."""
    b = reference_beam()
    return b.with_profiles(width=PowerLawProfile(48e-3, 12e-3, gradient_index),
                           thickness=PowerLawProfile(16e-3, 4e-3, gradient_index))


def modulus_graded_beam(gradient_index: float = 1.0) -> BeamConfig:
    """Young's modulus 227.2 -> 14.2 GPa."""
    return reference_beam().with_profiles(modulus=PowerLawProfile(227.2e9, 14.2e9, gradient_index))


def density_graded_beam(gradient_index: float = 1.0) -> BeamConfig:
    """Density 8640 -> 540 kg/m^3."""
    return reference_beam().with_profiles(density=PowerLawProfile(8640.0, 540.0, gradient_index))


def constrained_taper_beam(fixed_end_larger: bool = True) -> BeamConfig:
    """Unit-length linearly tapered cantilever with a 1.4 end ratio on width and thickness.

    With ``fixed_end_larger`` the clamp section is 1.4x the free-end section;
    this is the orientation that reproduces the tabulated frequencies.
    """
    b, h, r = 0.03, 0.01, 1.4
    if fixed_end_larger:
        width, thickness = PowerLawProfile(r * b, b), PowerLawProfile(r * h, h)
    else:
        width, thickness = PowerLawProfile(b, r * b), PowerLawProfile(h, r * h)
    return BeamConfig(1.0, width, thickness, PowerLawProfile.constant(70e9),
                      PowerLawProfile.constant(2700.0))
