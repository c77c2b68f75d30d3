"""Lengthwise-graded beam properties.

Every graded quantity (width, thickness, Young's modulus, density) follows
the power law ``P(x) = P_l + (x/L)**N * (P_r - P_l)``.  Units are SI and
are not tracked at runtime.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "PowerLawProfile",
    "BeamConfig",
    "AbsorberConfig",
    "ExcitationConfig",
    "evaluate_profile",
    "section_area",
    "section_inertia",
    "uniform_beam",
    "reference_beam",
]


def _check_domain(x, length):
    x = np.asarray(x, dtype=float)
    # tolerate round-off at the ends of quadrature/evaluation grids
    tol = 1e-12 * length
    if np.any(x < -tol) or np.any(x > length + tol) or not np.all(np.isfinite(x)):
        raise ValueError(f"x must lie in [0, {length}]")
    return np.clip(x, 0.0, length)


@dataclass(frozen=True)
class PowerLawProfile:
    """One graded property with its end values and gradient index."""

    left_value: float
    right_value: float
    gradient_index: float = 1.0

    def __post_init__(self):
        if not (self.left_value > 0 and self.right_value > 0):
            raise ValueError(
                f"profile end values must be positive, got "
                f"{self.left_value}, {self.right_value}")
        if not self.gradient_index > 0:
            raise ValueError(
                f"gradient index must be positive, got {self.gradient_index}")

    @classmethod
    def constant(cls, value: float) -> PowerLawProfile:
        return cls(value, value, 1.0)

    @property
    def is_constant(self) -> bool:
        return self.left_value == self.right_value

    @property
    def ratio(self) -> float:
        """Left-to-right end ratio ``P_l / P_r``."""
        return self.left_value / self.right_value

    def __call__(self, x, length):
        return evaluate_profile(self, x, length)


def evaluate_profile(profile: PowerLawProfile, x, length: float):
    """Evaluate ``profile`` at ``x`` (scalar or array) on a beam of ``length``."""
    x = _check_domain(x, length)
    if profile.is_constant:
        out = np.full_like(x, profile.left_value)
    else:
        s = (x / length) ** profile.gradient_index
        out = profile.left_value + s * (profile.right_value - profile.left_value)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class BeamConfig:
    """Geometry and material of one cantilever, clamped at x = 0.

    Attributes
    ----------
    length : float
        Beam length [m].
    width, thickness : PowerLawProfile
        Cross-section dimensions [m].
    modulus : PowerLawProfile
        Young's modulus [Pa].
    density : PowerLawProfile
        Mass density [kg/m^3].
    """

    length: float
    width: PowerLawProfile
    thickness: PowerLawProfile
    modulus: PowerLawProfile
    density: PowerLawProfile

    def __post_init__(self):
        if not self.length > 0:
            raise ValueError(f"length must be positive, got {self.length}")
        for name in ("width", "thickness", "modulus", "density"):
            if not isinstance(getattr(self, name), PowerLawProfile):
                raise TypeError(f"{name} must be a PowerLawProfile")

    def with_profiles(self, **profiles) -> BeamConfig:
        return replace(self, **profiles)

    def mass_per_length(self, x):
        return self.density(x, self.length) * section_area(self, x)

    def bending_stiffness(self, x):
        return self.modulus(x, self.length) * section_inertia(self, x)


def section_area(beam: BeamConfig, x):
    """Cross-section area b(x) h(x) [m^2]."""
    return beam.width(x, beam.length) * beam.thickness(x, beam.length)


def section_inertia(beam: BeamConfig, x):
    """Second moment of area b(x) h(x)^3 / 12 [m^4]."""
    h = beam.thickness(x, beam.length)
    return beam.width(x, beam.length) * h**3 / 12.0


@dataclass(frozen=True)
class AbsorberConfig:
    """Spring-dashpot pair attached at ``location`` (0 < L1 < L)."""

    location: float
    stiffness: float = 0.0
    damping: float = 0.0

    def __post_init__(self):
        if not self.location > 0:
            raise ValueError(f"absorber location must be positive, got {self.location}")
        if self.stiffness < 0:
            raise ValueError(f"stiffness must be >= 0, got {self.stiffness}")
        if self.damping < 0:
            raise ValueError(f"damping must be >= 0, got {self.damping}")

    def check_within(self, length: float):
        if not self.location < length:
            raise ValueError(
                f"absorber location {self.location} must lie inside (0, {length})")


@dataclass(frozen=True)
class ExcitationConfig:
    """Harmonic tip force. Positive amplitude is the downward unit-force convention."""

    frequency: float
    amplitude: float = 1.0

    def __post_init__(self):
        if not self.frequency > 0:
            raise ValueError(f"frequency must be positive, got {self.frequency}")

    @property
    def omega(self) -> float:
        return 2.0 * np.pi * self.frequency


def uniform_beam(length, width, thickness, modulus, density) -> BeamConfig:
    c = PowerLawProfile.constant
    return BeamConfig(length, c(width), c(thickness), c(modulus), c(density))


def reference_beam() -> BeamConfig:
    """Uniform aluminium beam used for the convergence study (2 m x 30 mm x 10 mm)."""
    return uniform_beam(2.0, 30e-3, 10e-3, 71e9, 2700.0)
