"""Galerkin matrices of a graded cantilever on the cantilever trial basis."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .basis import ModalBasis
from .profiles import BeamConfig

__all__ = [
    "QuadratureSpec",
    "AssembledSystem",
    "quadrature_nodes",
    "assemble",
    "coupling_vector",
    "force_vector",
]


@dataclass(frozen=True)
class QuadratureSpec:
    """Composite Gauss-Legendre rule: ``panels`` equal subintervals, ``points_per_panel`` nodes each."""

    panels: int
    points_per_panel: int = 10

    def __post_init__(self):
        if self.panels < 1:
            raise ValueError(f"panels must be >= 1, got {self.panels}")
        if self.points_per_panel < 2:
            raise ValueError(f"points_per_panel must be >= 2, got {self.points_per_panel}")

    @classmethod
    def default_for(cls, n_modes: int) -> QuadratureSpec:
        # phi_i'' phi_j'' oscillates ~2n times over the span; 4n panels x 10 points
        # keeps >= 20 nodes per oscillation
        return cls(panels=4 * n_modes, points_per_panel=10)


def quadrature_nodes(length: float, quad: QuadratureSpec):
    """Nodes and weights of the composite rule on [0, length]."""
    t, w = leggauss(quad.points_per_panel)
    h = length / quad.panels
    left = h * np.arange(quad.panels)
    x = (left[:, None] + 0.5 * h * (t + 1.0)[None, :]).ravel()
    wx = np.tile(0.5 * h * w, quad.panels)
    return x, wx


@dataclass(frozen=True, eq=False)
class AssembledSystem:
    """Beam-only Galerkin matrices.

    Attributes
    ----------
    mass : ndarray (n, n)
        ``int rho A phi_i phi_j dx``.
    stiffness : ndarray (n, n)
        ``int E I phi_i'' phi_j'' dx`` (no absorber contribution).
    tip : ndarray (n,)
        Mode values at the free end, the shape of the tip-force vector.
    """

    beam: BeamConfig
    basis: ModalBasis
    mass: np.ndarray
    stiffness: np.ndarray
    tip: np.ndarray

    @property
    def n(self) -> int:
        return self.basis.count

    def dynamic_matrix(self, omega: float) -> np.ndarray:
        """Undamped, absorber-free ``K0 - omega^2 M`` (real symmetric)."""
        return self.stiffness - omega**2 * self.mass


def _symmetrize(a):
    return 0.5 * (a + a.T)


def assemble(beam: BeamConfig, basis: ModalBasis, quad: QuadratureSpec | None = None) -> AssembledSystem:
    """Mass and bending-stiffness matrices by composite Gauss-Legendre quadrature.

    The stiffness uses the symmetric weak form ``int E I phi_i'' phi_j'' dx``;
    the boundary terms from integrating the strong form by parts vanish for
    clamped-free trial functions.
    """
    if not np.isclose(basis.length, beam.length, rtol=1e-14, atol=0.0):
        raise ValueError(
            f"basis length {basis.length} does not match beam length {beam.length}")
    if quad is None:
        quad = QuadratureSpec.default_for(basis.count)
    x, w = quadrature_nodes(beam.length, quad)

    phi = basis.evaluate(x, 0)
    phi_xx = basis.evaluate(x, 2)
    if not (np.all(np.isfinite(phi)) and np.all(np.isfinite(phi_xx))):
        raise FloatingPointError("non-finite trial function values in assembly")

    mw = w * beam.mass_per_length(x)
    kw = w * beam.bending_stiffness(x)
    mass = _symmetrize((phi * mw) @ phi.T)
    stiffness = _symmetrize((phi_xx * kw) @ phi_xx.T)
    tip = basis.evaluate([beam.length], 0)[:, 0]
    return AssembledSystem(beam, basis, mass, stiffness, tip)


def coupling_vector(basis: ModalBasis, location: float) -> np.ndarray:
    """Mode values at the absorber attachment point, ``u_i = phi_i(L1)``."""
    if not 0.0 < location <= basis.length:
        raise ValueError(f"location {location} outside (0, {basis.length}]")
    return basis.evaluate([location], 0)[:, 0]


def force_vector(basis: ModalBasis, amplitude: float = 1.0) -> np.ndarray:
    """Generalized force of a tip point load: ``q_j = F phi_j(L)``."""
    return amplitude * basis.evaluate([basis.length], 0)[:, 0]
