"""Natural frequencies and steady-state harmonic response.

Under the tip force ``F exp(i w t)`` the generalized amplitudes solve::

    [K0 - w^2 M + (k + i w c) u u^T] eta = F g

where ``u`` holds the mode values at the absorber and ``g`` at the tip.
For (k, c) sweeps at fixed ``w`` the absorber term is a rank-1 update of
the real matrix ``A0 = K0 - w^2 M``; factoring ``A0`` once reduces each
cell to a scalar correction (Sherman-Morrison).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg
from scipy.linalg import lapack

from .assembly import AssembledSystem, coupling_vector
from .basis import ModalBasis
from .profiles import AbsorberConfig, BeamConfig, ExcitationConfig

__all__ = [
    "RCOND_LIMIT",
    "NearSingularError",
    "EigenSolverError",
    "HarmonicSolution",
    "FactoredBase",
    "natural_frequencies",
    "nondimensionalize_frequency",
    "nondimensionalize_stiffness",
    "dimensional_stiffness",
    "harmonic_response",
    "harmonic_response_rank1",
    "physical_field",
]

RCOND_LIMIT = 1e-12


class NearSingularError(ArithmeticError):
    """The dynamic matrix is numerically singular (undamped resonance)."""

    def __init__(self, omega, rcond):
        super().__init__(
            f"near-singular dynamic matrix at omega={omega:.6g} rad/s "
            f"(reciprocal condition {rcond:.3g} < {RCOND_LIMIT:g})")
        self.omega = omega
        self.rcond = rcond


class EigenSolverError(ArithmeticError):
    pass


@dataclass(frozen=True, eq=False)
class HarmonicSolution:
    """Complex steady-state generalized amplitudes at one frequency."""

    omega: float
    eta: np.ndarray
    condition_estimate: float
    method: str = "direct"

    @property
    def frequency(self) -> float:
        return self.omega / (2.0 * np.pi)


def _rcond(lu, anorm):
    gecon, = lapack.get_lapack_funcs(("gecon",), (lu,))
    rcond, info = gecon(lu, anorm, norm="1")
    if info != 0:
        raise ArithmeticError(f"LAPACK gecon failed with info={info}")
    return float(rcond)


def _factor(a):
    with np.errstate(all="ignore"):
        lu, piv = linalg.lu_factor(a, check_finite=True)
    anorm = np.linalg.norm(a, 1)
    if not np.all(np.isfinite(lu)) or np.any(np.diag(lu) == 0):
        return lu, piv, 0.0
    return lu, piv, _rcond(lu, anorm)


def natural_frequencies(sys: AssembledSystem, u=None, k: float = 0.0, count: int = 10) -> np.ndarray:
    """Lowest ``count`` undamped natural frequencies [rad/s], ascending.

    Only the lower part of the spectrum is trustworthy: the top ~20% of the
    Galerkin eigenvalues are discretisation artefacts.
    """
    if k < 0:
        raise ValueError(f"stiffness must be >= 0, got {k}")
    count = int(count)
    if not 1 <= count <= sys.n:
        raise ValueError(f"count must be in 1..{sys.n}, got {count}")
    kmat = sys.stiffness
    if k and u is not None:
        u = np.asarray(u, dtype=float)
        kmat = kmat + k * np.outer(u, u)
    try:
        lam = linalg.eigh(kmat, sys.mass, eigvals_only=True,
                          subset_by_index=[0, count - 1])
    except (linalg.LinAlgError, ValueError) as exc:
        raise EigenSolverError(f"generalized eigenproblem failed: {exc}") from exc
    if np.any(lam <= 0) or not np.all(np.isfinite(lam)):
        raise EigenSolverError("non-positive or non-finite eigenvalue encountered")
    return np.sqrt(lam)


def _end_values(beam: BeamConfig):
    L = beam.length
    rho = beam.density(L, L)
    area = beam.width(L, L) * beam.thickness(L, L)
    ei = beam.modulus(L, L) * beam.width(L, L) * beam.thickness(L, L) ** 3 / 12.0
    return rho * area, ei


def nondimensionalize_frequency(omega, beam: BeamConfig):
    """``omega sqrt(rho A(L) L^4 / E I(L))`` using free-end properties."""
    m, ei = _end_values(beam)
    return omega * np.sqrt(m * beam.length**4 / ei)


def nondimensionalize_stiffness(k, beam: BeamConfig):
    """``k L^3 / E I(L)``."""
    _, ei = _end_values(beam)
    return k * beam.length**3 / ei


def dimensional_stiffness(k_bar, beam: BeamConfig):
    """Inverse of :func:`nondimensionalize_stiffness`."""
    _, ei = _end_values(beam)
    return k_bar * ei / beam.length**3


def harmonic_response(sys: AssembledSystem, absorber: AbsorberConfig,
                      excitation: ExcitationConfig, check: bool = True) -> HarmonicSolution:
    """Direct dense complex solve of the steady-state system.

    Raises :class:`NearSingularError` when the reciprocal condition number
    drops below ``RCOND_LIMIT`` (undamped resonance) unless ``check`` is off.
    """
    absorber.check_within(sys.beam.length)
    w = excitation.omega
    u = coupling_vector(sys.basis, absorber.location)
    z = absorber.stiffness + 1j * w * absorber.damping
    a = sys.dynamic_matrix(w) + z * np.outer(u, u)
    q = excitation.amplitude * sys.tip
    lu, piv, rcond = _factor(a.astype(complex))
    if rcond < RCOND_LIMIT:
        if check:
            raise NearSingularError(w, rcond)
        eta = np.full(sys.n, np.nan + 0j)
    else:
        eta = linalg.lu_solve((lu, piv), q.astype(complex))
    return HarmonicSolution(w, eta, rcond, "direct")


class FactoredBase:
    """Reusable LU factorisation of ``K0 - w^2 M`` with the two base solves.

    ``a = A0^-1 q`` and ``b = A0^-1 u`` are real, so a (k, c) cell reduces to
    ``eta = a - gamma b`` with
    ``gamma = z (u.a) / (1 + z (u.b))`` and ``z = k + i w c``.
    """

    def __init__(self, sys: AssembledSystem, omega: float):
        self.sys = sys
        self.omega = float(omega)
        self.lu, self.piv, self.rcond = _factor(sys.dynamic_matrix(self.omega))
        self.usable = self.rcond >= RCOND_LIMIT
        self._cache = {}

    def solve(self, rhs) -> np.ndarray:
        if not self.usable:
            raise NearSingularError(self.omega, self.rcond)
        return linalg.lu_solve((self.lu, self.piv), np.asarray(rhs, dtype=float))

    def base_solutions(self, u, q):
        key = (np.asarray(u, float).tobytes(), np.asarray(q, float).tobytes())
        if key not in self._cache:
            a = self.solve(q)
            b = self.solve(u)
            self._cache = {key: (a, b, float(u @ a), float(u @ b))}
        return self._cache[key]

    def gamma(self, u, q, k, c):
        """Scalar correction(s) and the Sherman-Morrison denominator(s)."""
        _, _, ua, ub = self.base_solutions(u, q)
        z = np.asarray(k, dtype=float) + 1j * self.omega * np.asarray(c, dtype=float)
        denom = 1.0 + z * ub
        with np.errstate(all="ignore"):
            g = z * ua / denom
        return g, denom


def _denominator_ok(denom, z_ub):
    return np.abs(denom) > 1e-12 * (1.0 + np.abs(z_ub))


def harmonic_response_rank1(base: FactoredBase, u, k: float, c: float, omega: float, q) -> HarmonicSolution:
    """Same solution as :func:`harmonic_response` via the rank-1 update of ``base``.

    Falls back to a direct solve (``method='fallback'``) when the base is
    singular or the update denominator vanishes.
    """
    if not np.isclose(omega, base.omega, rtol=1e-15, atol=0.0):
        raise ValueError(f"base factorised at omega={base.omega}, requested {omega}")
    u = np.asarray(u, dtype=float)
    q = np.asarray(q, dtype=float)
    if base.usable:
        a, b, _, ub = base.base_solutions(u, q)
        g, denom = base.gamma(u, q, k, c)
        z = k + 1j * omega * c
        if _denominator_ok(denom, z * ub):
            eta = a - g * b
            return HarmonicSolution(omega, eta, base.rcond, "rank1")
    a_full = base.sys.dynamic_matrix(omega) + (k + 1j * omega * c) * np.outer(u, u)
    lu, piv, rcond = _factor(a_full.astype(complex))
    if rcond < RCOND_LIMIT:
        raise NearSingularError(omega, rcond)
    eta = linalg.lu_solve((lu, piv), q.astype(complex))
    return HarmonicSolution(omega, eta, rcond, "fallback")


def physical_field(solution: HarmonicSolution, basis: ModalBasis, grid) -> np.ndarray:
    """Complex field ``W(x) = sum_i eta_i phi_i(x)``; the envelope is ``|W|``."""
    phi = basis.evaluate(grid, 0)
    return solution.eta @ phi
