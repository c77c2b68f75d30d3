"""Clamped-free (cantilever) uniform-beam eigenfunctions used as trial functions.

The textbook shape ``cosh(bx) - cos(bx) - s (sinh(bx) - sin(bx))`` loses all
precision beyond the first dozen modes because the growing hyperbolic terms
cancel.  Here the hyperbolic part is rewritten with decaying exponentials
only::

    phi(xi) = a exp(-b xi) + r exp(-b (1 - xi)) - cos(b xi) + s sin(b xi)

with ``a = (1 + s)/2`` and ``r = (1 - s) exp(b) / 2`` evaluated in closed
form, so every term is bounded by ~2 for any mode number.  The shapes are
normalised so that ``int_0^L phi_i^2 dx = L``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

__all__ = [
    "ModalBasis",
    "characteristic_residual",
    "characteristic_roots",
    "eval_phi",
    "eval_phi_xx",
]


def characteristic_residual(beta):
    """``cos(b) + 1/cosh(b)``, the overflow-free form of ``cos(b) cosh(b) + 1``."""
    beta = np.asarray(beta, dtype=float)
    e = np.exp(-beta)
    return np.cos(beta) + 2.0 * e / (1.0 + e * e)


@lru_cache(maxsize=None)
def _roots(n: int) -> tuple:
    out = []
    for i in range(1, n + 1):
        # exactly one root in ((i-1) pi, i pi); the residual alternates sign at multiples of pi
        lo, hi = (i - 1) * np.pi, i * np.pi
        out.append(brentq(lambda b: float(characteristic_residual(b)), lo, hi,
                          xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200))
    return tuple(out)


def characteristic_roots(n: int) -> np.ndarray:
    """First ``n`` roots of ``cos(b) cosh(b) = -1``, ascending."""
    if n < 1:
        raise ValueError(f"need at least one root, got n={n}")
    return np.array(_roots(int(n)))


def _coefficients(beta):
    e = np.exp(-beta)
    s, c = np.sin(beta), np.cos(beta)
    d = 1.0 - e * e + 2.0 * e * s
    sigma = (1.0 + e * e + 2.0 * e * c) / d
    a = 0.5 * (1.0 + sigma)
    r = (s - c - e) / d
    return sigma, a, r


@dataclass(frozen=True, eq=False)
class ModalBasis:
    """The first ``count`` cantilever modes on a beam of ``length``."""

    count: int
    length: float
    roots: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.count < 1:
            raise ValueError(f"count must be >= 1, got {self.count}")
        if not self.length > 0:
            raise ValueError(f"length must be positive, got {self.length}")
        beta = characteristic_roots(self.count)
        beta.setflags(write=False)
        object.__setattr__(self, "roots", beta)
        sigma, a, r = _coefficients(beta)
        object.__setattr__(self, "_sigma", sigma)
        object.__setattr__(self, "_a", a)
        object.__setattr__(self, "_r", r)

    @property
    def wavenumbers(self) -> np.ndarray:
        """``beta_i / L`` [1/m]."""
        return self.roots / self.length

    def evaluate(self, x, derivative: int = 0, modes=None) -> np.ndarray:
        """Matrix of shape ``(modes, len(x))`` of the requested x-derivative.

        ``modes`` is an optional array of 0-based mode indices.
        """
        if derivative not in (0, 1, 2, 3):
            raise ValueError(f"derivative order must be 0..3, got {derivative}")
        x = np.atleast_1d(np.asarray(x, dtype=float))
        tol = 1e-12 * self.length
        if np.any(x < -tol) or np.any(x > self.length + tol) or not np.all(np.isfinite(x)):
            raise ValueError(f"x must lie in [0, {self.length}]")
        xi = np.clip(x / self.length, 0.0, 1.0)

        idx = slice(None) if modes is None else np.asarray(modes)
        beta = self.roots[idx][:, None]
        sigma = self._sigma[idx][:, None]
        a = self._a[idx][:, None]
        r = self._r[idx][:, None]

        bx = beta * xi
        left = a * np.exp(-bx)
        right = r * np.exp(-beta * (1.0 - xi))
        cos, sin = np.cos(bx), np.sin(bx)
        if derivative == 0:
            val = left + right - cos + sigma * sin
        elif derivative == 1:
            val = -left + right + sin + sigma * cos
        elif derivative == 2:
            val = left + right + cos - sigma * sin
        else:
            val = -left + right - sin - sigma * cos
        if derivative:
            val = val * (beta / self.length) ** derivative
        return val

    def _check_index(self, i):
        if not 1 <= i <= self.count:
            raise IndexError(f"mode index {i} outside 1..{self.count}")

    def phi(self, i: int, x):
        """Mode ``i`` (1-based) at ``x``."""
        self._check_index(i)
        out = self.evaluate(x, 0, modes=[i - 1])[0]
        return float(out[0]) if np.ndim(x) == 0 else out

    def phi_xx(self, i: int, x):
        """Second x-derivative of mode ``i`` (1-based) at ``x`` [1/m^2]."""
        self._check_index(i)
        out = self.evaluate(x, 2, modes=[i - 1])[0]
        return float(out[0]) if np.ndim(x) == 0 else out


def eval_phi(basis: ModalBasis, i: int, x):
    return basis.phi(i, x)


def eval_phi_xx(basis: ModalBasis, i: int, x):
    return basis.phi_xx(i, x)
