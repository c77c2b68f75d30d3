"""Envelope extrema and the traveling-wave cost function (CF).

CF is the mean over consecutive envelope extrema of
``(peak - valley) / (peak + valley)``: 0 for a flat (purely traveling)
envelope, 1 for a standing wave whose valleys reach zero.  Using the mean
of consecutive pairs keeps the index meaningful on tapered beams where the
envelope is sloped.

Extremum values are refined with a three-point parabola through the
squared envelope.  Near a node ``|W|^2`` is locally quadratic even when
``|W|`` has a sharp, cusp-like valley, so the refinement removes most of
the grid sampling bias.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "Section",
    "Envelope",
    "Extremum",
    "default_tw_section",
    "extrema",
    "cost_function",
    "cost_function_batch",
]


@dataclass(frozen=True)
class Section:
    """Closed interval ``[start, end]`` of the beam axis [m]."""

    start: float
    end: float

    def __post_init__(self):
        if not (self.start >= 0 and self.start < self.end):
            raise ValueError(f"degenerate section [{self.start}, {self.end}]")

    def mask(self, grid) -> np.ndarray:
        grid = np.asarray(grid)
        tol = 1e-12 * max(abs(self.end), 1.0)
        return (grid >= self.start - tol) & (grid <= self.end + tol)


def default_tw_section(L1: float, L: float, margin_fraction: float = 0.05) -> Section:
    """Span between the absorber and the driven tip, trimmed by ``margin_fraction * L`` at both ends."""
    if not 0 < L1 < L:
        raise ValueError(f"absorber location {L1} outside (0, {L})")
    if margin_fraction < 0:
        raise ValueError("margin_fraction must be >= 0")
    start, end = L1 + margin_fraction * L, L - margin_fraction * L
    if start >= end:
        raise ValueError(
            f"margin {margin_fraction} leaves no section between {L1} and {L}")
    return Section(start, end)


@dataclass(frozen=True, eq=False)
class Envelope:
    """Complex field sampled on an ascending grid; ``magnitude`` is ``|W|``."""

    grid: np.ndarray
    field: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        fld = np.asarray(self.field)
        if grid.ndim != 1 or grid.shape != fld.shape:
            raise ValueError("grid and field must be 1-D arrays of equal length")
        if np.any(np.diff(grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "field", fld)

    @classmethod
    def from_magnitude(cls, grid, magnitude) -> Envelope:
        return cls(grid, np.asarray(magnitude, dtype=float).astype(complex))

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.field)

    @property
    def power(self) -> np.ndarray:
        """``|W|^2`` computed as ``Re^2 + Im^2``."""
        return self.field.real**2 + self.field.imag**2

    def restrict(self, section: Section):
        """Grid and squared envelope inside ``section``."""
        m = section.mask(self.grid)
        if m.sum() < 1:
            raise ValueError(f"section [{section.start}, {section.end}] contains no grid points")
        return self.grid[m], self.power[m]

    def snapshot(self, omega: float, t: float) -> np.ndarray:
        """Instantaneous displacement ``Re{W exp(i omega t)}``."""
        return np.real(self.field * np.exp(1j * omega * t))


class Extremum(NamedTuple):
    x: float
    value: float
    kind: str  # "peak" or "valley"


def _uniform(grid) -> bool:
    if grid.size < 3:
        return False
    h = np.diff(grid)
    return np.all(np.abs(h - h[0]) <= 1e-9 * abs(h[0]))


def _find_extrema(p, refine=True):
    """Locate alternating strict extrema of each row of the squared envelope ``p``.

    Returns row indices, the index closing each extremum (last sample of a
    plateau), the plateau's first index, a peak flag, the (refined) squared
    value and the fractional refinement offset, all in row-major order.
    """
    p = np.asarray(p, dtype=float)
    nrow, npt = p.shape
    empty = np.zeros(0, dtype=np.intp)
    if npt < 3:
        return empty, empty, empty, np.zeros(0, bool), np.zeros(0), np.zeros(0)

    d = np.diff(p, axis=1)
    up = d > 0
    flat = ~up & ~(d < 0)
    tied = flat.any(axis=1)

    # rows without exact ties: an extremum wherever the slope sign flips
    hit = up[:, :-1] != up[:, 1:]
    rows, jj = np.nonzero(hit & ~tied[:, None])
    idx = jj + 1
    run_start = idx.copy()
    is_peak = up[rows, jj]

    if tied.any():
        # plateau-aware pass: carry the last nonzero slope across runs of ties
        sub = np.flatnonzero(tied)
        s = np.sign(d[sub])
        pos = np.where(s != 0, np.arange(npt - 1), -1)
        last = np.maximum.accumulate(pos, axis=1)
        prev_last = last[:, :-1]
        prev_sign = np.take_along_axis(s, np.maximum(prev_last, 0), axis=1)
        prev_sign = np.where(prev_last >= 0, prev_sign, 0)
        cur = s[:, 1:]
        thit = (cur != 0) & (prev_sign != 0) & (cur != prev_sign)
        tr, tj = np.nonzero(thit)
        rows = np.concatenate([rows, sub[tr]])
        idx = np.concatenate([idx, tj + 1])
        run_start = np.concatenate([run_start, prev_last[tr, tj] + 1])
        is_peak = np.concatenate([is_peak, prev_sign[tr, tj] > 0])
        order = np.lexsort((idx, rows))
        rows, idx, run_start, is_peak = rows[order], idx[order], run_start[order], is_peak[order]

    val = p[rows, idx]
    offset = np.zeros(idx.size)
    if refine and idx.size:
        strict = run_start == idx
        r, j = rows[strict], idx[strict]
        pm, p0, pp = p[r, j - 1], val[strict], p[r, j + 1]
        curv = pm - 2.0 * p0 + pp
        with np.errstate(all="ignore"):
            dx = np.where(curv != 0, 0.5 * (pm - pp) / curv, 0.0)
        val = val.copy()
        val[strict] = np.maximum(p0 - 0.25 * (pm - pp) * dx, 0.0)
        offset[strict] = dx
    return rows, idx, run_start, is_peak, val, offset


def extrema(env: Envelope, section: Section, refine: bool = True) -> list[Extremum]:
    """Alternating peaks and valleys of ``|W|`` strictly inside ``section``.

    Plateaus collapse to their midpoint.  With ``refine`` (and a uniform
    grid) positions and values come from the parabola through the squared
    envelope at the three samples around each strict extremum.
    """
    grid, power = env.restrict(section)
    refine = refine and _uniform(grid)
    _, idx, start, peak, val, off = _find_extrema(power[None, :], refine)
    out = []
    for j, j0, p, v, d in zip(idx, start, peak, val, off):
        if j0 == j:
            x = grid[j] + d * (grid[1] - grid[0]) if refine else grid[j]
        else:
            x = 0.5 * (grid[j0] + grid[j])
        out.append(Extremum(float(x), float(np.sqrt(v)), "peak" if p else "valley"))
    return out


def cost_function_batch(values, refine: bool = True, squared: bool = False) -> np.ndarray:
    """CF of each row of a 2-D array of envelope samples on one section.

    ``values`` holds ``|W|`` or, with ``squared``, ``|W|^2``.  Each row's
    result depends only on that row, so it is identical however rows are
    batched.
    """
    y = np.atleast_2d(np.asarray(values, dtype=float))
    if y.shape[1] == 0:
        raise ValueError("empty section")
    if np.any(y < 0) or not np.all(np.isfinite(y)):
        raise ValueError("envelope values must be finite and non-negative")
    p = y if squared else y * y
    nrow = p.shape[0]
    rows, _, _, _, val, _ = _find_extrema(p, refine)
    val = np.sqrt(val)

    same_row = rows[1:] == rows[:-1]
    a, b = val[:-1][same_row], val[1:][same_row]
    prow = rows[1:][same_row]
    ratio = np.abs(b - a) / (a + b)
    total = np.bincount(prow, weights=ratio, minlength=nrow)
    count = np.bincount(prow, minlength=nrow)

    cf = np.empty(nrow)
    has = count > 0
    cf[has] = total[has] / count[has]
    if not np.all(has):
        hi = np.sqrt(p[~has].max(axis=1))
        lo = np.sqrt(p[~has].min(axis=1))
        with np.errstate(all="ignore"):
            cf[~has] = np.where(hi > 0, (hi - lo) / (hi + lo), 0.0)
    return np.clip(cf, 0.0, 1.0)


def cost_function(env: Envelope, section: Section, refine: bool = True) -> float:
    """Traveling-wave cost function of ``env`` over ``section``, in [0, 1]."""
    grid, power = env.restrict(section)
    return float(cost_function_batch(power[None, :], refine and _uniform(grid), squared=True)[0])
