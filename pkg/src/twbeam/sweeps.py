"""Parametric CF studies over absorber coefficients, frequency, location and grading.

Every (k, c) cell at one frequency shares a single factorisation of
``K0 - w^2 M``.  Since the two base solutions are real, the field of a cell
is ``W = Wa - gamma Wb`` with real ``Wa``, ``Wb`` sampled once on the
evaluation grid and a complex scalar ``gamma(k, c)``; the envelope of each
cell is computed elementwise from these, so cell values do not depend on
how cells are batched or distributed over threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
from scipy import stats

from .assembly import AssembledSystem, QuadratureSpec, assemble, coupling_vector
from .basis import ModalBasis
from .metrics import Envelope, Section, _uniform, cost_function_batch, default_tw_section
from .profiles import BeamConfig, PowerLawProfile
from .solver import FactoredBase, NearSingularError, _denominator_ok, harmonic_response
from .profiles import AbsorberConfig, ExcitationConfig

__all__ = [
    "GridAxis",
    "CFMap",
    "SweepEntry",
    "SweepResult",
    "ResponseContext",
    "default_k_axis",
    "default_c_axis",
    "evaluation_grid",
    "cf_map",
    "stacked_cf",
    "optimal_region_measure",
    "node_locations",
    "location_sweep",
    "geometry_sweep",
    "gradient_index_sweep",
    "mean_preserving_taper",
    "interpolated_endpoints",
    "interpolation_for_ratio",
    "taper_schedule",
    "material_schedule",
    "apply_endpoints",
    "frequency_axis",
    "rank1_power",
    "MODULUS_PRESET",
    "DENSITY_PRESET",
    "TAPER_PRESET",
    "spearman",
]

DEFAULT_GRID_POINTS = 2001

# graded-material end values used for the aggressive (ratio 16) cases
MODULUS_PRESET = (227.2e9, 14.2e9)
DENSITY_PRESET = (8640.0, 540.0)
# (b_l, b_r, h_l, h_r) of the A(0) = 16 A(L) taper
TAPER_PRESET = (48e-3, 12e-3, 16e-3, 4e-3)


@dataclass(frozen=True)
class GridAxis:
    """Sampling of one swept parameter."""

    name: str
    min: float
    max: float
    count: int
    scale: str = "linear"

    def __post_init__(self):
        if self.count < 1:
            raise ValueError(f"{self.name}: count must be >= 1")
        if self.scale not in ("linear", "log"):
            raise ValueError(f"{self.name}: scale must be 'linear' or 'log', got {self.scale!r}")
        if self.count > 1 and not self.min < self.max:
            raise ValueError(f"{self.name}: need min < max when count > 1")
        if self.scale == "log" and not self.min > 0:
            raise ValueError(f"{self.name}: logarithmic axis requires min > 0")

    @classmethod
    def single(cls, name: str, value: float) -> GridAxis:
        return cls(name, value, value, 1)

    @property
    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.array([float(self.min)])
        if self.scale == "log":
            return np.geomspace(self.min, self.max, self.count)
        return np.linspace(self.min, self.max, self.count)


def default_k_axis(count: int = 100) -> GridAxis:
    return GridAxis("k", 1e4, 3e7, count, "log")


def default_c_axis(count: int = 100) -> GridAxis:
    return GridAxis("c", 1.0, 5000.0, count, "linear")


def evaluation_grid(length: float, points: int = DEFAULT_GRID_POINTS) -> np.ndarray:
    return np.linspace(0.0, length, points)


@dataclass(frozen=True, eq=False)
class CFMap:
    """CF over a (k, c) grid at one excitation frequency.

    ``values[i, j]`` belongs to ``k_axis.values[i]`` and ``c_axis.values[j]``;
    ``flags`` marks cells that needed a direct solve (1) or failed (2).
    """

    k_axis: GridAxis
    c_axis: GridAxis
    frequency: float
    location: float
    values: np.ndarray
    flags: np.ndarray

    @property
    def min(self) -> float:
        return float(np.nanmin(self.values))

    def cell(self, k: float, c: float) -> float:
        i = int(np.argmin(np.abs(self.k_axis.values - k)))
        j = int(np.argmin(np.abs(self.c_axis.values - c)))
        return float(self.values[i, j])


def optimal_region_measure(cf: CFMap | np.ndarray, threshold: float = 0.3) -> float:
    """Fraction of grid cells with CF <= ``threshold``."""
    if not 0 < threshold < 1:
        raise ValueError(f"threshold must lie in (0, 1), got {threshold}")
    v = cf.values if isinstance(cf, CFMap) else np.asarray(cf)
    v = v[np.isfinite(v)]
    if v.size == 0:
        return 0.0
    return float(np.count_nonzero(v <= threshold) / v.size)


class ResponseContext:
    """Assembled beam, evaluation grid and section shared by all cells of a sweep."""

    def __init__(self, beam: BeamConfig, basis: ModalBasis, quad: QuadratureSpec | None = None,
                 grid=None, system: AssembledSystem | None = None):
        self.beam = beam
        self.basis = basis
        self.system = system if system is not None else assemble(beam, basis, quad)
        self.grid = evaluation_grid(beam.length) if grid is None else np.asarray(grid, float)
        self.phi = basis.evaluate(self.grid, 0)

    def section_columns(self, section: Section):
        m = section.mask(self.grid)
        if m.sum() < 1:
            raise ValueError("section contains no evaluation grid points")
        return m, _uniform(self.grid[m])

    def cf_cells(self, omega: float, location: float, ks, cs, section: Section,
                 amplitude: float = 1.0, base: FactoredBase | None = None):
        """CF and flags for paired arrays of (k, c) cell coefficients."""
        ks = np.asarray(ks, dtype=float).ravel()
        cs = np.asarray(cs, dtype=float).ravel()
        cols, refine = self.section_columns(section)
        u = coupling_vector(self.basis, location)
        q = amplitude * self.system.tip
        base = base if base is not None else FactoredBase(self.system, omega)
        cf = np.full(ks.size, np.nan)
        flags = np.zeros(ks.size, dtype=np.int8)

        direct = np.ones(ks.size, dtype=bool)
        if base.usable:
            a, b, _, ub = base.base_solutions(u, q)
            # full-grid products then slice, so cells match field() bit for bit
            wa = (a @ self.phi)[cols]
            wb = (b @ self.phi)[cols]
            g, denom = base.gamma(u, q, ks, cs)
            z = ks + 1j * omega * cs
            ok = _denominator_ok(denom, z * ub)
            direct = ~ok
            if np.any(ok):
                okk = np.flatnonzero(ok)
                for s, e in _chunks(okk.size, 256):
                    sel = okk[s:e]
                    cf[sel] = cost_function_batch(
                        rank1_power(wa, wb, g[sel]), refine, squared=True)
        for i in np.flatnonzero(direct):
            try:
                sol = harmonic_response(
                    self.system, AbsorberConfig(location, ks[i], cs[i]),
                    ExcitationConfig(omega / (2 * np.pi), amplitude))
            except NearSingularError:
                flags[i] = 2
                continue
            w = (sol.eta @ self.phi)[cols]
            cf[i] = cost_function_batch((w.real**2 + w.imag**2)[None, :], refine, squared=True)[0]
            flags[i] = 1
        return cf, flags

    def field(self, omega: float, location: float, k: float, c: float, amplitude: float = 1.0):
        """Complex field on the full grid through the same rank-1 route as the sweeps."""
        u = coupling_vector(self.basis, location)
        q = amplitude * self.system.tip
        base = FactoredBase(self.system, omega)
        if base.usable:
            a, b, _, ub = base.base_solutions(u, q)
            g, denom = base.gamma(u, q, k, c)
            if _denominator_ok(denom, (k + 1j * omega * c) * ub):
                wa, wb = a @ self.phi, b @ self.phi
                return (wa - g.real * wb) - 1j * (g.imag * wb)
        sol = harmonic_response(self.system, AbsorberConfig(location, k, c),
                                ExcitationConfig(omega / (2 * np.pi), amplitude))
        return sol.eta @ self.phi

    def envelope(self, frequency: float, location: float, k: float, c: float,
                 amplitude: float = 1.0) -> Envelope:
        return Envelope(self.grid, self.field(2 * np.pi * frequency, location, k, c, amplitude))


def rank1_power(wa, wb, gamma) -> np.ndarray:
    """``|Wa - gamma Wb|^2`` for each gamma (rows), with ``Wa`` and ``Wb`` real."""
    g = np.asarray(gamma)[:, None]
    re = wa[None, :] - g.real * wb[None, :]
    im = g.imag * wb[None, :]
    return re * re + im * im


def _chunks(n: int, size: int):
    return [(s, min(s + size, n)) for s in range(0, n, size)]


def cf_map(beam: BeamConfig | ResponseContext, basis: ModalBasis | None, location: float,
           frequency: float, k_axis: GridAxis | None = None, c_axis: GridAxis | None = None,
           section: Section | None = None, amplitude: float = 1.0, threads: int = 1,
           chunk: int = 1000) -> CFMap:
    """CF at every (k, c) grid point from one factorisation at ``omega = 2 pi f``."""
    ctx = beam if isinstance(beam, ResponseContext) else ResponseContext(beam, basis)
    if not frequency > 0:
        raise ValueError(f"frequency must be positive, got {frequency}")
    k_axis = k_axis or default_k_axis()
    c_axis = c_axis or default_c_axis()
    L = ctx.beam.length
    if section is None:
        section = default_tw_section(location, L)
    omega = 2.0 * np.pi * frequency
    kk, cc = np.meshgrid(k_axis.values, c_axis.values, indexing="ij")
    ks, cs = kk.ravel(), cc.ravel()
    base = FactoredBase(ctx.system, omega)

    parts = _chunks(ks.size, chunk)

    def run(span):
        s, e = span
        return ctx.cf_cells(omega, location, ks[s:e], cs[s:e], section, amplitude, base)

    # prime the shared base-solution cache before fanning out
    if base.usable:
        base.base_solutions(coupling_vector(ctx.basis, location), amplitude * ctx.system.tip)
    workers = _workers(threads)
    if workers > 1 and len(parts) > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(run, parts))
    else:
        results = [run(p) for p in parts]
    cf = np.concatenate([r[0] for r in results]).reshape(kk.shape)
    flags = np.concatenate([r[1] for r in results]).reshape(kk.shape)
    return CFMap(k_axis, c_axis, float(frequency), float(location), cf, flags)


def _workers(threads: int) -> int:
    if threads is None or threads <= 0:
        import os
        return os.cpu_count() or 1
    return int(threads)


def frequency_axis(f_min: float = 300.0, f_max: float = 3400.0, step: float = 10.0) -> np.ndarray:
    count = int(round((f_max - f_min) / step)) + 1
    return f_min + step * np.arange(count)


def stacked_cf(beam, basis, location, frequencies=None, k_axis=None, c_axis=None,
               section=None, threads: int = 1, progress: Callable | None = None) -> list[CFMap]:
    """One CF map per excitation frequency, ascending (default 300-3400 Hz every 10 Hz)."""
    ctx = beam if isinstance(beam, ResponseContext) else ResponseContext(beam, basis)
    freqs = frequency_axis() if frequencies is None else np.sort(np.asarray(frequencies, float))
    maps = []
    for f in freqs:
        maps.append(cf_map(ctx, None, location, float(f), k_axis, c_axis, section, threads=threads))
        if progress is not None:
            progress(f)
    return maps


def node_locations(beam: BeamConfig | ResponseContext, basis: ModalBasis | None,
                   frequency: float, location: float | None = None,
                   k: float = 0.0, c: float = 0.0) -> np.ndarray:
    """Interior zeros of the undamped steady response, ascending from the clamp.

    By default the absorber is off; the response is then real and its zeros
    are located by sign changes on the evaluation grid refined with Brent's
    method.
    """
    from scipy.optimize import brentq

    ctx = beam if isinstance(beam, ResponseContext) else ResponseContext(beam, basis)
    omega = 2 * np.pi * frequency
    if location is None or (k == 0 and c == 0):
        base = FactoredBase(ctx.system, omega)
        eta = base.solve(ctx.system.tip)
    else:
        eta = harmonic_response(ctx.system, AbsorberConfig(location, k, c),
                                ExcitationConfig(frequency)).eta
        if np.any(np.abs(eta.imag) > 1e-12 * np.abs(eta).max()):
            raise ValueError("damped response has no exact nodes")
        eta = eta.real
    w = eta @ ctx.phi
    x = ctx.grid

    def fn(t):
        return float(eta @ ctx.basis.evaluate([t], 0)[:, 0])

    nodes = []
    for j in range(1, x.size - 1):
        if w[j] == 0.0:
            nodes.append(x[j])
        elif w[j] * w[j + 1] < 0:
            nodes.append(brentq(fn, x[j], x[j + 1], xtol=1e-14))
    return np.array(nodes)


@dataclass
class SweepEntry:
    """Result for one value of the swept parameter."""

    value: float
    fraction: float
    min_cf: float
    cf_map: CFMap | None = None
    label: str = ""


@dataclass
class SweepResult:
    parameter: str
    entries: list[SweepEntry]
    provenance: dict = field(default_factory=dict)

    @property
    def values(self) -> np.ndarray:
        return np.array([e.value for e in self.entries])

    @property
    def fractions(self) -> np.ndarray:
        return np.array([e.fraction for e in self.entries])

    @property
    def min_cfs(self) -> np.ndarray:
        return np.array([e.min_cf for e in self.entries])


def _entry(value, m: CFMap, threshold, keep_maps, label=""):
    return SweepEntry(float(value), optimal_region_measure(m, threshold), m.min,
                      m if keep_maps else None, label)


def _provenance(beam: BeamConfig, basis: ModalBasis, **extra):
    out = {"beam": asdict(beam), "modes": basis.count}
    out.update(extra)
    return out


def location_sweep(beam: BeamConfig, basis: ModalBasis, frequency: float, locations,
                   k_axis=None, c_axis=None, margin: float = 0.05, threshold: float = 0.3,
                   threads: int = 1, keep_maps: bool = False) -> SweepResult:
    """CF map per absorber location at a fixed frequency (one assembly, one factorisation)."""
    ctx = ResponseContext(beam, basis)
    entries = []
    for L1 in np.asarray(locations, dtype=float):
        sec = default_tw_section(L1, beam.length, margin)
        m = cf_map(ctx, None, float(L1), frequency, k_axis, c_axis, sec, threads=threads)
        entries.append(_entry(L1, m, threshold, keep_maps))
    return SweepResult("location", entries, _provenance(beam, basis, frequency=frequency))


# -- endpoint schedules ------------------------------------------------------

def mean_preserving_taper(mean: float, ratio: float) -> tuple[float, float]:
    """Ends ``(2 m r / (1 + r), 2 m / (1 + r))`` with ratio ``r`` around arithmetic mean ``m``."""
    if not (mean > 0 and ratio > 0):
        raise ValueError("mean and ratio must be positive")
    return 2 * mean * ratio / (1 + ratio), 2 * mean / (1 + ratio)


def interpolated_endpoints(start: tuple[float, float], target: tuple[float, float], t: float):
    """End values a fraction ``t`` of the way from ``start`` to ``target`` (both ends linear in t)."""
    return (start[0] + t * (target[0] - start[0]), start[1] + t * (target[1] - start[1]))


def interpolation_for_ratio(start, target, ratio: float) -> float:
    """The ``t`` at which :func:`interpolated_endpoints` reaches left/right == ``ratio``."""
    dl, dr = target[0] - start[0], target[1] - start[1]
    den = dl - ratio * dr
    if den == 0:
        raise ValueError("ratio not reachable along this schedule")
    return (ratio * start[1] - start[0]) / den


def taper_schedule(ratios, mean_width: float = 30e-3, mean_thickness: float = 10e-3):
    """Mean-preserving width/thickness tapers; entry ``r`` gives ``A(0)/A(L) = r**2``."""
    out = []
    for r in ratios:
        b = mean_preserving_taper(mean_width, r)
        h = mean_preserving_taper(mean_thickness, r)
        out.append({"width": b, "thickness": h})
    return out


def material_schedule(prop: str, ratios, start=None, target=None):
    """End values of ``prop`` ('modulus' or 'density') reaching each left/right ratio.

    Ends move linearly from ``start`` (uniform by default) toward ``target``
    (the ratio-16 preset by default).
    """
    if prop == "modulus":
        start = start or (71e9, 71e9)
        target = target or MODULUS_PRESET
    elif prop == "density":
        start = start or (2700.0, 2700.0)
        target = target or DENSITY_PRESET
    else:
        raise ValueError(f"unknown material property {prop!r}")
    out = []
    for r in ratios:
        t = interpolation_for_ratio(start, target, r)
        ends = interpolated_endpoints(start, target, t)
        if min(ends) <= 0:
            raise ValueError(f"ratio {r} needs non-positive end values")
        out.append({prop: ends})
    return out


def apply_endpoints(beam: BeamConfig, entry: dict, gradient_index: float | None = None) -> BeamConfig:
    """Rebuild ``beam`` with new ``(left, right)`` ends for the named profiles."""
    updates = {}
    for name, ends in entry.items():
        old = getattr(beam, name)
        n = old.gradient_index if gradient_index is None else gradient_index
        left, right = ends
        if not (left > 0 and right > 0):
            raise ValueError(f"{name}: end values must be positive, got {ends}")
        updates[name] = PowerLawProfile(float(left), float(right), n)
    return beam.with_profiles(**updates)


def _ratio_of(entry: dict) -> float:
    name = next(iter(entry))
    left, right = entry[name]
    return left / right


def geometry_sweep(beam: BeamConfig, n_modes: int, frequency: float, schedule: Sequence[dict],
                   location: float, k_axis=None, c_axis=None, gradient_index: float | None = None,
                   values=None, section: Section | None = None, threshold: float = 0.3,
                   threads: int = 1, keep_maps: bool = False,
                   quad: QuadratureSpec | None = None) -> SweepResult:
    """Re-assemble and map CF for every schedule entry (dict of profile name -> ends)."""
    basis = ModalBasis(n_modes, beam.length)
    values = [_ratio_of(e) for e in schedule] if values is None else list(values)
    entries = []
    for v, ends in zip(values, schedule):
        b = apply_endpoints(beam, ends, gradient_index)
        m = cf_map(ResponseContext(b, basis, quad), None, location, frequency,
                   k_axis, c_axis, section, threads=threads)
        label = ";".join(f"{k}={l:.6g}/{r:.6g}" for k, (l, r) in ends.items())
        entries.append(_entry(v, m, threshold, keep_maps, label))
    return SweepResult("ratio", entries, _provenance(beam, basis, frequency=frequency,
                                                      location=location))


def gradient_index_sweep(beam: BeamConfig, n_modes: int, indices, frequency: float,
                         location: float, properties: Sequence[str] | None = None,
                         k_axis=None, c_axis=None, section: Section | None = None,
                         threshold: float = 0.3, threads: int = 1,
                         keep_maps: bool = False) -> SweepResult:
    """Vary only the power-law index of the graded profiles, ends held fixed."""
    props = list(properties) if properties else [
        p for p in ("width", "thickness", "modulus", "density") if not getattr(beam, p).is_constant]
    basis = ModalBasis(n_modes, beam.length)
    entries = []
    for n in indices:
        if not n > 0:
            raise ValueError(f"gradient index must be positive, got {n}")
        b = beam.with_profiles(**{p: replace(getattr(beam, p), gradient_index=float(n)) for p in props})
        m = cf_map(ResponseContext(b, basis), None, location, frequency, k_axis, c_axis,
                   section, threads=threads)
        entries.append(_entry(n, m, threshold, keep_maps))
    return SweepResult("gradient_index", entries,
                       _provenance(beam, basis, frequency=frequency, location=location,
                                   properties=props))


def spearman(x, y) -> float:
    """Spearman rank correlation (nan when either input is constant)."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    if x.size < 2 or np.all(x == x[0]) or np.all(y == y[0]):
        return math.nan
    return float(stats.spearmanr(x, y).statistic)
