"""Run configuration files (TOML) for the command-line tool.

Sections and keys, all in SI units::

    [beam]        length; width, thickness, modulus, density given either as a
                  constant (``width = 0.03``) or as ``<name>_left``,
                  ``<name>_right`` and optional ``<name>_index`` (default 1)
    [absorber]    location [m], stiffness [N/m], damping [N s/m]
    [excitation]  frequency [Hz], amplitude [N] (default 1, downward positive)
    [solver]      modes (100), panels (4*modes), points_per_panel (10),
                  grid_points (2001), margin (0.05), section_start,
                  section_end, eigen_count (10), converge_modes, threshold (0.3)
    [sweep]       k_min/k_max/k_count/k_scale, c_min/c_max/c_count/c_scale,
                  f_min/f_max/f_step, parameter, values, target_left,
                  target_right, properties, full_maps
    [output]      dir

Every error names the offending key and, when it appears in the file, its
line number.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .assembly import QuadratureSpec
from .metrics import Section, default_tw_section
from .profiles import AbsorberConfig, BeamConfig, ExcitationConfig, PowerLawProfile
from .sweeps import GridAxis, default_c_axis, default_k_axis

__all__ = ["ConfigError", "SweepSpec", "RunConfig", "parse_config", "load_config"]

PROFILE_NAMES = ("width", "thickness", "modulus", "density")
SWEEP_PARAMETERS = ("location", "taper", "modulus", "density", "index")

_ALLOWED = {
    "beam": {"length"} | {f"{p}{s}" for p in PROFILE_NAMES for s in ("", "_left", "_right", "_index")},
    "absorber": {"location", "stiffness", "damping"},
    "excitation": {"frequency", "amplitude"},
    "solver": {"modes", "panels", "points_per_panel", "grid_points", "margin",
               "section_start", "section_end", "eigen_count", "converge_modes", "threshold"},
    "sweep": {"k_min", "k_max", "k_count", "k_scale", "c_min", "c_max", "c_count", "c_scale",
              "f_min", "f_max", "f_step", "parameter", "values", "target_left", "target_right",
              "properties", "full_maps"},
    "output": {"dir"},
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SweepSpec:
    k_axis: GridAxis
    c_axis: GridAxis
    f_min: float = 300.0
    f_max: float = 3400.0
    f_step: float = 10.0
    parameter: str | None = None
    values: tuple = ()
    target: tuple | None = None
    properties: tuple = ()
    full_maps: bool = False


@dataclass(frozen=True)
class RunConfig:
    beam: BeamConfig
    absorber: AbsorberConfig
    excitation: ExcitationConfig
    modes: int = 100
    panels: int | None = None
    points_per_panel: int = 10
    grid_points: int = 2001
    section: Section | None = None
    margin: float = 0.05
    eigen_count: int = 10
    converge_modes: tuple | None = None
    threshold: float = 0.3
    sweep: SweepSpec | None = None
    output_dir: str = "out"
    source: str = field(default="<string>", compare=False)

    def tw_section(self, location: float | None = None) -> Section:
        if self.section is not None:
            return self.section
        L1 = self.absorber.location if location is None else location
        return default_tw_section(L1, self.beam.length, self.margin)

    @property
    def quad(self) -> QuadratureSpec:
        panels = self.panels if self.panels is not None else 4 * self.modes
        return QuadratureSpec(panels, self.points_per_panel)

    @property
    def convergence_modes(self) -> tuple:
        if self.converge_modes is not None:
            return tuple(self.converge_modes)
        return tuple(n for n in (20, 40, 60, 80, 100) if n < self.modes) + (self.modes,)

    @property
    def k_axis(self) -> GridAxis:
        return self.sweep.k_axis if self.sweep else default_k_axis()

    @property
    def c_axis(self) -> GridAxis:
        return self.sweep.c_axis if self.sweep else default_c_axis()


class _Reader:
    def __init__(self, text: str, data: dict, source: str):
        self.data = data
        self.source = source
        self.lines = {}
        section = ""
        for no, line in enumerate(text.splitlines(), 1):
            m = re.match(r"\s*\[([^\]]+)\]", line)
            if m:
                section = m.group(1).strip()
                self.lines.setdefault((section, None), no)
                continue
            m = re.match(r"\s*([A-Za-z0-9_\-]+)\s*=", line)
            if m:
                self.lines.setdefault((section, m.group(1)), no)

    def where(self, section, key=None):
        no = self.lines.get((section, key)) or self.lines.get((section, None))
        loc = f"{self.source}:{no}" if no else self.source
        name = f"[{section}] {key}" if key else f"[{section}]"
        return f"{loc}: {name}"

    def fail(self, section, key, msg):
        raise ConfigError(f"{self.where(section, key)}: {msg}")

    def table(self, section, required=True):
        t = self.data.get(section)
        if t is None:
            if required:
                raise ConfigError(f"{self.source}: missing required section [{section}]")
            return {}
        if not isinstance(t, dict):
            self.fail(section, None, "must be a table")
        return t

    def number(self, section, key, default=None, required=False, integer=False):
        t = self.data.get(section, {})
        if key not in t:
            if required:
                self.fail(section, key, "missing required key")
            return default
        v = t[key]
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            self.fail(section, key, f"expected a number, got {v!r}")
        if integer:
            if float(v) != int(v):
                self.fail(section, key, f"expected an integer, got {v!r}")
            return int(v)
        return float(v)


def _check(reader, section, key, ok, msg):
    if not ok:
        reader.fail(section, key, msg)


def _profile(r: _Reader, name: str) -> PowerLawProfile:
    t = r.data.get("beam", {})
    if name in t:
        for suffix in ("_left", "_right"):
            if name + suffix in t:
                r.fail("beam", name + suffix, f"conflicts with constant '{name}'")
        v = r.number("beam", name)
        _check(r, "beam", name, v > 0, f"{name} must be > 0, got {v}")
        return PowerLawProfile.constant(v)
    left = r.number("beam", name + "_left", required=True)
    right = r.number("beam", name + "_right", required=True)
    n = r.number("beam", name + "_index", 1.0)
    _check(r, "beam", name + "_left", left > 0, f"{name}_left must be > 0, got {left}")
    _check(r, "beam", name + "_right", right > 0, f"{name}_right must be > 0, got {right}")
    _check(r, "beam", name + "_index", n > 0, f"{name}_index must be > 0, got {n}")
    return PowerLawProfile(left, right, n)


def _axis(r: _Reader, prefix: str, default: GridAxis) -> GridAxis:
    t = r.data.get("sweep", {})
    lo = r.number("sweep", f"{prefix}_min", default.min)
    hi = r.number("sweep", f"{prefix}_max", default.max)
    count = r.number("sweep", f"{prefix}_count", default.count, integer=True)
    scale = t.get(f"{prefix}_scale", default.scale)
    if scale in ("logarithmic",):
        scale = "log"
    _check(r, "sweep", f"{prefix}_scale", scale in ("linear", "log"),
           f"must be 'linear' or 'log', got {scale!r}")
    _check(r, "sweep", f"{prefix}_count", count >= 1, "must be >= 1")
    _check(r, "sweep", f"{prefix}_min", lo >= 0, "must be >= 0")
    _check(r, "sweep", f"{prefix}_max", count == 1 or lo < hi, f"must exceed {prefix}_min")
    _check(r, "sweep", f"{prefix}_min", scale != "log" or lo > 0, "logarithmic axis needs min > 0")
    return GridAxis(prefix, lo, hi, count, scale)


def parse_config(text: str, source: str = "<string>") -> RunConfig:
    """Parse and validate a TOML run configuration."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    r = _Reader(text, data, source)

    for section, body in data.items():
        if section not in _ALLOWED:
            raise ConfigError(f"{r.where(section)}: unknown section")
        if not isinstance(body, dict):
            r.fail(section, None, "must be a table")
        for key in body:
            if key not in _ALLOWED[section]:
                r.fail(section, key, "unknown key")

    r.table("beam")
    length = r.number("beam", "length", required=True)
    _check(r, "beam", "length", length > 0, f"length must be > 0, got {length}")
    beam = BeamConfig(length, *(_profile(r, p) for p in PROFILE_NAMES))

    r.table("absorber")
    loc = r.number("absorber", "location", required=True)
    _check(r, "absorber", "location", 0 < loc < length,
           f"location must lie in (0, {length}), got {loc}")
    k = r.number("absorber", "stiffness", 0.0)
    c = r.number("absorber", "damping", 0.0)
    _check(r, "absorber", "stiffness", k >= 0, f"stiffness must be >= 0, got {k}")
    _check(r, "absorber", "damping", c >= 0, f"damping must be >= 0, got {c}")
    absorber = AbsorberConfig(loc, k, c)

    r.table("excitation")
    f = r.number("excitation", "frequency", required=True)
    _check(r, "excitation", "frequency", f > 0, f"frequency must be > 0, got {f}")
    excitation = ExcitationConfig(f, r.number("excitation", "amplitude", 1.0))

    modes = r.number("solver", "modes", 100, integer=True)
    _check(r, "solver", "modes", modes >= 1, "must be >= 1")
    panels = r.number("solver", "panels", None, integer=True)
    ppp = r.number("solver", "points_per_panel", 10, integer=True)
    _check(r, "solver", "panels", panels is None or panels >= 1, "must be >= 1")
    _check(r, "solver", "points_per_panel", ppp >= 2, "must be >= 2")
    grid_points = r.number("solver", "grid_points", 2001, integer=True)
    _check(r, "solver", "grid_points", grid_points >= 3, "must be >= 3")
    margin = r.number("solver", "margin", 0.05)
    _check(r, "solver", "margin", 0 <= margin < 0.5, f"must lie in [0, 0.5), got {margin}")
    s0 = r.number("solver", "section_start")
    s1 = r.number("solver", "section_end")
    section = None
    if (s0 is None) != (s1 is None):
        r.fail("solver", "section_start" if s0 is None else "section_end",
               "section_start and section_end must be given together")
    if s0 is not None:
        _check(r, "solver", "section_end", 0 <= s0 < s1 <= length,
               f"need 0 <= section_start < section_end <= {length}")
        section = Section(s0, s1)
    else:
        try:
            default_tw_section(loc, length, margin)
        except ValueError as exc:
            r.fail("solver", "margin", str(exc))
    eigen_count = r.number("solver", "eigen_count", 10, integer=True)
    _check(r, "solver", "eigen_count", 1 <= eigen_count <= modes, f"must lie in 1..{modes}")
    cm = r.data.get("solver", {}).get("converge_modes")
    if cm is not None:
        ok = isinstance(cm, list) and cm and all(isinstance(n, int) and n >= 1 for n in cm)
        _check(r, "solver", "converge_modes", ok, "must be a non-empty list of positive integers")
        cm = tuple(sorted(set(cm)))
    threshold = r.number("solver", "threshold", 0.3)
    _check(r, "solver", "threshold", 0 < threshold < 1, "must lie in (0, 1)")

    sweep = None
    st = r.data.get("sweep", {})
    if st:
        parameter = st.get("parameter")
        _check(r, "sweep", "parameter", parameter is None or parameter in SWEEP_PARAMETERS,
               f"must be one of {', '.join(SWEEP_PARAMETERS)}")
        values = st.get("values", [])
        ok = isinstance(values, list) and all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in values)
        _check(r, "sweep", "values", ok, "must be a list of numbers")
        _check(r, "sweep", "values", parameter is None or len(values) > 0,
               f"required for parameter '{parameter}'")
        if parameter == "location":
            for v in values:
                _check(r, "sweep", "values", 0 < v < length, f"location {v} outside (0, {length})")
        elif parameter is not None:
            for v in values:
                _check(r, "sweep", "values", v > 0, f"values must be > 0, got {v}")
        target = None
        if "target_left" in st or "target_right" in st:
            tl = r.number("sweep", "target_left", required=True)
            tr = r.number("sweep", "target_right", required=True)
            _check(r, "sweep", "target_left", tl > 0 and tr > 0, "target ends must be > 0")
            target = (tl, tr)
        props = st.get("properties", [])
        ok = isinstance(props, list) and all(p in PROFILE_NAMES for p in props)
        _check(r, "sweep", "properties", ok, f"must list names from {PROFILE_NAMES}")
        full = st.get("full_maps", False)
        _check(r, "sweep", "full_maps", isinstance(full, bool), "must be true or false")
        f_min = r.number("sweep", "f_min", 300.0)
        f_max = r.number("sweep", "f_max", 3400.0)
        f_step = r.number("sweep", "f_step", 10.0)
        _check(r, "sweep", "f_min", f_min > 0, "must be > 0")
        _check(r, "sweep", "f_max", f_max >= f_min, "must be >= f_min")
        _check(r, "sweep", "f_step", f_step > 0, "must be > 0")
        sweep = SweepSpec(_axis(r, "k", default_k_axis()), _axis(r, "c", default_c_axis()),
                          f_min, f_max, f_step, parameter, tuple(float(v) for v in values),
                          target, tuple(props), full)

    out_dir = r.data.get("output", {}).get("dir", "out")
    _check(r, "output", "dir", isinstance(out_dir, str) and out_dir, "must be a non-empty string")

    return RunConfig(beam, absorber, excitation, modes, panels, ppp, grid_points,
                     section, margin, eigen_count, cm, threshold, sweep, out_dir, source)


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise ConfigError(f"{path}: not UTF-8 text ({exc})") from exc
    return parse_config(text, str(path))
