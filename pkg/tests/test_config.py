from pathlib import Path

import pytest

from twbeam.config import ConfigError, load_config, parse_config

CONFIGS = sorted((Path(__file__).parents[1] / "configs").glob("*.toml"))

BASE = """[beam]
length = 2.0
width = 0.03
thickness = 0.01
modulus = 71e9
density = 2700.0

[absorber]
location = 0.8
stiffness = 5.625e6
damping = 875.0

[excitation]
frequency = 3400.0
"""


def test_reference_values():
    cfg = parse_config(BASE)
    assert cfg.beam.length == 2.0
    assert cfg.beam.width.is_constant and cfg.beam.width.left_value == 0.03
    assert cfg.beam.modulus.left_value == 71e9
    assert (cfg.absorber.location, cfg.absorber.stiffness, cfg.absorber.damping) == (0.8, 5.625e6, 875.0)
    assert cfg.excitation.frequency == 3400.0 and cfg.excitation.amplitude == 1.0
    assert cfg.modes == 100 and cfg.quad.panels == 400 and cfg.grid_points == 2001
    assert cfg.sweep is None
    assert (cfg.tw_section().start, cfg.tw_section().end) == pytest.approx((0.9, 1.9))
    assert cfg.k_axis.count == 100 and cfg.c_axis.count == 100


def test_graded_profile_and_empty_sweep():
    cfg = parse_config(BASE.replace("density = 2700.0", "density_left = 8640.0\ndensity_right = 540.0\n"
                                    "density_index = 2.0") + "\n[sweep]\n")
    assert cfg.beam.density.ratio == 16.0 and cfg.beam.density.gradient_index == 2.0
    assert cfg.sweep is None or cfg.sweep.parameter is None


def test_sweep_section():
    cfg = parse_config(BASE + '\n[sweep]\nk_min = 1e3\nk_max = 1e6\nk_count = 5\nk_scale = "log"\n'
                       'parameter = "taper"\nvalues = [1.0, 2.0]\n')
    assert cfg.sweep.parameter == "taper" and tuple(cfg.sweep.values) == (1.0, 2.0)
    assert cfg.k_axis.values[0] == pytest.approx(1e3) and cfg.k_axis.count == 5


@pytest.mark.parametrize("old, new, key, line", [
    ("thickness = 0.01", "thickness = -0.01", "thickness", 4),
    ("frequency = 3400.0", "frequency = 0.0", "frequency", 14),
    ("location = 0.8", "location = 2.5", "location", 9),
    ("damping = 875.0", "damping = -1.0", "damping", 11),
    ("density = 2700.0", 'density = "heavy"', "density", 6),
    ("width = 0.03", "width = 0.03\nwidth_left = 0.04", "width_left", 4),
    ("[excitation]", "[excitation]\nphase = 1.0", "phase", 14),
])
def test_errors_name_key_and_line(old, new, key, line):
    with pytest.raises(ConfigError) as err:
        parse_config(BASE.replace(old, new), "run.toml")
    msg = str(err.value)
    assert key in msg
    assert msg.startswith(f"run.toml:{line}:")


def test_missing_key_and_section():
    with pytest.raises(ConfigError, match=r"\[beam\] length"):
        parse_config(BASE.replace("length = 2.0\n", ""))
    with pytest.raises(ConfigError, match=r"\[excitation\]"):
        parse_config(BASE.split("[excitation]")[0])
    with pytest.raises(ConfigError, match="unknown section"):
        parse_config(BASE + "\n[plot]\ncolor = 1\n")
    with pytest.raises(ConfigError):
        parse_config("[beam\nlength = ")


def test_unreadable_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.toml")


@pytest.mark.parametrize("path", CONFIGS, ids=[p.stem for p in CONFIGS])
def test_shipped_configs_parse(path):
    cfg = load_config(path)
    assert cfg.source == str(path)
    assert cfg.output_dir.startswith("out/")
