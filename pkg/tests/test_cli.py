import numpy as np
import pytest

from twbeam.assembly import assemble
from twbeam.basis import ModalBasis
from twbeam.cli import EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK, main
from twbeam.csvio import read_csv
from twbeam.profiles import reference_beam
from twbeam.solver import natural_frequencies

RUN = """[beam]
length = 2.0
width = 0.03
thickness = 0.01
modulus = 71e9
density = 2700.0

[absorber]
location = 0.8
stiffness = {k}
damping = {c}

[excitation]
frequency = {f}
amplitude = {F}

[solver]
modes = 40
grid_points = 801
converge_modes = [20, 30, 40]

[sweep]
k_min = 1e4
k_max = 3e7
k_count = 14
k_scale = "log"
c_min = 1.0
c_max = 5000.0
c_count = 11
f_min = 1000.0
f_max = 1040.0
f_step = 20.0
{extra}
"""


def write(tmp_path, name="run.toml", k=5.625e6, c=875.0, f=3400.0, F=1.0, extra=""):
    p = tmp_path / name
    p.write_text(RUN.format(k=k, c=c, f=f, F=F, extra=extra))
    return str(p)


def run(*args):
    return main([str(a) for a in args])


def test_natfreq(tmp_path):
    assert run("natfreq", "--config", write(tmp_path, k=0.0), "--out", tmp_path / "o") == EXIT_OK
    _, cols, rows = read_csv(tmp_path / "o" / "natfreq.csv")
    assert cols == ["mode", "omega_rad_per_s", "f_Hz", "omega_bar"]
    assert rows[0][3] == pytest.approx(1.8751040687**2, rel=1e-8)
    assert len(rows) == 10


def test_respond_writes_field_and_cf(tmp_path):
    assert run("respond", "--config", write(tmp_path), "--out", tmp_path) == EXIT_OK
    meta, cols, rows = read_csv(tmp_path / "response.csv")
    assert cols == ["x_m", "abs_W_m", "re_W_m", "im_W_m"]
    a = np.array(rows)
    assert len(rows) == 801 and a[0, 1] < 1e-14 * a[:, 1].max()
    assert 0.0 <= float(meta["cf"]) <= 1.0
    np.testing.assert_allclose(a[:, 1], np.hypot(a[:, 2], a[:, 3]), rtol=1e-15)


def test_zero_force_gives_zero_field(tmp_path):
    assert run("respond", "--config", write(tmp_path, F=0.0), "--out", tmp_path) == EXIT_OK
    meta, _, rows = read_csv(tmp_path / "response.csv")
    assert all(r[1] == 0.0 for r in rows)
    assert float(meta["cf"]) == 0.0


def test_cfmap_and_stack(tmp_path):
    cfg = write(tmp_path)
    assert run("cfmap", "--config", cfg, "--out", tmp_path) == EXIT_OK
    meta, cols, rows = read_csv(tmp_path / "cfmap.csv")
    assert cols == ["k_N_per_m", "c_Ns_per_m", "cf"] and len(rows) == 14 * 11
    assert rows[0][:2] == [1e4, 1.0]
    assert 0.0 <= float(meta["optimal_fraction"]) <= 1.0
    assert run("stack", "--config", cfg, "--out", tmp_path) == EXIT_OK
    _, _, idx = read_csv(tmp_path / "stack_index.csv")
    assert [r[0] for r in idx] == [1000.0, 1020.0, 1040.0]
    assert all((tmp_path / r[1]).exists() for r in idx)


@pytest.mark.parametrize("extra, n", [
    ('parameter = "taper"\nvalues = [1.0, 2.0]\nfull_maps = true', 2),
    ('parameter = "density"\nvalues = [1.0, 16.0]', 2),
    ('parameter = "location"\nvalues = [0.4, 0.8, 1.2]', 3),
])
def test_sweep(tmp_path, extra, n):
    assert run("sweep", "--config", write(tmp_path, extra=extra), "--out", tmp_path) == EXIT_OK
    _, cols, rows = read_csv(tmp_path / "sweep.csv")
    assert cols == ["value", "optimal_fraction", "min_cf", "label"] and len(rows) == n
    if "full_maps" in extra:
        assert len(list((tmp_path / "maps").glob("*.csv"))) == n


def test_sweep_without_parameter_is_config_error(tmp_path):
    assert run("sweep", "--config", write(tmp_path), "--out", tmp_path) == EXIT_CONFIG


def test_converge(tmp_path):
    assert run("converge", "--config", write(tmp_path, f=1500.0), "--out", tmp_path) == EXIT_OK
    _, _, rows = read_csv(tmp_path / "converge.csv")
    assert [r[0] for r in rows] == [20, 30, 40]
    assert rows[-1][1] == 0.0


def test_verify_passes(tmp_path):
    assert run("verify", "--out", tmp_path) == EXIT_OK
    _, _, rows = read_csv(tmp_path / "verify.csv")
    assert all(r[-1] == 1.0 for r in rows)


def test_config_errors(tmp_path, capsys):
    bad = write(tmp_path, k=-5.0)
    assert run("respond", "--config", bad, "--out", tmp_path) == EXIT_CONFIG
    assert "stiffness" in capsys.readouterr().err
    assert run("respond", "--config", tmp_path / "nope.toml") == EXIT_CONFIG
    assert run("respond") == EXIT_CONFIG
    assert run("respond", "--config", write(tmp_path), "--n", 0) == EXIT_CONFIG
    assert run("cfmap", "--config", write(tmp_path), "--threads", -1) == EXIT_CONFIG


def test_undamped_resonance_is_numerical_failure(tmp_path, capsys):
    beam = reference_beam()
    w = natural_frequencies(assemble(beam, ModalBasis(40, 2.0)), count=5)[4]
    cfg = write(tmp_path, k=0.0, c=0.0, f=repr(float(w / (2 * np.pi))))
    assert run("respond", "--config", cfg, "--out", tmp_path) == EXIT_NUMERIC
    assert "near-singular" in capsys.readouterr().err


@pytest.mark.parametrize("cmd, extra, name", [
    ("cfmap", "", "cfmap.csv"),
    ("sweep", 'parameter = "index"\nvalues = [1.0, 3.0]\nproperties = ["density"]', "sweep.csv"),
])
def test_outputs_identical_across_thread_counts(tmp_path, cmd, extra, name):
    cfg = write(tmp_path, extra=extra)
    if cmd == "sweep":
        text = open(cfg).read().replace("density = 2700.0", "density_left = 8640.0\ndensity_right = 540.0")
        open(cfg, "w").write(text)
    assert run(cmd, "--config", cfg, "--out", tmp_path / "t1", "--threads", 1) == EXIT_OK
    assert run(cmd, "--config", cfg, "--out", tmp_path / "t4", "--threads", 4) == EXIT_OK
    assert (tmp_path / "t1" / name).read_bytes() == (tmp_path / "t4" / name).read_bytes()
