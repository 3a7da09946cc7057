"""CLI harness tests: subcommands, config handling, determinism."""

import json
import math

import numpy as np
import pytest

from hyperheat import cli, spectral
from hyperheat.cli import RunConfig, load_config, main, run_suite
from hyperheat.errors import ConfigError


def test_runconfig_validation():
    RunConfig().validate()
    with pytest.raises(ConfigError):
        RunConfig(eps=0.0).validate()
    with pytest.raises(ConfigError):
        RunConfig(eps=0.6, detour=0.5).validate()
    with pytest.raises(ConfigError):
        RunConfig(A=3.5).validate()
    with pytest.raises(ConfigError):
        RunConfig(tol=-1.0).validate()
    with pytest.raises(ConfigError):
        RunConfig(t=0.0).validate()


def test_config_file_roundtrip(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("n = 2\nt = 0.5  # a comment\n\neps=0.2\n")
    cfg = load_config(str(path))
    assert cfg == {"n": 2, "t": 0.5, "eps": 0.2}
    bad = tmp_path / "bad.cfg"
    bad.write_text("nonsense\n")
    with pytest.raises(ConfigError):
        load_config(str(bad))
    unknown = tmp_path / "unknown.cfg"
    unknown.write_text("zz = 1\n")
    with pytest.raises(ConfigError):
        load_config(str(unknown))


def test_invalid_config_exit_code(tmp_path):
    out = tmp_path / "r.json"
    code = main(["spherheat", "--eps", "0", "--out", str(out)])
    assert code == 2


def test_kernel_csv(tmp_path):
    out = tmp_path / "nu.csv"
    code = main(["kernel", "--flavor", "nu", "--n", "1", "--t", "1",
                 "--rmax", "3.0", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("#")
    assert lines[1] == "r,value"
    data = np.array([[float(x) for x in ln.split(",")] for ln in lines[2:]])
    # grid guard: no sample within eps of pi
    assert np.all(np.abs(data[:, 0] - math.pi) > 0.3 - 1e-12)
    assert np.all(np.isfinite(data))


def test_kernel_csv_complex(tmp_path):
    out = tmp_path / "nu_c.csv"
    code = main(["kernel", "--flavor", "nu", "--complex", "--imag", "0.3",
                 "--rmax", "8.0", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[1] == "re_r,im_r,re_v,im_v"
    row = [float(x) for x in lines[2].split(",")]
    assert row[1] == 0.3


@pytest.mark.parametrize("flavor", ["gamma", "w", "rho"])
def test_kernel_other_flavors(tmp_path, flavor):
    out = tmp_path / f"{flavor}.csv"
    assert main(["kernel", "--flavor", flavor, "--rmax", "2.5",
                 "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) > 10


def test_transform_command(tmp_path):
    prof = tmp_path / "p.csv"
    p = spectral.profile_from_fhat(
        lambda lam: np.exp(-lam ** 2 / 4), 1,
        *spectral.gauss_legendre_grid(8.0, 40))
    spectral.profile_to_csv(p, str(prof))
    out = tmp_path / "q.csv"
    code = main(["transform", "--in", str(prof), "--t", "1.0",
                 "--out", str(out)])
    assert code == 0
    q = spectral.profile_from_csv(str(out))
    expect = p.values * np.exp(-0.5 * (p.grid ** 2 + 1))
    np.testing.assert_allclose(q.values, expect, rtol=1e-12)


def test_spherheat_report_schema(tmp_path):
    out = tmp_path / "rep.json"
    code = main(["spherheat", "--lambda", "1.0", "--n", "1", "--t", "0.5",
                 "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    for key in ("params", "R_sequence", "values", "extrapolated", "target",
                "residual", "boundary_max", "quad_error"):
        assert key in doc
    assert doc["residual"] <= 1e-6
    assert doc["target"][0] == pytest.approx(math.exp(0.5 * 2))


def test_isometry_and_inversion_commands(tmp_path):
    iso = tmp_path / "iso.json"
    code = main(["isometry", "--n", "1", "--t", "1.0", "--num-lambda", "120",
                 "--out", str(iso)])
    assert code == 0
    assert json.loads(iso.read_text())["residual"] <= 1e-4
    inv = tmp_path / "inv.json"
    code = main(["inversion", "--n", "1", "--t", "1.0", "--num-lambda", "120",
                 "--out", str(inv)])
    assert code == 0
    assert json.loads(inv.read_text())["residual"] <= 1e-4


def test_suite_symbolic(tmp_path):
    out = tmp_path / "suite.json"
    code = main(["suite", "--suite", "symbolic", "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["passed"]
    assert all(c["value"] <= 1e-9 for c in doc["checks"])


def test_run_suite_unknown():
    with pytest.raises(ConfigError):
        run_suite("bogus", RunConfig())


def test_table_convergence(tmp_path):
    out = tmp_path / "conv.csv"
    code = main(["table", "--kind", "convergence", "--lambda", "1.0",
                 "--n", "1", "--t", "0.5", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("#")          # config echo
    assert lines[1].split(",")[0] == "j"
    final = lines[-1].split(",")
    assert float(final[-1]) <= 1e-6          # final-row residual vs e


def test_table_kernel_and_profile(tmp_path):
    for kind in ("kernel", "profile"):
        out = tmp_path / f"{kind}.csv"
        assert main(["table", "--kind", kind, "--out", str(out)]) == 0
        assert len(out.read_text().splitlines()) > 2


def test_table_empty_grid_header_only(tmp_path):
    out = tmp_path / "empty.csv"
    code = main(["table", "--kind", "profile", "--num-lambda", "0",
                 "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[1] == "lambda,re_fhat,im_fhat"
    assert len(lines) == 2


def test_determinism_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert main(["spherheat", "--lambda", "1.5", "--n", "2",
                     "--t", "0.5", "--out", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_config_echo_in_outputs(tmp_path):
    out = tmp_path / "k.csv"
    main(["kernel", "--n", "2", "--t", "0.5", "--rmax", "2.0",
          "--out", str(out)])
    head = out.read_text().splitlines()[0]
    assert "n=2" in head and "t=0.5" in head
