import math

import numpy as np
import pytest

from kerrsnr import cli
from kerrsnr.config import (
    ConfigError,
    Experiment,
    load_config,
    parse_config_text,
)


MINIMAL = "experiment = polarisation\nrun.base_seed = 42\n"


def test_minimal_config_parses():
    cfg = parse_config_text(MINIMAL)
    assert cfg.experiment is Experiment.POLARISATION
    assert cfg["run.base_seed"] == 42
    assert cfg["params.gamma_c"] == 2.0
    assert "params.gamma_c" in cfg.defaulted
    assert "run.base_seed" not in cfg.defaulted


def test_comments_and_blank_lines():
    cfg = parse_config_text(
        "# a comment\n\nexperiment = polarisation  # trailing\n"
        "run.base_seed = 1\nparams.beta = 0.25\n"
    )
    assert cfg["params.beta"] == 0.25


@pytest.mark.parametrize("text,fragment", [
    ("experiment = polarisation\n", "run.base_seed"),
    ("run.base_seed = 1\n", "experiment"),
    ("experiment = polarisation\nrun.base_seed = 1\nbogus = 2\n", "unknown key"),
    ("experiment = polarisation\nrun.base_seed = 1\nrun.base_seed = 2\n",
     "duplicate"),
    ("experiment = warp_drive\nrun.base_seed = 1\n", "unknown experiment"),
    ("experiment = polarisation\nrun.base_seed = 1\nparams.gamma_b = -1\n",
     "gamma_b"),
    ("experiment = polarisation\nrun.base_seed = 1\ngrid.dt = 0\n", "dt"),
    ("experiment = polarisation\nrun.base_seed = 1\npulse.kind = sawtooth\n",
     "pulse.kind"),
    ("experiment = polarisation\nrun.base_seed = 1\nrun.n_traj = oops\n",
     "invalid value"),
    ("experiment = polarisation\nrun.base_seed = 1\nnot a kv line\n",
     "key = value"),
])
def test_rejected_configs(text, fragment):
    with pytest.raises(ConfigError, match=fragment):
        parse_config_text(text)


def test_experiment_scoped_keys():
    with pytest.raises(ConfigError, match="not valid"):
        parse_config_text(MINIMAL + "sweep.beta_min = 0.1\n")
    cfg = parse_config_text(
        "experiment = snr_beta_sweep\nrun.base_seed = 1\nsweep.beta_min = 0.1\n"
    )
    assert cfg["sweep.beta_min"] == 0.1


def test_declared_experiment_must_match_request():
    with pytest.raises(ConfigError, match="declares"):
        parse_config_text(MINIMAL, experiment=Experiment.RATIO_SWEEP)


def test_stochastic_experiment_needs_trajectories():
    with pytest.raises(ConfigError, match="n_traj"):
        parse_config_text("experiment = snr_histogram\nrun.base_seed = 1\n")


def test_list_valued_keys():
    cfg = parse_config_text(
        "experiment = ratio_sweep\nrun.base_seed = 1\nratio.values = 1, 5, 30\n"
    )
    assert cfg["ratio.values"] == [1.0, 5.0, 30.0]


def test_manifest_marks_defaults():
    cfg = parse_config_text(MINIMAL)
    lines = cfg.manifest_lines()
    assert lines[0] == "experiment = polarisation"
    assert any(l.startswith("params.beta = 0.4") and "# default" in l
               for l in lines)
    assert any(l == "run.base_seed = 42" for l in lines)


def test_load_config_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_config(tmp_path / "nope.cfg")


# --- CSV writer -------------------------------------------------------------


def test_write_csv_roundtrips_doubles(tmp_path):
    path = tmp_path / "x.csv"
    value = 1.0 / 3.0
    cli.write_csv(path, ["a", "b"], [(value, "tag")])
    header, row = path.read_text().splitlines()
    assert header == "a,b"
    col, tag = row.split(",")
    assert float(col) == value  # 17 significant digits: exact roundtrip
    assert tag == "tag"


# --- end-to-end CLI ---------------------------------------------------------


def test_cli_polarisation_run(tmp_path):
    out = tmp_path / "run"
    rc = cli.main(["polarisation", "--seed", "3", "--out", str(out),
                   "--dt", "0.004"])
    assert rc == cli.EXIT_OK
    assert (out / "polarisation.csv").exists()
    assert (out / "manifest.txt").exists()
    assert (out / "summary.txt").exists()
    assert not (out / cli.INCOMPLETE_SENTINEL).exists()
    rows = np.loadtxt(out / "polarisation.csv", delimiter=",", skiprows=1)
    assert rows.shape[1] == 3
    assert rows[0, 0] == 0.0
    assert rows[:, 2].max() > 0.1


def test_cli_runs_are_bit_reproducible(tmp_path):
    args = ["snr_histogram", "--seed", "9", "--ntraj", "12", "--dt", "0.004"]
    rc1 = cli.main(args + ["--out", str(tmp_path / "a")])
    rc2 = cli.main(args + ["--out", str(tmp_path / "b")])
    assert rc1 == rc2 == cli.EXIT_OK
    assert (tmp_path / "a" / "histogram.csv").read_bytes() == \
        (tmp_path / "b" / "histogram.csv").read_bytes()


def test_cli_config_error_exit_code(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("experiment = polarisation\nrun.base_seed = 1\nwat = 1\n")
    assert cli.main(["polarisation", "--config", str(cfg)]) == cli.EXIT_CONFIG
    assert cli.main(["polarisation"]) == cli.EXIT_CONFIG  # no seed at all


def test_cli_numerical_error_exit_code(tmp_path):
    cfg = tmp_path / "blowup.cfg"
    # a step size far too large for the rates: the integrator must abort
    cfg.write_text(
        "experiment = snr_histogram\nrun.base_seed = 1\nrun.n_traj = 4\n"
        "params.beta = 1.2\ngrid.dt = 0.5\n"
    )
    rc = cli.main(["snr_histogram", "--config", str(cfg),
                   "--out", str(tmp_path / "o")])
    assert rc == cli.EXIT_NUMERICAL
    # the sentinel stays behind: the run did not complete
    assert (tmp_path / "o" / cli.INCOMPLETE_SENTINEL).exists()


def test_cli_check_failure_exit_code(monkeypatch):
    from kerrsnr import acceptance

    def fake_run_all(fast=False, ctx=None):
        return [acceptance.CriterionResult("stub", False, "forced failure")]

    monkeypatch.setattr(acceptance, "run_all", fake_run_all)
    assert cli.main(["check", "--fast"]) == cli.EXIT_CHECK_FAILED


def test_cli_transmission_spectrum(tmp_path):
    out = tmp_path / "tr"
    rc = cli.main(["transmission_spectrum", "--seed", "1", "--out", str(out)])
    assert rc == cli.EXIT_OK
    rows = np.loadtxt(out / "transmission.csv", delimiter=",", skiprows=1)
    assert rows.shape == (401, 4)
    mags = rows[:, 3]
    assert mags.max() <= 1.0 + 1e-12
    assert np.allclose(rows[:, 1] ** 2 + rows[:, 2] ** 2, mags, atol=1e-12)
