"""Config validation, runners, CSV schemas, and CLI exit codes."""

import csv
import io
import json

import pytest

from bigmeasure.cli import run_cli
from bigmeasure.errors import ParseError, ValidationError
from bigmeasure.experiments import (
    GAUGE_COLUMNS,
    config_digest,
    load_config,
    measure_id,
    run_task,
    validate_config,
)
from bigmeasure.measures import PowerWeight


def _rows(text):
    lines = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def _sim_config(**over):
    cfg = {
        "task": "simulate",
        "alpha": 2.0,
        "dim": 3,
        "measure": {"family": "power_weight", "p": -4.0},
        "seed": 91,
        "n_paths": 200,
        "dt": 0.05,
        "horizons": [2.0, 5.0],
        "x": [0.0, 0.0, 0.0],
    }
    cfg.update(over)
    return cfg


# ---------------------------------------------------------------------------
# validation


def test_validation_collects_every_problem():
    bad = {
        "task": "simulate",
        "alpha": 3.0,
        "dim": 3,
        "measure": {"family": "sphere_series", "radii": [1.0, 0.5], "r": 1.0},
        "dt": -0.1,
        "bogus": 1,
    }
    with pytest.raises(ValidationError) as exc:
        validate_config(bad)
    text = str(exc.value)
    assert "unknown key 'bogus'" in text
    assert "missing required key 'seed'" in text
    assert "missing required key 'n_paths'" in text
    assert "missing required key 'horizons'" in text
    assert "'alpha' must be in (0, 2]" in text
    assert "strictly increasing" in text
    assert "'dt' must be positive" in text


def test_parse_error_reports_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"task": "classify",,}')
    with pytest.raises(ParseError) as exc:
        load_config(path)
    assert "line 1 column 21" in str(exc.value)


def test_top_level_and_task_checks():
    with pytest.raises(ValidationError):
        validate_config([1, 2, 3])
    with pytest.raises(ValidationError) as exc:
        validate_config({"task": "frobnicate"})
    assert "'task' must be one of" in str(exc.value)


def test_potential_needs_x_xor_radii():
    base = {"task": "potential", "alpha": 2.0, "dim": 3,
            "measure": {"family": "power_weight", "p": -4.0}}
    with pytest.raises(ValidationError, match="exactly one of 'x' or 'radii'"):
        validate_config(base)
    with pytest.raises(ValidationError, match="exactly one of 'x' or 'radii'"):
        validate_config({**base, "x": 1.0, "radii": [1.0, 2.0]})
    validate_config({**base, "x": 1.0})
    validate_config({**base, "radii": [1.0, 2.0]})


def test_verify_identity_prerequisites():
    cfg = {
        "task": "verify-identity",
        "alpha": 1.5,
        "dim": 3,
        "measure": {"family": "power_weight", "p": -4.0},
        "seed": 1,
        "n_paths": 10,
        "dt": 0.01,
        "horizon": 1.0,
        "x": [0.0, 0.0, 0.0],
    }
    with pytest.raises(ValidationError) as exc:
        validate_config(cfg)
    text = str(exc.value)
    assert "alpha = 2" in text
    assert "boundary_power" in text
    ok = {**cfg, "alpha": 2.0, "measure": {"family": "boundary_power", "r": 0.5}}
    validate_config(ok)


def test_grid_parameter_rules():
    base = {"task": "sweep", "alpha": 1.5, "dim": 3,
            "measure": {"family": "sphere_series", "p": 2.0, "r": 1.0}}
    with pytest.raises(ValidationError, match="does not apply to family"):
        validate_config({**base, "grid": {"q": [1.0, 2.0]}})
    with pytest.raises(ValidationError, match="must be in \\(0, 2\\]"):
        validate_config({**base, "grid": {"alpha": [1.5, 2.5]}})
    tabulated = {**base, "measure": {"family": "sphere_series",
                                     "radii": [1.0, 2.0, 4.0], "tail_exponent": 1.0,
                                     "r": 1.0}}
    with pytest.raises(ValidationError, match="parametric"):
        validate_config({**tabulated, "grid": {"p": [1.0, 2.0]}})
    with pytest.raises(ValidationError, match="one or two parameter"):
        validate_config({**base, "grid": {}})


def test_process_must_agree_with_model():
    cfg = _sim_config(process={"kind": "stable", "alpha": 1.2})
    with pytest.raises(ValidationError, match="must match the top-level alpha"):
        validate_config(cfg)
    cfg = _sim_config(alpha=1.5, process={"kind": "brownian"})
    with pytest.raises(ValidationError, match="requires alpha = 2"):
        validate_config(cfg)


def test_digest_ignores_output_path():
    raw = _sim_config()
    assert config_digest(raw) == config_digest({**raw, "out": "elsewhere.csv"})
    assert config_digest(raw) != config_digest(_sim_config(seed=92))


def test_measure_id_tracks_params():
    assert measure_id(PowerWeight(-4.0)) == measure_id(PowerWeight(-4.0))
    assert measure_id(PowerWeight(-4.0)) != measure_id(PowerWeight(-3.0))
    assert measure_id(PowerWeight(-4.0)).startswith("power_weight-")


# ---------------------------------------------------------------------------
# runners


def test_classify_runner_row():
    cfg = validate_config({"task": "classify", "alpha": 1.5, "dim": 3,
                           "measure": {"family": "sphere_series", "p": 2.0, "r": 1.0}})
    res = run_task(cfg)
    assert res.ok
    assert res.text.startswith("# tool=bigmeasure")
    (row,) = _rows(res.text)
    assert row["conclusion"] == "Big"
    assert row["rule"] == "sphere-mass-series"
    assert json.loads(row["params"])["radii"] == {"power": 2.0}


def test_sweep_sphere_threshold():
    # r = 1, alpha = 1.5: mass exponent p(alpha - 1 - r) >= -1 iff p <= 2
    cfg = validate_config({"task": "sweep", "alpha": 1.5, "dim": 3,
                           "measure": {"family": "sphere_series", "p": 1.6, "r": 1.0},
                           "grid": {"p": [1.6, 1.8, 2.0, 2.2, 2.4]}})
    res = run_task(cfg)
    got = [row["conclusion"] for row in _rows(res.text)]
    assert got == ["Big", "Big", "Big", "NonBig", "NonBig"]
    assert "threshold: Big -> NonBig between p=2.0 and p=2.2" in res.report


def test_sweep_radial_threshold():
    cfg = validate_config({"task": "sweep", "alpha": 2.0, "dim": 3,
                           "measure": {"family": "power_weight", "p": 0.0},
                           "grid": {"p": [-3.0, -2.0, -1.0, 0.0]}})
    res = run_task(cfg)
    got = [row["conclusion"] for row in _rows(res.text)]
    assert got == ["NonBig", "Big", "Big", "Big"]


def test_sweep_two_axes_annulus():
    cfg = validate_config({"task": "sweep", "alpha": 1.5, "dim": 3,
                           "measure": {"family": "annulus_series", "p": 1.0, "q": 2.0, "r": 0.0},
                           "grid": {"p": [0.5, 1.0], "q": [2.0, 2.5, 3.0]}})
    res = run_task(cfg)
    rows = _rows(res.text)
    assert [r["conclusion"] for r in rows] == ["NonBig", "NonBig", "NonBig", "Big", "Big", "NonBig"]
    assert "threshold at p=1.0: Big -> NonBig between q=2.5 and q=3.0" in res.report


def test_simulate_schema_and_thread_independence():
    cfg = validate_config(_sim_config())
    r1 = run_task(cfg, threads=1)
    r3 = run_task(cfg, threads=3)
    assert r1.text == r3.text
    lines = r1.text.splitlines()
    assert lines[0] == "# tool=bigmeasure 0.1.0"
    assert lines[1].startswith("# config_sha256=")
    assert lines[2] == "# seed=91"
    assert lines[3] == ",".join(GAUGE_COLUMNS)
    rows = _rows(r1.text)
    assert [row["T"] for row in rows] == ["2.0", "5.0"]
    for row in rows:
        assert row["n_paths"] == "200"
        assert row["seed"] == "91"
        assert 0.0 < float(row["ghat"]) <= 1.0


def test_sweep_mc_column_deterministic():
    raw = {"task": "sweep", "alpha": 2.0, "dim": 3,
           "measure": {"family": "power_weight", "p": 0.0},
           "grid": {"p": [-3.0, -1.0]},
           "simulate": True, "seed": 5, "n_paths": 80, "dt": 0.05,
           "horizon": 3.0, "x": [0.0, 0.0, 0.0]}
    cfg = validate_config(raw)
    r1 = run_task(cfg, threads=1)
    r3 = run_task(cfg, threads=3)
    assert r1.text == r3.text
    rows = _rows(r1.text)
    # NonBig point should sit well above the Big one at T = 3
    assert float(rows[0]["ghat"]) > float(rows[1]["ghat"])


def test_rotation_check_runner():
    cfg = validate_config({"task": "rotation-check", "alpha": 2.0, "dim": 3,
                           "measure": {"family": "power_weight", "p": -2.0},
                           "seed": 7, "n_paths": 300, "dt": 0.05, "horizon": 2.0,
                           "x": [1.0, 0.0, 0.0],
                           "q_matrix": [[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]})
    res = run_task(cfg)
    assert res.ok
    assert "result=PASS" in res.text


def test_decay_check_runner_outcomes():
    passing = validate_config({"task": "decay-check", "alpha": 2.0, "dim": 3,
                               "measure": {"family": "power_weight", "p": -4.0}})
    res = run_task(passing)
    assert res.ok and "result=PASS" in res.text
    # alpha <= 1 breaks the hypothesis; reported as a failed check, not a crash
    broken = validate_config({"task": "decay-check", "alpha": 0.9, "dim": 3,
                              "measure": {"family": "power_weight", "p": -4.0}})
    res = run_task(broken)
    assert not res.ok
    assert "hypothesis_violated" in res.text


# ---------------------------------------------------------------------------
# CLI


def _write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def test_cli_classify_ok(tmp_path, capsys):
    path = _write(tmp_path, "c.json", {"task": "classify", "alpha": 2.0, "dim": 3,
                                       "measure": {"family": "power_weight", "p": -1.0}})
    assert run_cli(["classify", "--config", path]) == 0
    out = capsys.readouterr().out
    assert "Big" in out


def test_cli_exit_two_on_bad_config(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{nope")
    assert run_cli(["classify", "--config", str(path)]) == 2
    assert "error:" in capsys.readouterr().err


def test_cli_exit_two_on_command_mismatch(tmp_path, capsys):
    path = _write(tmp_path, "sim.json", _sim_config())
    assert run_cli(["sweep", "--config", path]) == 2
    assert "does not belong" in capsys.readouterr().err


def test_cli_exit_one_on_failed_check(tmp_path, capsys):
    # p close to the divergence edge decays too slowly for the default fraction
    path = _write(tmp_path, "d.json", {"task": "decay-check", "alpha": 2.0, "dim": 3,
                                       "measure": {"family": "power_weight", "p": -2.1}})
    assert run_cli(["decay-check", "--config", path]) == 1
    assert "result=FAIL" in capsys.readouterr().out


def test_cli_writes_files_and_overrides_seed(tmp_path, capsys):
    out_a = tmp_path / "a.csv"
    cfg = _sim_config(n_paths=60, horizons=[1.0], out=str(out_a))
    path = _write(tmp_path, "sim.json", cfg)
    assert run_cli(["simulate", "--config", path, "--threads", "2"]) == 0
    capsys.readouterr()
    out_b = tmp_path / "b.csv"
    assert run_cli(["simulate", "--config", path, "--seed", "17",
                    "--out", str(out_b)]) == 0
    capsys.readouterr()
    text_a = out_a.read_text()
    text_b = out_b.read_text()
    assert "# seed=91" in text_a
    assert "# seed=17" in text_b
    assert _rows(text_a)[0]["ghat"] != _rows(text_b)[0]["ghat"]


def test_cli_verify_command_accepts_decay_task(tmp_path, capsys):
    path = _write(tmp_path, "d.json", {"task": "decay-check", "alpha": 2.0, "dim": 3,
                                       "measure": {"family": "power_weight", "p": -4.0}})
    assert run_cli(["verify", "--config", path]) == 0
    assert "result=PASS" in capsys.readouterr().out


def test_cli_sweep_writes_report(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    path = _write(tmp_path, "s.json",
                  {"task": "sweep", "alpha": 1.5, "dim": 3,
                   "measure": {"family": "sphere_series", "p": 1.6, "r": 1.0},
                   "grid": {"p": [1.6, 2.4]}, "out": str(out)})
    assert run_cli(["sweep", "--config", path]) == 0
    capsys.readouterr()
    assert out.exists()
    report = tmp_path / "sweep.csv.report.txt"
    assert "threshold" in report.read_text()
