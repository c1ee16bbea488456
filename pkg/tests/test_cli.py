"""End-to-end checks of the command line front end."""

import csv
import json
import math
import pathlib

import click
import pytest
from click.testing import CliRunner

from moyaldist import cli, verification


@pytest.fixture()
def runner():
    return CliRunner()


def payload_from(output: str) -> dict:
    return json.loads(output)


# parsing helpers


@pytest.mark.parametrize(
    "text, expected",
    [
        ("1.5", 1.5 + 0j),
        ("0.5-0.3i", 0.5 - 0.3j),
        ("i", 1j),
        ("-i", -1j),
        ("-2i", -2j),
        ("1+i", 1 + 1j),
        (" 1 + 2i ", 1 + 2j),
        ("2j", 2j),
    ],
)
def test_parse_complex(text, expected):
    assert cli.parse_complex(text) == expected


@pytest.mark.parametrize("text", ["", "nope", "1+2", "--"])
def test_parse_complex_rejects_garbage(text):
    with pytest.raises(ValueError):
        cli.parse_complex(text)


@pytest.mark.parametrize("value", [2.0, -0.25j, 0.5 - 0.3j, 1 + 1j, 0j])
def test_format_complex_roundtrip(value):
    assert cli.parse_complex(cli.format_complex(value)) == complex(value)


def test_sanitize_handles_nonfinite_and_complex():
    payload = {
        "a": math.inf,
        "b": -math.inf,
        "c": math.nan,
        "d": 1 - 2j,
        "e": [math.inf, {"f": 3j}],
        "g": 0.5,
    }
    clean = cli._sanitize(payload)
    assert clean["a"] == "inf"
    assert clean["b"] == "-inf"
    assert clean["c"] == "nan"
    assert clean["d"] == "1.0-2.0i"
    assert clean["e"][0] == "inf"
    assert clean["e"][1]["f"] == "0.0+3.0i"
    assert clean["g"] == 0.5


def test_run_config_validation():
    cfg = cli.RunConfig(theta=1.0, lam=1 + 0j, n_max=24, order=4)
    assert cfg.order == 4
    with pytest.raises(ValueError):
        cli.RunConfig(theta=0.0, lam=1 + 0j, n_max=24, order=4)
    with pytest.raises(ValueError):
        cli.RunConfig(theta=1.0, lam=1 + 0j, n_max=1, order=0)
    with pytest.raises(ValueError):
        cli.RunConfig(theta=1.0, lam=1 + 0j, n_max=24, order=23)


def test_parse_grid():
    grid = cli._parse_grid("0:1:3")
    assert list(grid) == [0.0, 0.5, 1.0]
    for bad in ("0:1", "a:b:3", "0:1:0"):
        with pytest.raises(click.UsageError):
            cli._parse_grid(bad)


# distance command


def test_distance_moyal_json(runner):
    result = runner.invoke(
        cli.main,
        ["distance", "moyal", "--theta", "1", "--z", "0.5", "--n-max", "16", "-N", "3"],
    )
    assert result.exit_code == 0, result.output
    data = payload_from(result.output)
    assert data["value"] == pytest.approx(math.sqrt(2) * 0.5, rel=1e-12)
    assert data["method"] == "analytic"
    assert data["n_max"] == 16
    assert data["N"] == 3
    assert data["ball_norm"] == pytest.approx(1.0, abs=1e-8)
    assert data["params"]["kind"] == "moyal"
    assert data["params"]["z"] == "0.5"


def test_distance_moyal_translated_pair(runner):
    result = runner.invoke(
        cli.main,
        ["distance", "moyal", "--z-from", "0.3+0.4i", "--z", "0.8+0.4i",
         "--n-max", "40"],
    )
    assert result.exit_code == 0, result.output
    data = payload_from(result.output)
    assert data["value"] == pytest.approx(math.sqrt(2) * 0.5, abs=1e-8)


def test_distance_twopoint_json(runner):
    result = runner.invoke(cli.main, ["distance", "twopoint", "--lambda", "1.5+0.5i"])
    assert result.exit_code == 0, result.output
    data = payload_from(result.output)
    assert data["value"] == pytest.approx(0.6324555320336759, rel=1e-12)
    assert data["params"]["lambda"] == "1.5+0.5i"


def test_distance_twopoint_phase_invariance(runner):
    plain = runner.invoke(cli.main, ["distance", "twopoint", "--lambda", "2"])
    rotated = runner.invoke(
        cli.main, ["distance", "twopoint", "--lambda", "2", "--lambda-phase", "1.0"]
    )
    assert plain.exit_code == 0 and rotated.exit_code == 0
    assert payload_from(plain.output)["value"] == pytest.approx(0.5, rel=1e-15)
    assert payload_from(rotated.output)["value"] == pytest.approx(0.5, rel=1e-12)


def test_distance_twopoint_zero_coupling_reports_inf(runner):
    result = runner.invoke(cli.main, ["distance", "twopoint", "--lambda", "0"])
    assert result.exit_code == 0, result.output
    data = payload_from(result.output)
    assert data["value"] == "inf"
    assert data["warnings"]


def test_distance_out_writes_file(runner, tmp_path):
    target = tmp_path / "report.json"
    result = runner.invoke(
        cli.main, ["distance", "twopoint", "--lambda", "2", "--out", str(target)]
    )
    assert result.exit_code == 0, result.output
    assert "wrote" in result.output
    data = json.loads(target.read_text())
    assert data["value"] == pytest.approx(0.5)


def test_distance_usage_errors_exit_2(runner):
    assert runner.invoke(cli.main, ["distance", "moyal", "--theta", "-1"]).exit_code == 2
    assert runner.invoke(cli.main, ["distance", "moyal", "--z", "nope"]).exit_code == 2
    assert runner.invoke(cli.main, ["distance", "twopoint", "--lambda", "bad"]).exit_code == 2
    assert runner.invoke(
        cli.main, ["distance", "moyal", "--n-max", "10", "-N", "9"]
    ).exit_code == 2


def test_distance_degraded_projector_exits_1(runner):
    result = runner.invoke(
        cli.main,
        ["distance", "transverse", "--z", "0.9", "--n-max", "12", "-N", "2"],
    )
    assert result.exit_code == 1


# pythagoras command


def test_pythagoras_passes(runner, tmp_path):
    target = tmp_path / "pyth.json"
    result = runner.invoke(cli.main, ["pythagoras", "--out", str(target)])
    assert result.exit_code == 0, result.output
    assert "PASS Pythagoras residual" in result.output
    data = json.loads(target.read_text())
    assert data["passes"] is True
    expected = math.hypot(data["d_longitudinal"], data["d_transverse"])
    assert data["d_hypotenuse"] == pytest.approx(expected, rel=1e-10)
    assert data["residual"] <= data["tolerance"]


# spectrum command


def test_spectrum_csv_and_figure(runner, tmp_path):
    target = tmp_path / "spec.csv"
    result = runner.invoke(
        cli.main, ["spectrum", "--n-max", "8", "--out", str(target)]
    )
    assert result.exit_code == 0, result.output
    assert "max residual" in result.output
    with target.open() as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == ["m", "family", "predicted", "computed", "residual"]
    assert len(rows) - 1 == 4 * 8 - 2
    assert all(float(r[4]) < 1e-8 for r in rows[1:])
    assert target.with_suffix(".png").exists()


def test_spectrum_no_plot_skips_figure(runner, tmp_path):
    target = tmp_path / "spec.csv"
    result = runner.invoke(
        cli.main, ["spectrum", "--n-max", "8", "--out", str(target), "--no-plot"]
    )
    assert result.exit_code == 0, result.output
    assert target.exists()
    assert not target.with_suffix(".png").exists()


# higgs-sweep command


def test_higgs_sweep_default_config(runner, tmp_path):
    target = tmp_path / "sweep.csv"
    result = runner.invoke(
        cli.main,
        ["higgs-sweep", "--grid-re", "0:0.5:2", "--grid-im", "0:0:1",
         "--out", str(target), "--no-plot"],
    )
    assert result.exit_code == 0, result.output
    assert "0 flagged" in result.output
    with target.open() as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == ["Re z", "Im z", "distance", "warning"]
    assert len(rows) - 1 == 2
    for r in rows[1:]:
        assert float(r[2]) == pytest.approx(1.0 / (1.2 * 1.36), rel=1e-6)


def zero_field_json(n_max: int) -> dict:
    dim = n_max + 1
    return {
        "c_matrix": [[[0.0, 0.0] for _ in range(dim)] for _ in range(dim)],
        "alpha1": [1.0, 0.0],
        "alpha2": [-1.0, 0.0],
        "beta1": [0.0, 0.0],
        "beta2": [0.8, 0.0],
    }


def test_higgs_sweep_config_file(runner, tmp_path):
    config = tmp_path / "field.json"
    config.write_text(json.dumps(zero_field_json(12)))
    target = tmp_path / "sweep.csv"
    result = runner.invoke(
        cli.main,
        ["higgs-sweep", "--config", str(config), "--n-max", "12",
         "--grid-re", "0:0:1", "--grid-im", "0:0:1",
         "--out", str(target), "--no-plot"],
    )
    assert result.exit_code == 0, result.output
    with target.open() as handle:
        rows = list(csv.reader(handle))
    assert len(rows) - 1 == 1
    assert float(rows[1][2]) == pytest.approx(1.0 / 1.2, rel=1e-9)


def test_higgs_sweep_renders_figure(runner, tmp_path):
    target = tmp_path / "sweep.csv"
    result = runner.invoke(
        cli.main,
        ["higgs-sweep", "--grid-re", "0:0.5:2", "--grid-im", "0:0:1",
         "--out", str(target)],
    )
    assert result.exit_code == 0, result.output
    assert target.with_suffix(".png").exists()


def test_higgs_sweep_malformed_configs_exit_2(runner, tmp_path):
    not_json = tmp_path / "a.json"
    not_json.write_text("not json")
    missing_key = tmp_path / "b.json"
    bad = zero_field_json(12)
    del bad["alpha1"]
    missing_key.write_text(json.dumps(bad))
    wrong_shape = tmp_path / "c.json"
    wrong_shape.write_text(json.dumps(zero_field_json(4)))
    for config in (not_json, missing_key, wrong_shape):
        result = runner.invoke(
            cli.main,
            ["higgs-sweep", "--config", str(config), "--n-max", "12",
             "--grid-re", "0:0:1", "--grid-im", "0:0:1", "--no-plot",
             "--out", str(tmp_path / "out.csv")],
        )
        assert result.exit_code == 2, config.name


# verify command (criteria stubbed; the real runs live in the acceptance suite)


def test_verify_reports_per_criterion(runner, monkeypatch):
    ok = verification.CriterionResult(name="stub ok", passed=True, details="fine")
    monkeypatch.setattr(verification, "CRITERIA", (("1", lambda: ok),))
    monkeypatch.setattr(verification, "negative_control", lambda: ok)
    result = runner.invoke(cli.main, ["verify", "--negative-control"])
    assert result.exit_code == 0, result.output
    assert "PASS criterion 1: stub ok (fine)" in result.output
    assert "all checks passed" in result.output


def test_verify_failure_exits_1(runner, monkeypatch):
    ok = verification.CriterionResult(name="stub ok", passed=True, details="fine")
    bad = verification.CriterionResult(name="stub bad", passed=False, details="off")
    monkeypatch.setattr(
        verification, "CRITERIA", (("1", lambda: ok), ("2", lambda: bad))
    )
    result = runner.invoke(cli.main, ["verify"])
    assert result.exit_code == 1
    assert "FAIL criterion 2: stub bad (off)" in result.output
    assert "1 check(s) failed" in result.output


# oracle command


def test_oracle_twopoint_recovers_analytic(runner):
    result = runner.invoke(
        cli.main, ["oracle", "twopoint", "--lambda", "1.5", "--starts", "4"]
    )
    assert result.exit_code == 0, result.output
    lines = result.output.strip().splitlines()
    assert lines[-1].startswith("recovered 100.00%")
    data = json.loads("\n".join(lines[:-1]))
    assert data["analytic"] == pytest.approx(1.0 / 1.5, rel=1e-12)
    assert data["ratio"] == pytest.approx(1.0, abs=1e-6)
    assert data["method"] == "oracle"


def test_version_flag(runner):
    result = runner.invoke(cli.main, ["--version"])
    assert result.exit_code == 0
    assert "moyaldist" in result.output
    assert "1.0.0" in result.output
