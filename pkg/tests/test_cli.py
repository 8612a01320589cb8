import csv
import io
import json

import pytest

from src.config import settings as settings_module
from src.main import build_parser, run
from src.models.outputs import CommandTable
from src.workflow.output import render_csv, render_json


def _write_config(tmp_path, **values):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(values), encoding="utf-8")
    return str(path)


def _csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.fixture
def no_env_seed(monkeypatch, tmp_path):
    monkeypatch.delenv("GCPLAB_SEED", raising=False)
    monkeypatch.chdir(tmp_path)
    settings_module.get_settings.cache_clear()
    yield
    settings_module.get_settings.cache_clear()


def test_parser_accepts_every_command_and_optional_suite():
    args = build_parser().parse_args(["verify", "specfun", "--seed", "3", "--workers", "2"])
    assert args.command == "verify"
    assert args.suite == "specfun"
    assert args.seed == 3
    assert args.workers == 2
    assert build_parser().parse_args(["pmf"]).suite is None


def test_pmf_reports_analytic_column_without_mc(tmp_path, capsys, no_env_seed):
    config = _write_config(tmp_path, family="gcp", rates=[1.0, 1.0], n_max=4)

    assert run(["pmf", "--config", config]) == 0
    rows = _csv_rows(capsys.readouterr().out)

    assert [row["n"] for row in rows] == ["0", "1", "2", "3", "4"]
    assert float(rows[2]["analytic"]) == pytest.approx(0.203003, abs=1e-6)
    assert rows[2]["mc"] == ""
    assert rows[2]["mc_stderr"] == ""


def test_unknown_config_key_is_a_validation_error(tmp_path, capsys):
    config = _write_config(tmp_path, family="gcp", rates=[1.0], colour="blue")

    assert run(["pmf", "--config", config]) == 2
    payload = json.loads(capsys.readouterr().out)
    assert payload["error"]["type"] == "ValidationError"


def test_unreadable_config_is_a_config_error(tmp_path, capsys):
    assert run(["pmf", "--config", str(tmp_path / "missing.json")]) == 2
    assert json.loads(capsys.readouterr().out)["error"]["type"] == "ConfigError"


def test_sampling_without_seed_is_refused(tmp_path, capsys, no_env_seed):
    config = _write_config(tmp_path, family="incgamma", rates=[1.0], alpha=0.5)

    assert run(["tails", "--config", config, "--reps", "1000"]) == 2
    assert json.loads(capsys.readouterr().out)["error"]["type"] == "ConfigError"


def test_jet_order_overflow_is_a_numeric_failure(tmp_path, capsys):
    config = _write_config(tmp_path, family="gfcp", rates=[1.0], beta=0.7, n_max=70)

    assert run(["pmf", "--config", config]) == 3
    assert json.loads(capsys.readouterr().out)["error"]["type"] == "JetOrderError"


def test_pmf_output_does_not_depend_on_worker_count(tmp_path, capsys):
    config = _write_config(tmp_path, family="gcp", rates=[0.7, 0.3], n_max=6)
    outputs = []
    for workers in ("1", "2", "8"):
        assert run(["pmf", "--config", config, "--seed", "42", "--reps", "20000", "--workers", workers]) == 0
        outputs.append(capsys.readouterr().out)

    assert outputs[0] == outputs[1] == outputs[2]
    rows = _csv_rows(outputs[0])
    assert all(row["mc"] != "" and row["mc_stderr"] != "" for row in rows)
    for row in rows[:4]:
        assert abs(float(row["mc"]) - float(row["analytic"])) <= 4.0 * float(row["mc_stderr"]) + 1e-12


def test_simulate_repeats_exactly_for_the_same_seed(tmp_path, capsys):
    config = _write_config(tmp_path, family="gcp", rates=[1.0, 0.5], t_grid=[5.0])

    assert run(["simulate", "--config", config, "--seed", "9", "--reps", "3"]) == 0
    first = capsys.readouterr().out
    assert run(["simulate", "--config", config, "--seed", "9", "--reps", "3"]) == 0
    second = capsys.readouterr().out

    assert first == second
    rows = _csv_rows(first)
    assert {row["path"] for row in rows} <= {"0", "1", "2"}
    assert all(0.0 < float(row["epoch"]) <= 5.0 and row["size"] in ("1", "2") for row in rows)


def test_json_format_carries_seed_and_reps(tmp_path, capsys):
    config = _write_config(tmp_path, family="fp", rates=[1.0], args=[0.5, 1.0], transform="pgf")

    assert run(["transform", "--config", config, "--format", "json", "--seed", "4", "--reps", "5000"]) == 0
    payload = json.loads(capsys.readouterr().out)

    assert set(payload) == {"command", "columns", "rows", "seed", "reps"}
    assert payload["command"] == "transform"
    assert payload["seed"] == 4
    assert payload["reps"] == 5000
    assert payload["rows"][1]["arg"] == 1.0
    assert payload["rows"][1]["analytic"] == pytest.approx(1.0, abs=1e-12)


def test_bessel_zero_count_matches_one_third(tmp_path, capsys):
    config = _write_config(tmp_path, family="bessel", rates=[1.0], gamma_dim=2.0, n_max=0)

    assert run(["pmf", "--config", config]) == 0
    rows = _csv_rows(capsys.readouterr().out)
    assert float(rows[0]["analytic"]) == pytest.approx(1.0 / 3.0, rel=1e-10)


def test_out_flag_writes_file(tmp_path, capsys):
    config = _write_config(tmp_path, family="gcp", rates=[1.0], n_max=1)
    target = tmp_path / "results" / "pmf.csv"

    assert run(["pmf", "--config", config, "--out", str(target)]) == 0
    assert capsys.readouterr().out == ""
    assert target.read_text(encoding="utf-8").startswith("n,analytic,mc,mc_stderr\n")


def test_verify_specfun_exits_zero(capsys):
    assert run(["verify", "specfun", "--seed", "1"]) == 0
    rows = _csv_rows(capsys.readouterr().out)
    assert rows
    assert all(row["suite"] == "specfun" and row["passed"] == "true" for row in rows)


def test_renderers_blank_missing_and_non_finite_values():
    table = CommandTable(
        command="demo",
        columns=["x", "mc", "flag"],
        rows=[{"x": 0.1, "mc": None, "flag": True}, {"x": float("inf"), "mc": 2, "flag": False}],
    )

    assert render_csv(table) == "x,mc,flag\n0.1,,true\n,2,false\n"
    payload = json.loads(render_json(table))
    assert payload["rows"][1]["x"] is None
    assert payload["seed"] is None
    assert render_csv(CommandTable(command="empty", columns=["a", "b"])) == "a,b\n"
