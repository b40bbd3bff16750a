import json
import math
from pathlib import Path

import jsonschema
import pytest

from metroq.cli import main

SCHEMA = json.loads((Path(__file__).resolve().parents[1] / "schema" / "report.json").read_text())


def run_cli(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, argv):
    code, out = run_cli(capsys, argv)
    report = json.loads(out)
    jsonschema.validate(report, SCHEMA)
    return code, report


def strip_timing(report):
    return {k: v for k, v in report.items() if k != "wall_time_ms"}


def test_verify_passes_and_validates(capsys):
    code, report = run_json(capsys, ["verify", "--n-max", "6", "--seed", "7"])
    assert code == 0
    assert report["pass"] is True
    names = {r["name"] for r in report["results"]}
    assert {"vectorization-identity", "conversion-n2", "conversion-general-n",
            "counterexample-computational", "counterexample-hadamard",
            "counterexample-unaveraged-fisher", "useful-entanglement",
            "generalized-strategy"} <= names


def test_verify_rejects_oversized_n(capsys):
    with pytest.raises(SystemExit) as err:
        main(["verify", "--n-max", "20"])
    assert err.value.code == 2


def test_verify_unreachable_tolerance_fails(capsys):
    code, report = run_json(
        capsys, ["verify", "--n-max", "4", "--seed", "7", "--tolerance", "1e-30"]
    )
    assert code == 1
    assert report["pass"] is False
    for rec in report["results"]:
        assert "residual" in rec or rec["name"] == "useful-entanglement"


def test_verify_text_format(capsys):
    code, out = run_cli(capsys, ["verify", "--n-max", "4", "--seed", "7", "--format", "text"])
    assert code == 0
    assert "OVERALL: PASS" in out


def test_verify_deterministic(capsys):
    _, first = run_json(capsys, ["verify", "--n-max", "5", "--seed", "3"])
    _, second = run_json(capsys, ["verify", "--n-max", "5", "--seed", "3"])
    assert strip_timing(first) == strip_timing(second)


def test_seed_env_default(capsys, monkeypatch):
    monkeypatch.setenv("METROQ_SEED", "3")
    _, via_env = run_json(capsys, ["verify", "--n-max", "4"])
    monkeypatch.delenv("METROQ_SEED")
    _, via_flag = run_json(capsys, ["verify", "--n-max", "4", "--seed", "3"])
    assert strip_timing(via_env) == strip_timing(via_flag)
    # the flag overrides the environment
    monkeypatch.setenv("METROQ_SEED", "99")
    _, overridden = run_json(capsys, ["verify", "--n-max", "4", "--seed", "3"])
    assert strip_timing(overridden) == strip_timing(via_flag)


def test_seed_env_must_be_integer(capsys, monkeypatch):
    monkeypatch.setenv("METROQ_SEED", "not-a-number")
    with pytest.raises(SystemExit) as err:
        main(["verify", "--n-max", "4"])
    assert err.value.code == 2


def test_negative_seed_is_usage_error(capsys):
    with pytest.raises(SystemExit) as err:
        main(["verify", "--n-max", "4", "--seed", "-1"])
    assert err.value.code == 2


SCALING_ARGS = [
    "scaling", "--strategies", "entangled,classical",
    "--n-values", "1,2,4,8", "--nu", "1000", "--rounds", "100", "--seed", "7",
]


def test_scaling_csv_and_slopes(capsys, tmp_path):
    out_csv = tmp_path / "scaling.csv"
    code, report = run_json(capsys, SCALING_ARGS + ["--out", str(out_csv)])
    assert code == 0
    lines = out_csv.read_text().splitlines()
    assert lines[0] == "strategy,N,nu,rounds,empirical_rmse,crb,seed"
    assert len(lines) == 1 + 2 * 4
    by_name = {r["name"]: r for r in report["results"]}
    assert -1.15 <= by_name["scaling-entangled"]["fitted_slope"] <= -0.85
    assert -0.65 <= by_name["scaling-classical"]["fitted_slope"] <= -0.35
    assert "slope_stderr" in by_name["scaling-entangled"]


def test_scaling_rerun_is_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run_json(capsys, SCALING_ARGS + ["--out", str(a)])
    run_json(capsys, SCALING_ARGS + ["--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_scaling_unwritable_path(capsys, tmp_path):
    code = main(SCALING_ARGS + ["--out", str(tmp_path / "missing-dir" / "x.csv")])
    capsys.readouterr()
    assert code == 3


def test_scaling_needs_three_sizes(capsys):
    with pytest.raises(SystemExit) as err:
        main(["scaling", "--n-values", "1,2"])
    assert err.value.code == 2


def test_scaling_caps(capsys):
    with pytest.raises(SystemExit) as err:
        main(["scaling", "--nu", "1000000"])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        main(["scaling", "--rounds", "5000"])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        main(["scaling", "--n-values", "1,2,4,16"])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        main(["scaling", "--strategies", "warp"])
    assert err.value.code == 2


def test_noise_reports(capsys):
    code, report = run_json(capsys, ["noise", "--channel", "dephasing", "--p", "0.25"])
    assert code == 0
    rec = report["results"][0]
    assert rec["unital"] and rec["diag_or_antidiag"] and rec["trace_preserving"]
    assert rec["eq_residual"] < 1e-12
    assert rec["valid_beyond_n2"] is True

    code, report = run_json(capsys, ["noise", "--channel", "amplitudedamping", "--p", "0.3"])
    assert code == 0  # the unitality <-> trace-preservation metacheck still holds
    rec = report["results"][0]
    assert not rec["unital"] and not rec["trace_preserving"]
    assert not rec["diag_or_antidiag"]

    code, report = run_json(capsys, ["noise", "--channel", "bitphaseflip", "--p", "0.4"])
    assert report["results"][0]["diag_or_antidiag"] is True

    with pytest.raises(SystemExit) as err:
        main(["noise", "--channel", "dephasing", "--p", "1.5"])
    assert err.value.code == 2


def test_frequency_reports_constant_bound(capsys):
    code, report = run_json(
        capsys, ["frequency", "--gamma", "1.0", "--n-values", "1,2,4,8", "--nu", "1"]
    )
    assert code == 0
    rec = report["results"][0]
    assert rec["relative_spread"] < 1e-6
    assert abs(rec["closed_form"] - math.e) < 1e-12
    for row in rec["rows"]:
        assert abs(row["bound_star"] - math.e) < 1e-5
        assert abs(row["t_star"] - 1.0 / row["N"]) < 1e-6

    with pytest.raises(SystemExit) as err:
        main(["frequency", "--gamma", "-1"])
    assert err.value.code == 2


def test_noon_reports(capsys):
    code, report = run_json(capsys, ["noon", "--n", "4"])
    assert code == 0
    assert all(rec["max_deviation"] < 1e-12 for rec in report["results"])
    with pytest.raises(SystemExit) as err:
        main(["noon", "--n", "13"])
    assert err.value.code == 2


def test_fisher_reports(capsys):
    code, report = run_json(capsys, ["fisher", "--n-values", "1,2,4,8", "--nu", "100"])
    assert code == 0
    rows = report["results"][0]["rows"]
    assert [row["N"] for row in rows] == [1, 2, 4, 8]
    for row in rows:
        assert abs(row["qfi_ghz"] - row["N"] ** 2) < 1e-10
        assert abs(row["qfi_product"] - row["N"]) < 1e-10
        assert abs(row["crb_entangled"] - 1 / (row["N"] * 10)) < 1e-12
