import json

import pytest

from ptsphere.cli import main

BAD_MASA = {
    "n": 2,
    "basis": "u2",
    "name": "noncommuting",
    "generators": [
        [
            {"re": "0", "im": "0"},
            {"re": "1", "im": "0"},
            {"re": "0", "im": "0"},
        ],
        [
            {"re": "0", "im": "0"},
            {"re": "0", "im": "0"},
            {"re": "1", "im": "0"},
        ],
    ],
}


def _run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_validate_catalog_model(capsys):
    code, out = _run(["validate", "--model", "su2ab", "--a", "2", "--b", "1"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["masa_valid"] is True
    assert doc["pt_classification"] == [-1, -1]
    assert doc["seed"] == 20230411
    assert "version" in doc


def test_validate_bad_masa_file_exits_1(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(BAD_MASA))
    code, out = _run(["validate", "--masa", str(path)], capsys)
    assert code == 1
    doc = json.loads(out)
    assert doc["masa_valid"] is False
    assert doc["failures"]


def test_unknown_model_exits_2(capsys):
    assert main(["validate", "--model", "nope"]) == 2


def test_missing_spectrum_couplings_exits_2(capsys):
    assert main(["spectrum", "--model", "s1"]) == 2


def test_csv_on_json_only_command_exits_2(capsys):
    assert main(["validate", "--model", "nilpotent", "--format", "csv"]) == 2


def test_reduce_reports_identities(capsys):
    code, out = _run(["reduce", "--model", "cartan_od"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["identities"]["zhat_eq_k"]["passed"] is True
    assert doc["identities"]["casimir_projection"]["passed"] is True
    assert doc["identities"]["sum_relation"]["passed"] is True
    assert "potential" in doc and "integrals" in doc


def test_verify_command(capsys):
    code, out = _run(["verify", "--model", "su2ab", "--a", "2", "--b", "1"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["conservation"]["passed"] is True
    assert doc["bracket_preservation"]["passed"] is True
    assert doc["pt_invariance"]["passed"] is True


def test_spectrum_s1_from_g_parameters(capsys):
    code, out = _run(
        ["spectrum", "--model", "s1", "--gminus", "2", "--gplus", "3", "--N", "128"],
        capsys,
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["phase"] == "exact"
    assert doc["grid_N"] == 128
    rows = doc["rows"]
    assert rows[0][3] == 0.0  # lowest closed-form level on this tower
    for row in rows:
        assert row[4] <= 1e-6


def test_spectrum_csv_output(tmp_path, capsys):
    out_path = tmp_path / "spec.csv"
    code = main(
        [
            "spectrum", "--model", "poschl_teller", "--gminus", "2",
            "--gplus", "3", "--N", "512", "--format", "csv",
            "--out", str(out_path),
        ]
    )
    assert code == 0
    lines = out_path.read_text().strip().splitlines()
    assert lines[0].split(",")[:3] == ["index", "re_E", "im_E"]
    assert len(lines) > 4


def test_spectrum_degenerate_bessel(capsys):
    code, out = _run(
        ["spectrum", "--model", "degenerate", "--alpha", "2", "--q", "1"], capsys
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["bessel_ode_residual"] <= 1e-10


def test_scan_restricted_to_lambda_family(capsys):
    assert main(["scan", "--model", "su2ab"]) == 2


def test_scan_small_grid(capsys):
    code, out = _run(
        ["scan", "--model", "lambda", "--lambda2", "0.1:0.3:0.1", "--N", "128"],
        capsys,
    )
    assert code == 0
    doc = json.loads(out)
    assert all(r[1] == "exact" for r in doc["rows"])
    assert len(doc["rows"]) >= 2


def test_reports_are_deterministic(capsys):
    _, out1 = _run(["validate", "--model", "nilpotent"], capsys)
    _, out2 = _run(["validate", "--model", "nilpotent"], capsys)
    assert out1 == out2
