"""Manifest serialization, exhaustive ingest validation, and the CLI."""

import json

import pytest

from contact_tensor import cli
from contact_tensor.catalog import build, entry_ids
from contact_tensor.manifest import (
    ManifestError,
    entry_from_ingest,
    export_entry,
    ingest_manifest,
    load_manifest,
    manifest_to_json,
)
from contact_tensor.report import build_report


def test_export_golden_sphere():
    doc = export_entry(build("sphere"))
    assert list(doc) == ["schema_version", "name", "dimension", "mode",
                        "symbols", "brackets", "metric", "phi", "xi"]
    assert doc["schema_version"] == 1
    assert doc["name"] == "sphere"
    assert doc["mode"] == "abstract"
    assert doc["symbols"] == []
    assert doc["brackets"] == [
        {"i": 1, "j": 2, "components": ["0", "0", "2"]},
        {"i": 1, "j": 3, "components": ["0", "-2", "0"]},
        {"i": 2, "j": 3, "components": ["2", "0", "0"]},
    ]
    assert doc["xi"] == ["1", "0", "0"]
    assert doc["phi"][1] == ["0", "0", "1"]


def test_export_chart_uses_frame_key():
    doc = export_entry(build("example41"))
    assert doc["mode"] == "chart"
    assert "brackets" not in doc
    assert doc["frame"] == [["0", "2/x", "0"], ["2", "-4*z/x", "x*y"],
                            ["0", "0", "1"]]
    names = [rec["name"] for rec in doc["symbols"]]
    assert names == ["x", "y", "z"]


def test_round_trip_is_byte_identical():
    for name in entry_ids():
        first = manifest_to_json(export_entry(build(name)))
        result = ingest_manifest(json.loads(first))
        second = manifest_to_json(export_entry(entry_from_ingest(result)))
        assert first == second, name


def test_ingest_collects_all_errors():
    doc = {
        "schema_version": 2,
        "name": "",
        "dimension": 3,
        "mode": "abstract",
        "symbols": [{"name": "x", "kind": "weird"}],
        "metric": [["1", "0", "0"], ["0", "1", "0"]],
        "brackets": [
            {"i": 0, "j": 2, "components": ["0", "0", "0"]},
            {"i": 1, "j": 2, "components": ["0", "0"]},
            {"i": 1, "j": 3, "components": ["0", "0", "1"]},
            {"i": 1, "j": 3, "components": ["0", "0", "1"]},
        ],
        "phi": [["0", "1", "0"], ["-1", "0", "0"], ["0", "0", "0"]],
        "bogus": True,
    }
    with pytest.raises(ManifestError) as info:
        ingest_manifest(doc)
    errors = info.value.errors
    assert "bogus: unknown field" in errors
    assert "schema_version: expected 1, got 2" in errors
    assert "name: expected a non-empty string" in errors
    assert any(e.startswith("symbols[0]:") for e in errors)
    assert "metric: expected 3 rows" in errors
    assert "brackets[0]: expected indices 1 <= i < j <= 3" in errors
    assert "brackets[1].components: expected 3 entries" in errors
    assert "brackets[3]: duplicate pair (1,3)" in errors
    assert "phi/xi: phi and xi must be given together" in errors
    # the message string joins every problem
    assert "; " in str(info.value)


def test_ingest_dimension_is_fatal():
    with pytest.raises(ManifestError) as info:
        ingest_manifest({"schema_version": 1, "name": "m", "dimension": 4,
                         "mode": "abstract"})
    assert info.value.errors == [
        "dimension: expected an odd integer >= 3, got 4"]
    with pytest.raises(ManifestError) as info:
        ingest_manifest({"schema_version": 1, "name": "m", "dimension": 3,
                         "mode": "weird"})
    assert info.value.errors == [
        "mode: expected 'abstract' or 'chart', got 'weird'"]
    with pytest.raises(ManifestError) as info:
        ingest_manifest([1, 2])
    assert info.value.errors == ["manifest: expected a JSON object"]


def test_ingest_mode_key_mismatches():
    base = {"schema_version": 1, "name": "m", "dimension": 3}
    chart = dict(base, mode="chart",
                 symbols=[{"name": n, "kind": "coordinate"}
                          for n in ("x", "y", "z")],
                 frame=[["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
                 brackets=[])
    with pytest.raises(ManifestError) as info:
        ingest_manifest(chart)
    assert "brackets: not allowed in chart mode" in info.value.errors
    flat = dict(base, mode="abstract",
                frame=[["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]])
    with pytest.raises(ManifestError) as info:
        ingest_manifest(flat)
    assert "frame: not allowed in abstract mode (use 'brackets')" \
        in info.value.errors


def test_ingest_expression_errors_carry_paths():
    doc = {"schema_version": 1, "name": "m", "dimension": 3,
           "mode": "abstract",
           "metric": [["1", "0", "1+"], ["0", "1", "0"], ["0", "0", "1"]],
           "xi": ["1", "0"], "phi": [["0"] * 3] * 3}
    with pytest.raises(ManifestError) as info:
        ingest_manifest(doc)
    errors = info.value.errors
    assert any(e.startswith("metric[0][2]: unexpected end of input")
               for e in errors)
    assert "xi: expected 3 entries" in errors


def test_load_manifest_errors(tmp_path):
    missing = tmp_path / "missing.json"
    with pytest.raises(ManifestError) as info:
        load_manifest(str(missing))
    assert str(missing) in info.value.errors[0]
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ManifestError) as info:
        load_manifest(str(bad))
    assert "invalid JSON at line 1" in info.value.errors[0]


def write_manifest(tmp_path, name):
    path = tmp_path / f"{name}.json"
    path.write_text(manifest_to_json(export_entry(build(name))))
    return str(path)


def test_cli_demo_text(capsys):
    assert cli.main(["demo", "sphere"]) == 0
    out = capsys.readouterr().out
    assert "sphere" in out
    assert "\x1b[" not in out


def test_cli_demo_unknown_id(capsys):
    assert cli.main(["demo", "nope"]) == 1
    assert "error:" in capsys.readouterr().err


def test_cli_demo_json(capsys):
    assert cli.main(["demo", "kmu", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    for key in ("schema_version", "name", "manifest", "brackets",
                "structure", "connection", "curvature", "classification",
                "diagnostics", "self_check"):
        assert key in doc, key
    assert doc["name"] == "kmu"
    assert all(v is True for v in doc["self_check"].values()
               if v is not None)


def test_cli_export(tmp_path, capsys):
    target = tmp_path / "kmu.json"
    assert cli.main(["export", "kmu", "-o", str(target)]) == 0
    want = manifest_to_json(export_entry(build("kmu")))
    assert target.read_text() == want
    assert cli.main(["export", "kmu"]) == 0
    assert capsys.readouterr().out == want


def test_cli_report_round_trip(tmp_path, capsys):
    # exporting, reporting and re-reporting the re-export must agree
    path = write_manifest(tmp_path, "example41")
    assert cli.main(["report", path, "--format", "json"]) == 0
    first = capsys.readouterr().out
    doc = json.loads(first)
    assert doc["classification"]["kappa_mu"]["status"] == "inconsistent"
    again = tmp_path / "again.json"
    again.write_text(manifest_to_json(doc["manifest"]))
    assert cli.main(["report", str(again), "--format", "json"]) == 0
    second = capsys.readouterr().out
    assert json.loads(second)["curvature"] == doc["curvature"]


def test_cli_report_set_bindings(tmp_path, capsys):
    path = write_manifest(tmp_path, "kmu")
    rc = cli.main(["report", path, "--set", "lambda=1/2", "--set", "mu=0",
                   "--format", "json"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["classification"]["kappa_mu"]["kappa"] == "3/4"


def test_cli_set_errors(tmp_path, capsys):
    path = write_manifest(tmp_path, "kmu")
    assert cli.main(["report", path, "--set", "lambda"]) == 1
    assert "--set expects name=value" in capsys.readouterr().err
    assert cli.main(["report", path, "--set", "lambda=abc"]) == 1
    assert "is not a rational number" in capsys.readouterr().err


def test_cli_report_file_errors(tmp_path, capsys):
    assert cli.main(["report", str(tmp_path / "none.json")]) == 1
    assert "error:" in capsys.readouterr().err
    bad = tmp_path / "bad.json"
    bad.write_text("[")
    assert cli.main(["report", str(bad)]) == 1
    assert "invalid JSON" in capsys.readouterr().err


def test_cli_sweep_golden_grid(tmp_path, capsys):
    path = write_manifest(tmp_path, "kmu")
    assert cli.main(["sweep", path]) == 0
    out = capsys.readouterr().out
    lines = out.strip().split("\n")
    assert lines[0] == ("lambda,mu,skipped,kappa,flat,locally_symmetric,"
                        "phi_symmetric,locally_phi_symmetric,phi_recurrent,"
                        "phi_recurrent_status,locally_phi_recurrent_status")
    assert len(lines) == 17
    flat_rows = [l for l in lines[1:] if l.split(",")[4] == "true"]
    assert flat_rows == [
        "1,0,false,0,true,true,true,true,true,"
        "trivially_recurrent,trivially_recurrent"]
    assert lines[1] == ("1/4,-1,false,15/16,false,false,false,true,false,"
                        "not_recurrent,not_recurrent")
    assert lines[16] == ("3/2,2,false,-5/4,false,false,false,true,false,"
                         "not_recurrent,not_recurrent")


def test_cli_sweep_custom_grid_json(tmp_path, capsys):
    path = write_manifest(tmp_path, "kmu")
    rc = cli.main(["sweep", path, "--lambda", "1,2", "--mu", "0",
                   "--format", "json"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["grid"] == {"lambda": ["1", "2"], "mu": ["0"]}
    assert len(doc["rows"]) == 2
    assert doc["rows"][0]["flat"] is True
    assert doc["rows"][1]["flat"] is False
    assert doc["rows"][1]["kappa"] == "-3"


def test_cli_sweep_lambda_zero_is_skipped(tmp_path, capsys):
    path = write_manifest(tmp_path, "kmu")
    assert cli.main(["sweep", path, "--lambda", "0", "--mu", "0"]) == 0
    line = capsys.readouterr().out.strip().split("\n")[1]
    assert line.startswith("0,0,true,")


def test_cli_sweep_needs_parameters(tmp_path, capsys):
    path = write_manifest(tmp_path, "sphere")
    assert cli.main(["sweep", path]) == 1
    assert "sweep needs a manifest with parameters" \
        in capsys.readouterr().err


def test_cli_strict_and_lint(tmp_path, capsys):
    # flat space with a rotation structure passes the almost contact
    # axioms but not the contact metric condition
    doc = {
        "schema_version": 1,
        "name": "flatrot",
        "dimension": 3,
        "mode": "abstract",
        "symbols": [],
        "brackets": [],
        "metric": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
        "phi": [["0", "1", "0"], ["-1", "0", "0"], ["0", "0", "0"]],
        "xi": ["0", "0", "1"],
    }
    path = tmp_path / "flatrot.json"
    path.write_text(json.dumps(doc))
    assert cli.main(["report", str(path)]) == 0
    capsys.readouterr()
    assert cli.main(["report", str(path), "--strict"]) == 2
    err = capsys.readouterr().err
    assert "strict: contact metric condition violated" in err
    assert "strict: contact metric axioms do not hold" in err
    assert cli.main(["report", str(path), "--lint"]) == 0
    err = capsys.readouterr().err
    assert "lint: contact metric condition violated" in err


def test_cli_color_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("CONTACT_TENSOR_COLOR", "1")
    assert cli.main(["demo", "sphere"]) == 0
    assert "\x1b[" in capsys.readouterr().out


def test_cli_self_check_exit_code(capsys, monkeypatch):
    real = build_report(build("sphere"))
    real["self_check"]["second_bianchi"] = False
    monkeypatch.setattr(cli, "build_report", lambda entry: real)
    assert cli.main(["demo", "sphere"]) == 3
    assert "internal self-check failure: second_bianchi" \
        in capsys.readouterr().err


def test_cli_usage_error(capsys):
    assert cli.main([]) == 1
    assert cli.main(["report"]) == 1
