import csv
import io
import json
import math

import pytest

from rabistark.cli import main, parse_args, run
from rabistark.observables import RECORD_FIELDS, analyze
from rabistark.serialize import Table, format_value, from_json, serialize, to_csv

from conftest import scaled


def _run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def _csv_body(text):
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    return list(csv.reader(lines))


def _meta(text):
    return dict(l[2:].split(" = ", 1) for l in text.splitlines() if l.startswith("# "))


def test_parse_flags():
    cfg = parse_args(["analyze", "--omega", "0.5", "--g", "3.355", "--lambda", "0.538",
                      "--chi", "-0.3"])
    assert (cfg.command, cfg.omega, cfg.g, cfg.lam, cfg.chi) == ("analyze", 0.5, 3.355, 0.538, -0.3)
    assert cfg.format == "csv" and cfg.deterministic


def test_parse_grid():
    cfg = parse_args(["sweep", "--omega", "0.5", "--chi", "0.2", "--grid", "g:1:3:5",
                      "--grid", "lambda:0:0.8:3"])
    assert [(a.name, a.steps) for a in cfg.grids] == [("g", 5), ("lambda", 3)]


@pytest.mark.parametrize("argv", [
    ["analyze", "--g", "1", "--lambda", "0.5", "--chi", "0.1"],
    ["analyze", "--omega", "x", "--g", "1", "--lambda", "0.5", "--chi", "0.1"],
    ["sweep", "--omega", "0.5", "--grid", "g:1:3"],
    ["sweep", "--omega", "0.5", "--grid", "g:1:3:5"],
    ["frobnicate"],
    ["quadruple"],
])
def test_usage_errors_exit_2(argv, capsys):
    code, _, err = _run(argv, capsys)
    assert code == 2
    assert "usage" in err


def test_invalid_physics_exit_2(capsys):
    code, _, err = _run(["analyze", "--omega", "0.5", "--g", "1", "--lambda", "0.5",
                         "--chi", "1.5"], capsys)
    assert code == 2 and "chi" in err


def test_truncation_ceiling_exit_4(capsys):
    code, _, err = _run(["analyze", "--omega", "0.0001", "--g", "4", "--lambda", "1",
                         "--chi", "0"], capsys)
    assert code == 4 and "TruncationCeiling" in err


def test_io_error_exit_3(tmp_path, capsys):
    target = tmp_path / "dir"
    target.mkdir()
    code, _, _ = _run(["quadruple", "--chi", "-0.3", "--out", str(target)], capsys)
    assert code == 3


def test_analyze_record(capsys):
    code, out, _ = _run(["analyze", "--omega", "0.5", "--g", "3.355", "--lambda", "0.538",
                         "--chi", "-0.3", "--no-timestamp"], capsys)
    assert code == 0
    header, row = _csv_body(out)
    assert header == list(RECORD_FIELDS)
    assert header[:4] == ["E0", "gap", "parity", "n_Z"]
    rec = dict(zip(header, row))
    ref = analyze(scaled(0.5, 3.355, 0.538, -0.3))
    assert float(rec["E0"]) == pytest.approx(ref.E0, rel=1e-11)
    meta = _meta(out)
    assert "code_version" in meta and "n_max_used" in meta and "timestamp" not in meta


def test_quadruple_command(capsys):
    code, out, _ = _run(["quadruple", "--chi", "-0.3"], capsys)
    assert code == 0
    (header, row) = _csv_body(out)
    rec = dict(zip(header, row))
    assert float(rec["g_TQ"]) == pytest.approx(3.35658556671, abs=1e-10)
    assert float(rec["lambda_TQ"]) == pytest.approx(0.538461538462, abs=1e-11)


def test_sweep_row_count(capsys):
    code, out, _ = _run(["sweep", "--omega", "0.5", "--chi", "0.2", "--grid", "g:1:3:3",
                         "--grid", "lambda:0:0.8:2", "--no-timestamp"], capsys)
    assert code == 0
    rows = _csv_body(out)
    assert len(rows) - 1 == 3 * 2


def test_json_round_trip(tmp_path, capsys):
    out = tmp_path / "a.json"
    code, _, _ = _run(["analyze", "--omega", "0.5", "--g", "2.6", "--lambda", "2.0", "--chi", "0.1",
                       "--format", "json", "--out", str(out)], capsys)
    assert code == 0
    t = from_json(out.read_text())
    rec = dict(zip(t.columns, t.rows[0]))
    ref = analyze(scaled(0.5, 2.6, 2.0, 0.1)).as_row()
    assert list(rec) == list(ref)
    for k, v in ref.items():
        if isinstance(v, float) and math.isnan(v):
            assert math.isnan(rec[k])
        else:
            assert rec[k] == v


def test_output_is_deterministic(tmp_path, capsys):
    argv = ["collapse", "--omega", "0.05", "--lambda", "0,0.5", "--chi", "0.4", "--law", "x2p2",
            "--points", "3", "--no-timestamp"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b), "--threads", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(_csv_body(a.read_text())) - 1 >= 6


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "job.cfg"
    cfg.write_text("# point\nomega = 0.5\ng = 2.6\nlambda = 1.1\nchi = 0.1\nformat = json\n")
    c = parse_args(["analyze", "--config", str(cfg), "--g", "3.3"])
    assert (c.omega, c.g, c.lam, c.chi, c.format) == (0.5, 3.3, 1.1, 0.1, "json")
    bad = tmp_path / "bad.cfg"
    bad.write_text("omega 0.5\n")
    code, _, _ = _run(["analyze", "--config", str(bad)], capsys)
    assert code == 2


def test_threads_from_environment(monkeypatch):
    monkeypatch.setenv("RABI_STARK_THREADS", "3")
    assert parse_args(["quadruple", "--chi", "-0.3"]).threads == 3
    assert parse_args(["quadruple", "--chi", "-0.3", "--threads", "1"]).threads == 1


@pytest.mark.parametrize("argv,cols", [
    (["spectrum", "--omega", "0.5", "--g", "2", "--lambda", "0.5", "--chi", "0.2", "--k", "4"],
     ["level", "energy", "parity", "excitation"]),
    (["jc-exact", "--omega", "0.5", "--g", "3", "--chi", "0.4"],
     ["n", "E_minus", "E_plus", "C_up", "C_down", "e_plus", "e_minus"]),
    (["variational", "--omega", "0.01", "--g", "0.8", "--lambda", "0.5", "--chi", "0.74",
      "--points", "11"], ["x", "energy"]),
    (["wavefunction", "--omega", "0.5", "--g", "2.6", "--lambda", "2", "--chi", "0.1"],
     ["x", "psi_plus", "psi_minus"]),
    (["boundaries", "--omega", "0.5", "--chi", "0.2", "--grid", "g:1.5:2.5:3",
      "--grid", "lambda:0:0.4:2"], ["kind", "polyline", "vertex", "g", "lambda"]),
])
def test_other_commands(argv, cols, capsys):
    code, out, _ = _run(argv, capsys)
    assert code == 0
    assert _csv_body(out)[0] == cols


def test_wavefunction_metadata(capsys):
    code, out, _ = _run(["wavefunction", "--omega", "0.5", "--g", "3.3", "--lambda", "2",
                         "--chi", "0.1"], capsys)
    meta = _meta(out)
    assert meta["n_Z"] == "2" and meta["parity"] == "1"


def test_format_value():
    assert format_value(1 / 3) == "0.333333333333"
    assert format_value(float("nan")) == "nan"
    assert format_value(None) == "" and format_value(3) == "3" and format_value(True) == "1"


def test_json_and_csv_agree():
    t = Table(columns=["a", "b"], rows=[[1.5, float("nan")]], meta={"k": 1})
    obj = json.loads(serialize(t, "json", timestamp=False))
    assert obj["rows"] == [[1.5, None]] and obj["meta"]["k"] == 1
    text = to_csv(t, timestamp=False)
    assert text.splitlines()[-1] == "1.5,nan"
    with pytest.raises(ValueError):
        serialize(t, "xml")
