import json
import math
import subprocess
import sys

import pytest

from fucik.cli import main, parse_k

PI = math.pi


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_k():
    assert parse_k("1..4") == [1, 2, 3, 4]
    assert parse_k("-1") == [-1]
    assert parse_k("-3..-1,2") == [-3, -2, -1, 2]


def test_eigen_table(capsys):
    code, out, _ = run(capsys, "eigen", "--preset", "classical", "--k", "1..4")
    assert code == 0
    vals = [float(line.split()[1]) for line in out.splitlines()[1:]]
    assert vals == pytest.approx([1, 4, 9, 16], abs=1e-8)


def test_eigen_negative_index_is_none(capsys):
    code, out, _ = run(capsys, "eigen", "--preset", "classical", "--k", "-1", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["which,k,lambda", "m,-1,none"]


def test_eigen_json_and_subinterval(capsys):
    code, out, _ = run(capsys, "eigen", "--preset", "classical", "--sub", f"0,{PI / 2}", "--format", "json")
    assert code == 0
    (row,) = json.loads(out)
    assert row["lambda"] == pytest.approx(4.0, abs=1e-8)


def test_malformed_problem_file(capsys, tmp_path):
    bad = tmp_path / "p.json"
    bad.write_text('{"interval": [0, 1], "m": ')
    code, _, err = run(capsys, "eigen", "--problem", str(bad))
    assert code == 1
    assert "line 1" in err


def test_not_found_exit(capsys, tmp_path):
    doc = {"interval": [0, 1], "m": {"breakpoints": [0, 1], "coeffs": [[1e-14]]}}
    path = tmp_path / "tiny.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "eigen", "--problem", str(path))
    assert code == 2
    assert "not found" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["eigen", "--preset", "classical", "--tol-rel", "0.5"],
        ["eigen", "--preset", "classical", "--tol-abs", "-1"],
        ["eigen", "--preset", "nope"],
        ["eigen"],
        ["eigen", "--preset", "classical", "--k", "0"],
        ["trace", "--preset", "classical", "--k", "1"],
        ["frobnicate"],
    ],
)
def test_config_errors_exit_1(capsys, argv):
    # argparse-level errors exit through SystemExit, the rest return
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_trace_classical(capsys):
    code, out, _ = run(capsys, "trace", "--preset", "classical", "--k", "2", "--branch", "gt", "--quadrant", "pp")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "k,branch,quadrant,a,b"
    rows = [line.split(",") for line in lines[1:]]
    assert len(rows) >= 64
    for k, br, q, a, b in rows:
        assert (k, br, q) == ("2", "gt", "pp")
        assert abs(1 / math.sqrt(float(a)) + 1 / math.sqrt(float(b)) - 1) <= 1e-6


def test_trace_empty_exit_3(capsys):
    code, out, err = run(capsys, "trace", "--preset", "sine:6.283", "--k", "3", "--quadrant", "pm")
    assert code == 3
    assert "EmptyAtResolution(10000)" in err
    assert out.splitlines() == ["k,branch,quadrant,a,b"]


def test_trace_deterministic(capsys, tmp_path):
    argv = ["trace", "--preset", "sine:9.425", "--k", "2", "--branch", "both", "--quadrant", "+-",
            "--grid-per-decade", "8"]
    outs = []
    for i in range(2):
        path = tmp_path / f"c{i}.csv"
        assert main(argv + ["--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    assert len(outs[0].splitlines()) > 10


def test_trace_json(capsys):
    code, out, _ = run(capsys, "trace", "--preset", "classical", "--k", "3", "--grid-per-decade", "4",
                       "--format", "json")
    assert code == 0
    (curve,) = json.loads(out)["curves"]
    assert curve["status"] == "Nonempty" and curve["k"] == 3
    assert curve["max_residual"] <= 1e-7 * PI


def test_report_example_313(capsys):
    code, out, _ = run(capsys, "report", "--preset", "example_3_13", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert {q: v["total_nonempty"] for q, v in doc["per_quadrant"].items()} == {"pp": 1, "mm": 1, "pm": 1, "mp": 1}


def test_report_classical(capsys):
    code, out, _ = run(capsys, "report", "--preset", "classical", "--format", "json")
    assert code == 0
    doc = json.loads(out)["per_quadrant"]
    assert doc["pp"]["total_nonempty"] == {"at_least": 10}
    assert [doc[q]["total_nonempty"] for q in ("mm", "pm", "mp")] == [0, 0, 0]


def test_report_sine_table(capsys):
    code, out, _ = run(capsys, "report", "--preset", "sine:9.425", "--quadrant", "pm")
    assert code == 0
    row = next(line for line in out.splitlines() if line.startswith("pm "))
    assert row.split()[1] == "3"


def test_count_and_asymptote(capsys):
    code, out, _ = run(capsys, "count", "--preset", "sine:6.283185307179586", "--quadrant", "pm")
    assert code == 0 and out.startswith("pm: 1")
    code, out, _ = run(capsys, "asymptote", "--preset", "classical", "--a-probe", "1e4", "--probes", "3",
                       "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["b_values"][0] == pytest.approx(1.0203040506, abs=1e-9)
    assert doc["horizontal_monotone"]


def test_asymptote_empty_curve_exit_3(capsys):
    code, _, _ = run(capsys, "asymptote", "--preset", "sine:6.283185307179586", "--quadrant", "pm", "--branch", "lt")
    assert code == 3


def test_zerofn(capsys, tmp_path):
    code, out, _ = run(capsys, "zerofn", "--preset", "classical", "--a", "4")
    assert code == 0 and float(out) == pytest.approx(PI / 2, abs=1e-9)
    code, out, _ = run(capsys, "zerofn", "--preset", "classical", "--a", "-1")
    assert out.strip() == "BeyondHorizon"
    trace = tmp_path / "t.csv"
    code, out, _ = run(capsys, "zerofn", "--preset", "classical", "--a", "9", "--inverse", "--format", "json",
                       "--trace", str(trace))
    doc = json.loads(out)
    assert doc["crossing"] == pytest.approx(2 * PI / 3, abs=1e-9)
    assert trace.read_text().startswith("t,u,v\n")


def test_presets_listing(capsys):
    code, out, _ = run(capsys, "presets")
    assert code == 0
    assert "example_3_13" in out and "alternating_bumps" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fucik", "eigen", "--preset", "classical", "--k", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert float(proc.stdout.splitlines()[1].split()[1]) == pytest.approx(4.0, abs=1e-8)
