import io
import json
import pathlib
from contextlib import redirect_stderr, redirect_stdout

import pytest

from qamlib.cli import run

from golden_cases import GOLDEN_CASES

GOLDEN_DIR = pathlib.Path(__file__).parent / "golden"


def run_capture(argv):
    out = io.StringIO()
    err = io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = run(argv)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("name,argv", GOLDEN_CASES,
                         ids=[c[0] for c in GOLDEN_CASES])
def test_golden_outputs(name, argv):
    code, out, err = run_capture(argv)
    assert code == 0, err
    expected = (GOLDEN_DIR / f"{name}.golden").read_text(encoding="utf-8")
    assert out == expected


def test_repeated_runs_are_byte_identical():
    argv = GOLDEN_CASES[0][1]
    _, first, _ = run_capture(argv)
    _, second, _ = run_capture(argv)
    assert first == second


def test_output_file_roundtrip(tmp_path):
    target = tmp_path / "result.json"
    code, out, _ = run_capture(
        ["mean", "--spec", '{"variant": "power", "p": 2}',
         "--xs", "1,7", "--w", "0.5,0.5", "--output", str(target)])
    assert code == 0
    assert out == ""
    payload = json.loads(target.read_text())
    assert payload["value"] == pytest.approx(5.0)


def test_simplex_geodesic_row_count():
    code, out, _ = run_capture(
        ["simplex-geodesic", "--alpha", "-1", "--p", "0.7,0.2,0.1",
         "--q", "0.1,0.3,0.6", "--samples", "64"])
    assert code == 0
    lines = out.strip("\n").split("\n")
    assert lines[0] == "t,p1,p2,p3"
    assert len(lines) == 66  # header + 65 samples


def test_unknown_subcommand_exits_2():
    code, _, _ = run_capture(["frobnicate"])
    assert code == 2


def test_missing_flag_exits_2():
    code, _, _ = run_capture(["mean", "--xs", "1,2", "--w", "0.5,0.5"])
    assert code == 2


def test_bad_spec_names_field():
    code, _, err = run_capture(
        ["mean", "--spec", '{"variant": "nope"}', "--xs", "1,2",
         "--w", "0.5,0.5"])
    assert code == 2
    assert "variant" in err


def test_bad_weights_name_field():
    code, _, err = run_capture(
        ["mean", "--spec", '{"variant": "power", "p": 1}',
         "--xs", "1,2", "--w", "0.5,0.4"])
    assert code == 2
    assert "field: w" in err


def test_bad_matrix_payload_exits_2():
    code, _, err = run_capture(
        ["spd-geomean", "--p", '{"dim": 2, "data": [1, 0, 0]}',
         "--q", '{"dim": 2, "data": [1, 0, 0, 1]}'])
    assert code == 2
    assert "field: p" in err


def test_domain_violation_exits_2():
    code, _, err = run_capture(
        ["divergence", "--gen", '{"variant": "neg_log_det", "dim": 2}',
         "--kind", "bregman",
         "--theta1", '{"dim": 2, "data": [1, 0, 0, -1]}',
         "--theta2", '{"dim": 2, "data": [1, 0, 0, 1]}'])
    assert code == 2
    assert "domain" in err.lower()


def test_nonconvergence_exits_3():
    code, _, err = run_capture(
        ["barycenter", "--gen", '{"variant": "lse0", "dim": 1}',
         "--points", '[[-1.0], [2.0]]', "--w", "0.5,0.5",
         "--tol", "1e-14", "--max-iter", "1"])
    assert code == 3
    assert "residual" in err


def test_unsupported_format_exits_2():
    code, _, err = run_capture(
        ["mean", "--spec", '{"variant": "power", "p": 1}',
         "--xs", "1,2", "--w", "0.5,0.5", "--format", "csv"])
    assert code == 2
    assert "format" in err


def test_unreadable_input_exits_2(tmp_path):
    code, _, err = run_capture(
        ["spd-geomean", "--p", str(tmp_path / "missing.json"),
         "--q", '{"dim": 1, "data": [1]}'])
    assert code == 2
    assert "not found" in err


def test_log_env_smoke(monkeypatch):
    monkeypatch.setenv("QAM_LOG", "debug")
    code, out, _ = run_capture(GOLDEN_CASES[0][1])
    assert code == 0
    expected = (GOLDEN_DIR / "mean_harmonic.golden").read_text()
    assert out == expected
