from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from pseudolinear.cli import EXIT_CAP, EXIT_INVALID, EXIT_OBSTRUCTION, EXIT_OK, run

FIX = Path(__file__).resolve().parents[1] / "fixtures"


def cli(capsys, *argv):
    code = run([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize(
    "name, code",
    [
        ("FIX_X", EXIT_OK),
        ("FIX_PAR", EXIT_OK),
        ("FIX_FOREST", EXIT_OK),
        ("FIX_K4X_IN", EXIT_OK),
        ("FIX_B", EXIT_OBSTRUCTION),
        ("FIX_W", EXIT_OBSTRUCTION),
        ("FIX_TRI", EXIT_OBSTRUCTION),
        ("FIX_DOT3", EXIT_OBSTRUCTION),
        ("FIX_K4X_OUT", EXIT_OBSTRUCTION),
    ],
)
def test_check(capsys, name, code):
    rc, out, _ = cli(capsys, "check", FIX / f"{name}.json")
    assert rc == code
    js = json.loads(out)
    assert js["pseudolinear"] is (code == EXIT_OK)
    if code == EXIT_OBSTRUCTION:
        assert len(js["obstruction"]["rainbows"]) <= 2
        assert "trace" not in js["obstruction"]


def test_check_trace_and_oracle(capsys):
    _, out, _ = cli(capsys, "check", FIX / "FIX_B.json", "--trace")
    assert json.loads(out)["obstruction"]["trace"][0] == "alg3: outer-rainbow p0"
    rc, out, _ = cli(capsys, "check", FIX / "FIX_B.json", "--oracle")
    assert rc == EXIT_OBSTRUCTION


def test_extend_writes_wiring(capsys, tmp_path):
    target = tmp_path / "arr.json"
    rc, out, _ = cli(capsys, "extend", FIX / "FIX_PAR.json", "-o", target)
    assert rc == EXIT_OK and out == ""
    js = json.loads(target.read_text())
    assert js["arrangement"]["wiring"] == [
        {"string": "s0", "crossings": [["s1", "q8"]]},
        {"string": "s1", "crossings": [["s0", "q8"]]},
    ]


def test_extend_obstructed(capsys):
    rc, out, _ = cli(capsys, "extend", FIX / "FIX_B.json")
    assert rc == EXIT_OBSTRUCTION and json.loads(out)["pseudolinear"] is False


def test_validate(capsys):
    rc, out, _ = cli(capsys, "validate", FIX / "FIX_K4X_OUT.json", "--good")
    js = json.loads(out)
    assert rc == EXIT_OK and js["valid"] and js["good"] and js["crossings"] == 1


def test_kn_b(capsys):
    rc, out, _ = cli(capsys, "kn-b", FIX / "FIX_K4X_OUT.json")
    assert rc == EXIT_OBSTRUCTION
    assert json.loads(out)["b_configuration"]["crossing"] == "p2"
    rc, _, _ = cli(capsys, "kn-b", FIX / "FIX_K4X_IN.json")
    assert rc == EXIT_OK
    rc, _, err = cli(capsys, "kn-b", FIX / "FIX_X.json")
    assert rc == EXIT_INVALID and json.loads(err)["error"] == "NotComplete"


def test_extract_forbidden(capsys, tmp_path):
    svg = tmp_path / "f.svg"
    rc, out, _ = cli(capsys, "extract-forbidden", FIX / "FIX_DOT3.json", "--svg", svg)
    assert rc == EXIT_OK
    assert json.loads(out)["class"] == {"rainbows": 1, "strings": 3}
    assert svg.read_bytes().startswith(b"<?xml")
    rc, _, err = cli(capsys, "extract-forbidden", FIX / "FIX_K4X_IN.json")
    assert rc == EXIT_INVALID and json.loads(err)["error"] == "NoObstruction"


def test_render(capsys, tmp_path):
    rc, out, _ = cli(capsys, "render", FIX / "FIX_PAR.json", "--arrangement")
    assert rc == EXIT_OK and out.startswith("<?xml")


def test_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"format": "pseudolinear-drawing"}')
    rc, _, err = cli(capsys, "check", bad)
    assert rc == EXIT_INVALID and json.loads(err)["error"] == "SchemaError"
    rc, _, err = cli(capsys, "check", tmp_path / "missing.json")
    assert rc == EXIT_INVALID
    rc, _, err = cli(capsys, "check", FIX / "K5_RECT_0.json", "--oracle", "--cap", "5")
    assert rc == EXIT_CAP and json.loads(err)["error"] == "CapExceeded"
    rc, _, _ = cli(capsys, "check", FIX / "FIX_X.json", "--cap", "2")
    assert rc == EXIT_INVALID


def test_corpus(capsys, tmp_path):
    rc, _, _ = cli(capsys, "corpus", "--count", "5", "--seed", "3", "-o", tmp_path)
    assert rc == EXIT_OK
    index = json.loads((tmp_path / "index.json").read_text())
    assert index["instances"] == [f"R3_{i:04d}.json" for i in range(5)]


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "pseudolinear.cli", "check", str(FIX / "FIX_X.json")],
        capture_output=True,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["pseudolinear"] is True
