import json
import subprocess
import sys

import pytest

from walshqt.cli import main
from walshqt.dyadic import StepFunction
from walshqt.experiments import dumps
from walshqt.fixtures import random_step_function, rng
from walshqt.phase_plane import Quartile
from walshqt.quartile_operator import apply, trilinear
from walshqt.walsh import wave_packet


def write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def inputs(tmp_path):
    s = Quartile.make(-2, 1, 3)
    f1, f2, f3 = (wave_packet(s.grandchild(j)) for j in (1, 2, 3))
    return {
        "S": [s],
        "fs": (f1, f2, f3),
        "set": write(tmp_path / "set.json", {"quartiles": [s.to_json()]}),
        "empty": write(tmp_path / "empty.json", []),
        "f1": write(tmp_path / "f1.json", f1.to_json()),
        "f2": write(tmp_path / "f2.json", f2.to_json()),
        "f3": write(tmp_path / "f3.json", f3.to_json()),
        "dir": tmp_path,
    }


def test_eval_single_quartile_matches_the_library(inputs, tmp_path):
    out = tmp_path / "v.json"
    assert main(["eval", "--set", inputs["set"], "--f1", inputs["f1"], "--f2", inputs["f2"], "--out", str(out)]) == 0
    V = apply(inputs["S"], *inputs["fs"][:2])
    assert out.read_text() == dumps(V.to_json())
    assert StepFunction.from_json(json.loads(out.read_text())) == V


def test_eval_trilinear_value(inputs, tmp_path):
    out = tmp_path / "t.json"
    assert main(["eval", "--set", inputs["set"], "--f1", inputs["f1"], "--f2", inputs["f2"], "--f3", inputs["f3"], "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["value"] == ["2", "1", "0", "1"]
    assert rep["approx"] == float(trilinear(inputs["S"], *inputs["fs"]))


def test_eval_empty_set_writes_the_zero_function(inputs, tmp_path):
    out = tmp_path / "z.json"
    assert main(["eval", "--set", inputs["empty"], "--f1", inputs["f1"], "--f2", inputs["f2"], "--out", str(out)]) == 0
    assert not StepFunction.from_json(json.loads(out.read_text()))


def test_eval_random_inputs_round_trip(tmp_path):
    R = rng(0, "cli")
    S = [Quartile.make(-2, 0, 1), Quartile.make(0, 1, 2), Quartile.make(-1, 3, 0)]
    f1, f2 = (random_step_function(R, -4, 0, 64) for _ in range(2))
    args = ["eval", "--set", write(tmp_path / "s.json", [s.to_json() for s in S]),
            "--f1", write(tmp_path / "a.json", f1.to_json()), "--f2", write(tmp_path / "b.json", f2.to_json()),
            "--out", str(tmp_path / "o.json")]
    assert main(args) == 0
    assert StepFunction.from_json(json.loads((tmp_path / "o.json").read_text())) == apply(S, f1, f2)


def test_malformed_quartile_is_reported_by_position(inputs, capsys):
    bad = write(inputs["dir"] / "bad.json", [Quartile.make(0, 0, 0).to_json(), {"space": [0, 0], "freq": [0, 0]}])
    assert main(["eval", "--set", bad, "--f1", inputs["f1"], "--f2", inputs["f2"]]) == 2
    assert "quartiles[1]" in capsys.readouterr().err


def test_missing_and_invalid_files(inputs, capsys):
    assert main(["eval", "--set", str(inputs["dir"] / "nope.json"), "--f1", inputs["f1"], "--f2", inputs["f2"]]) == 2
    junk = inputs["dir"] / "junk.json"
    junk.write_text("{")
    assert main(["eval", "--set", inputs["set"], "--f1", str(junk), "--f2", inputs["f2"]]) == 2
    assert "invalid JSON" in capsys.readouterr().err


def test_usage_errors_exit_2(capsys):
    assert main(["verify", "--suite", "nope"]) == 2
    assert main(["endpoint", "--p1", "2"]) == 2
    assert main(["endpoint", "--p1", "x/y"]) == 2
    assert main(["verify"]) == 2
    assert main([]) == 2
    capsys.readouterr()


def test_verify_writes_a_passing_report(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["verify", "--suite", "orthogonality", "--trials", "5", "--seed", "4", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["pass"] and rep["config"] == {"seed": 4, "trials": 5}
    assert main(["verify", "--suite", "layer-cake", "--trials", "3"]) == 0
    assert json.loads(capsys.readouterr().out)["pass"]


def test_endpoint_exit_code_follows_the_bound(capsys):
    small = ["endpoint", "--depth", "8", "--band-width", "6", "--samples", "1", "--p1", "5/4,3/2"]
    assert main(small) == 0
    rep = json.loads(capsys.readouterr().out)
    assert set(rep) >= {"weak", "signed", "pass"}
    assert main(small + ["--bound", "1", "--kind", "weak"]) == 1
    capsys.readouterr()


def test_zero_family_passes(capsys):
    assert main(["endpoint", "--family", "zero", "--depth", "6", "--band-width", "4", "--samples", "1"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert all(r["K"] == 0 for r in rep["weak"]["rows"])


def test_module_entry_point(tmp_path):
    out = tmp_path / "c.json"
    cmd = [sys.executable, "-m", "walshqt.cli", "conjecture", "--trials", "3", "--out", str(out)]
    assert subprocess.run(cmd, check=False).returncode == 0
    first = out.read_bytes()
    subprocess.run(cmd, check=True)
    assert out.read_bytes() == first
