import json
import subprocess
import sys

import numpy as np
import pytest

from grandam.amalgam import Window, amalgam_norm
from grandam.core import (COUNTING, GrandExponent, MeasureSpace,
                          SampledFunction, make_epsilon_grid)
from grandam.grand import grand_norm
from grandam.iofmt import write_function


def run_cli(*args):
    proc = subprocess.run([sys.executable, "-m", "grandam", *args],
                          capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("cli")
    sp = MeasureSpace.cyclic(16)
    rng = np.random.default_rng(51)
    f = SampledFunction(sp, rng.random(16))
    g = SampledFunction(sp, rng.random(16))
    write_function(f, tmp / "f.csv")
    write_function(g, tmp / "g.jsonl")
    cfg = {
        "space": {"kind": "cyclic", "atoms": 16},
        "exponents": {"p": 2, "q": 2, "theta": 1},
        "window": {"size": 4},
        "bupu": {"block_size": 4},
        "seed": 5,
        "trials": 8,
    }
    (tmp / "cfg.json").write_text(json.dumps(cfg))
    return tmp, f, g


def test_norm_command_matches_library(workdir):
    tmp, f, _ = workdir
    code, out, err = run_cli("--config", str(tmp / "cfg.json"),
                             "norm", "--f", str(tmp / "f.csv"))
    assert code == 0, err
    doc = json.loads(out)
    assert doc["schema_version"] == 1
    assert doc["command"] == "norm"
    e = GrandExponent(2.0, 1.0)
    want = grand_norm(f, e, make_epsilon_grid(e))
    assert doc["result"]["value"] == pytest.approx(want, rel=1e-15)
    assert doc["result"]["closure"]["applicable"] is True


def test_profile_command_writes_csv(workdir):
    tmp, _, _ = workdir
    csv_path = tmp / "prof.csv"
    code, out, _ = run_cli("--config", str(tmp / "cfg.json"), "profile",
                           "--f", str(tmp / "f.csv"), "--csv", str(csv_path))
    assert code == 0
    doc = json.loads(out)
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "eps,value"
    assert len(lines) == len(doc["result"]["entries"]) + 1
    assert doc["result"]["sup_value"] >= max(
        e["value"] for e in doc["result"]["entries"]) - 1e-15


def test_amalgam_command_matches_library(workdir):
    tmp, f, _ = workdir
    code, out, _ = run_cli("--config", str(tmp / "cfg.json"),
                           "amalgam", "--f", str(tmp / "f.csv"))
    assert code == 0
    doc = json.loads(out)
    e = GrandExponent(2.0, 1.0)
    grid = make_epsilon_grid(e)
    want = amalgam_norm(f, Window(f.space, tuple(range(4))), e, e, grid, grid)
    assert doc["result"]["value"] == pytest.approx(want, rel=1e-15)
    assert doc["result"]["window_mass"] == pytest.approx(0.25)


def test_bupu_validate_command(workdir):
    tmp, _, _ = workdir
    code, out, _ = run_cli("--config", str(tmp / "cfg.json"), "bupu-validate")
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["all_passed"] is True
    assert doc["result"]["pieces"] == 4
    assert doc["result"]["conditions"]["a"]["passed"] is True


def test_conv_check_pair(workdir):
    tmp, _, _ = workdir
    code, out, _ = run_cli("--config", str(tmp / "cfg.json"), "conv-check",
                           "--f", str(tmp / "f.csv"), "--g", str(tmp / "g.jsonl"))
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["passed"] is True
    assert doc["result"]["hypotheses_met"] is True


def test_conv_check_trials_deterministic(workdir):
    tmp, _, _ = workdir
    code1, out1, _ = run_cli("--config", str(tmp / "cfg.json"), "conv-check")
    code2, out2, _ = run_cli("--config", str(tmp / "cfg.json"), "conv-check")
    assert code1 == code2 == 0
    assert out1 == out2                      # byte-identical reruns
    doc = json.loads(out1)
    assert doc["result"]["trials"] == 8
    assert doc["result"]["failures"] == 0
    assert doc["result"]["seed"] == 5


def test_seed_override(workdir):
    tmp, _, _ = workdir
    _, out, _ = run_cli("--config", str(tmp / "cfg.json"), "--seed", "9",
                        "conv-check")
    assert json.loads(out)["result"]["seed"] == 9


def test_conv_check_violation_exit_code(tmp_path):
    # constants on a probability group at p = 3/2, theta = 1: ratio 2 > 1.
    cfg = {"space": {"kind": "cyclic", "atoms": 8},
           "exponents": {"p": 1.5, "theta": 1}}
    (tmp_path / "cfg.json").write_text(json.dumps(cfg))
    one = SampledFunction.constant(MeasureSpace.cyclic(8), 1.0)
    write_function(one, tmp_path / "one.csv")
    code, out, _ = run_cli("--config", str(tmp_path / "cfg.json"), "conv-check",
                           "--f", str(tmp_path / "one.csv"),
                           "--g", str(tmp_path / "one.csv"))
    assert code == 1
    doc = json.loads(out)
    assert doc["result"]["passed"] is False
    assert doc["result"]["ratio"] == pytest.approx(2.0, rel=1e-9)


def test_conv_check_counting_warns_but_exits_zero(tmp_path):
    cfg = {"space": {"kind": "cyclic", "atoms": 8, "normalization": "counting"},
           "exponents": {"p": 1.5, "theta": 1}}
    (tmp_path / "cfg.json").write_text(json.dumps(cfg))
    one = SampledFunction.constant(MeasureSpace.cyclic(8, COUNTING), 1.0)
    write_function(one, tmp_path / "one.csv")
    code, out, _ = run_cli("--config", str(tmp_path / "cfg.json"), "conv-check",
                           "--f", str(tmp_path / "one.csv"),
                           "--g", str(tmp_path / "one.csv"))
    assert code == 0                         # hypotheses not met: report only
    doc = json.loads(out)
    assert doc["result"]["warning"] == "hypotheses-not-met"
    assert doc["result"]["passed"] is False


def test_witness_command(workdir):
    tmp, _, _ = workdir
    code, out, _ = run_cli("witness", "--m", "4")
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["growing"] is True
    assert doc["result"]["m"] == 4
    code, out, _ = run_cli("witness", "--m", "4", "--p", "1.0")
    assert code == 1                         # flat ratios: nothing grows
    assert json.loads(out)["result"]["growing"] is False


def test_equivalence_single_function(workdir):
    tmp, _, _ = workdir
    code, out, _ = run_cli("--config", str(tmp / "cfg.json"), "equivalence",
                           "--f", str(tmp / "f.csv"))
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["within_bounds"] is True
    b = doc["result"]["bounds"]
    r = doc["result"]["ratios"]["continuous_over_discrete"]
    assert b["c_low"] <= r <= b["c_up"]


def test_equivalence_trials(workdir):
    tmp, _, _ = workdir
    code, out, _ = run_cli("--config", str(tmp / "cfg.json"), "equivalence")
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["failures"] == 0
    assert doc["result"]["worst_continuous_over_discrete"] <= doc["result"]["bounds"]["c_up"]


def test_out_flag_writes_file(workdir):
    tmp, _, _ = workdir
    dest = tmp / "report.json"
    code, out, _ = run_cli("--config", str(tmp / "cfg.json"), "--out", str(dest),
                           "norm", "--f", str(tmp / "f.csv"))
    assert code == 0
    assert out == ""
    doc = json.loads(dest.read_text())
    assert doc["command"] == "norm"


def test_input_errors_exit_two(workdir, tmp_path):
    tmp, _, _ = workdir
    code, out, err = run_cli("norm", "--f", str(tmp_path / "missing.csv"))
    assert code == 2
    assert "error" in json.loads(err)

    bad = tmp_path / "bad.csv"
    bad.write_text("index,weight,value\n0,1.0,2.0\n0,1.0,3.0\n")
    code, _, err = run_cli("norm", "--f", str(bad))
    assert code == 2
    assert "duplicate index 0" in json.loads(err)["error"]

    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"spaces": {}}')
    code, _, err = run_cli("--config", str(cfg), "bupu-validate")
    assert code == 2
    assert "unknown config key" in json.loads(err)["error"]

    cfg.write_text("{not json")
    code, _, err = run_cli("--config", str(cfg), "bupu-validate")
    assert code == 2
    assert "invalid JSON" in json.loads(err)["error"]


def test_weight_mismatch_rejected(workdir, tmp_path):
    tmp, _, _ = workdir
    # counting-weighted file against the probability-space config
    f = SampledFunction.constant(MeasureSpace.cyclic(16, COUNTING), 1.0)
    write_function(f, tmp_path / "fc.csv")
    code, _, err = run_cli("--config", str(tmp / "cfg.json"), "amalgam",
                           "--f", str(tmp_path / "fc.csv"))
    assert code == 2
    assert "do not match" in json.loads(err)["error"]


def test_usage_errors(workdir):
    code, _, _ = run_cli("frobnicate")
    assert code == 2
    code, _, _ = run_cli()
    assert code == 2
    tmp, _, _ = workdir
    code, _, err = run_cli("--config", str(tmp / "cfg.json"), "conv-check",
                           "--f", str(tmp / "f.csv"))
    assert code == 2
    assert "both" in json.loads(err)["error"]
