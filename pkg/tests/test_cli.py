import json
import subprocess
import sys

import numpy as np
import pytest

from renyicap import channels as chn
from renyicap import cli
from renyicap import linalg


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def files(tmp_path):
    return {
        "zero": write(tmp_path, "zero.json", linalg.matrix_to_json(np.diag([1.0, 0.0]))),
        "one": write(tmp_path, "one.json", linalg.matrix_to_json(np.diag([0.0, 1.0]))),
        "mixed": write(tmp_path, "mixed.json", linalg.matrix_to_json(np.eye(2) / 2)),
        "identity": write(tmp_path, "identity.json", chn.identity_channel(2).to_json()),
        "pinching": write(tmp_path, "pinching.json", chn.pinching(np.eye(2)).to_json()),
        "ensemble": write(tmp_path, "ens.json", chn.Ensemble(
            np.array([0.5, 0.5]), (np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))).to_json()),
        "tmp": tmp_path,
    }


def test_divergence_values(files, capsys):
    code, out, _ = run(["divergence", files["zero"], files["mixed"], "--alpha", "2"], capsys)
    assert code == 0
    assert json.loads(out)["value_bits"] == pytest.approx(1.0)
    code, out, _ = run(["divergence", files["zero"], files["one"]], capsys)
    res = json.loads(out)
    assert code == 0 and res["value_bits"] == "inf" and res["support_ok"] is False


def test_sweep_csv(files, capsys):
    code, out, _ = run(["sweep", files["identity"], "--alphas", "1.2,2.0", "--restarts", "2"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "alpha,value_bits,converged,restarts_used"
    for line in lines[1:]:
        assert float(line.split(",")[1]) == pytest.approx(1.0, abs=1e-6)


def test_bound_eb_and_regime_exit(files, capsys):
    code, out, _ = run(["bound", files["pinching"], "--n", "50", "--rate", "1.2", "--restarts", "2"], capsys)
    res = json.loads(out)
    assert code == 0 and 0 < res["p_succ_bound"] < 1
    code, _, err = run(["bound", files["pinching"], "--n", "50", "--rate", "0.9", "--restarts", "2"], capsys)
    assert code == 4 and "regime" in err


def test_bound_weak(files, capsys):
    code, out, _ = run(["bound", files["identity"], "--variant", "weak", "--n", "1", "--p", "0"], capsys)
    assert code == 0
    assert json.loads(out)["rate_max"] == pytest.approx(1.0, abs=1e-6)


def test_alpha_out_of_range_is_regime(files, capsys):
    code, _, _ = run(["radius", files["identity"], "--alpha", "3"], capsys)
    assert code == 4


def test_simulate_roundtrip_to_file(files, capsys):
    out_path = files["tmp"] / "sim.json"
    code, out, _ = run(["simulate", files["pinching"], files["ensemble"], "--n", "2", "--rate", "1.0",
                        "--trials", "3", "--seed", "5", "--out", str(out_path)], capsys)
    assert code == 0 and out == ""
    res = json.loads(out_path.read_text())
    assert res["message_count"] == 4 and len(res["p_succ"]) == 3 and res["seed"] == 5


def test_seed_from_environment(files, capsys, monkeypatch):
    argv = ["simulate", files["pinching"], files["ensemble"], "--n", "2", "--rate", "1.0", "--trials", "3"]
    monkeypatch.setenv("RENYICAP_SEED", "5")
    _, env_out, _ = run(argv, capsys)
    _, flag_out, _ = run(argv + ["--seed", "5"], capsys)
    assert env_out == flag_out
    monkeypatch.setenv("RENYICAP_SEED", "x")
    assert run(argv, capsys)[0] == 2


def test_parse_errors_exit_2(files, capsys):
    bad = files["tmp"] / "bad.json"
    bad.write_text("{not json")
    assert run(["radius", str(bad)], capsys)[0] == 2
    assert run(["radius", str(files["tmp"] / "missing.json")], capsys)[0] == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2


def test_corrupted_channel_exits_3(files, capsys):
    obj = chn.identity_channel(2).to_json()
    obj["kraus"] = [linalg.matrix_to_json(2 * np.eye(2))]
    obj["trace_preserving"] = True
    path = write(files["tmp"], "corrupt.json", obj)
    code, _, err = run(["verify", "divergence-props", path], capsys)
    assert code == 3 and "invariant" in err


def test_csv_only_for_sweep(files, capsys):
    assert run(["radius", files["identity"], "--format", "csv"], capsys)[0] == 2


def test_verify_is_deterministic(capsys):
    _, a, _ = run(["verify", "divergence-props", "--seed", "3"], capsys)
    _, b, _ = run(["verify", "divergence-props", "--seed", "3"], capsys)
    assert a == b and json.loads(a)["passed"] is True


def test_help_lists_frozen_defaults():
    text = cli.build_parser()._subparsers._group_actions[0].choices["bound"].format_help()
    for piece in ("default 1.5", "default 10", "default 20", "default 8", "default eb"):
        assert piece in text.replace("(", "").replace(")", "")


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "renyicap", "divergence", files["zero"], files["mixed"]],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["value_bits"] == pytest.approx(1.0)
