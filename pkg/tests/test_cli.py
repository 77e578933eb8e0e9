import json

import numpy as np
import pytest

from lvc import npyio
from lvc.cli import main


def run_cli(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as e:
        code = e.code
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def npy_inputs(tmp_path):
    rng = np.random.default_rng(0)
    f = tmp_path / "f.npy"
    q = tmp_path / "q.npy"
    npyio.write_npy(f, rng.standard_normal((256, 8)).astype(np.float32))
    npyio.write_npy(q, rng.standard_normal((3, 8)).astype(np.float32))
    return f, q


def test_compress_success(npy_inputs, tmp_path, capsys):
    f, q = npy_inputs
    out = tmp_path / "o.npy"
    code, stdout, _ = run_cli(
        ["compress", "--features", str(f), "--query", str(q),
         "--tokens-per-frame", "4", "--pseudo-frames", "16",
         "--out", str(out)], capsys)
    assert code == 0
    summary = json.loads(stdout)
    assert summary["output_shape"] == [64, 8]
    assert npyio.read_npy(out).shape == (64, 8)


def test_compress_indivisible_exits_2(npy_inputs, tmp_path, capsys):
    f, q = npy_inputs
    code, stdout, stderr = run_cli(
        ["compress", "--features", str(f), "--query", str(q),
         "--tokens-per-frame", "4", "--pseudo-frames", "7",
         "--out", str(tmp_path / "o.npy")], capsys)
    assert code == 2
    assert stdout == ""
    assert "IndivisibleFrames" in stderr


def test_compress_missing_file_exits_3(tmp_path, capsys):
    code, _, stderr = run_cli(
        ["compress", "--features", str(tmp_path / "nope.npy"),
         "--tokens-per-frame", "4", "--pseudo-frames", "16",
         "--mode", "avg-pool", "--out", str(tmp_path / "o.npy")], capsys)
    assert code == 3
    assert "IoFailure" in stderr


def test_avg_pool_without_query(npy_inputs, tmp_path, capsys):
    f, _ = npy_inputs
    code, stdout, _ = run_cli(
        ["compress", "--features", str(f), "--tokens-per-frame", "4",
         "--pseudo-frames", "16", "--mode", "avg-pool",
         "--out", str(tmp_path / "o.npy")], capsys)
    assert code == 0
    assert json.loads(stdout)["mode"] == "avg-pool"


def test_missing_required_flag_exits_1(capsys):
    code, stdout, stderr = run_cli(["compress", "--features", "f.npy"],
                                   capsys)
    assert code == 1
    assert stdout == ""
    assert "error" in stderr


def test_unknown_subcommand_exits_1(capsys):
    code, _, _ = run_cli(["bogus"], capsys)
    assert code == 1


def test_sample_indices_stdout_is_json(capsys):
    code, stdout, _ = run_cli(
        ["sample-indices", "--total", "128", "--frames", "64"], capsys)
    assert code == 0
    assert json.loads(stdout) == list(range(1, 128, 2))


def test_sample_indices_insufficient_exits_2(capsys):
    code, _, stderr = run_cli(
        ["sample-indices", "--total", "10", "--frames", "64"], capsys)
    assert code == 2
    assert "InsufficientFrames" in stderr


def test_synth_eval_report_deterministic(tmp_path, capsys):
    r1, r2 = tmp_path / "r1.json", tmp_path / "r2.json"
    for path in (r1, r2):
        code, _, _ = run_cli(
            ["synth-eval", "--trials", "10", "--seed", "7",
             "--report", str(path)], capsys)
        assert code == 0
    assert r1.read_bytes() == r2.read_bytes()


def test_bench_report_schema(tmp_path, capsys):
    code, stdout, _ = run_cli(
        ["bench", "--sizes", "16x2x8", "--reps", "5",
         "--pseudo-frames", "4"], capsys)
    assert code == 0
    report = json.loads(stdout)
    assert report["repetitions"] == 5
    assert report["sizes"][0]["size"] == "16x2x8"


@pytest.mark.parametrize("sub", ["compress", "sample-indices", "synth-eval",
                                 "bench", "serve"])
def test_help_exits_0(sub, capsys):
    code, stdout, _ = run_cli([sub, "--help"], capsys)
    assert code == 0
    assert "--" in stdout
