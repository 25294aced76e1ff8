import subprocess
import sys

import pytest

from tsctm import selftest as selftest_mod
from tsctm.cli import main

RAW_LINES = [
    "apple banana apple", "banana apple fruit", "fruit apple banana",
    "banana fruit fruit", "apple fruit banana", "banana banana apple",
    "stone iron metal", "iron stone metal", "metal iron stone",
    "stone metal iron", "iron iron stone", "metal stone stone",
]
AUG_LINES = [line.split()[1] + " " + " ".join(line.split()[:2]) for line in RAW_LINES]
LABELS = ["0"] * 6 + ["1"] * 6


@pytest.fixture()
def workdir(tmp_path):
    (tmp_path / "raw.txt").write_text("\n".join(RAW_LINES) + "\n")
    (tmp_path / "aug.txt").write_text("\n".join(AUG_LINES) + "\n")
    (tmp_path / "labels.txt").write_text("\n".join(LABELS) + "\n")
    return tmp_path


def preprocess_args(d, out="corpus.json"):
    return ["preprocess", "--input", str(d / "raw.txt"), "--aug", str(d / "aug.txt"),
            "--labels", str(d / "labels.txt"), "--min-freq", "1", "--out", str(d / out)]


def train_args(d, out="model.ckpt", **extra):
    args = ["train", "--corpus", str(d / "corpus.json"), "-K", "2", "--hidden", "6",
            "--epochs", "3", "--batch-size", "4", "--seed", "7", "--out", str(d / out)]
    for k, v in extra.items():
        args += [f"--{k.replace('_', '-')}"] + ([str(v)] if v is not True else [])
    return args


def test_missing_required_flag_is_usage_error(capsys):
    assert main(["train", "-K", "2"]) == 1
    err = capsys.readouterr().err
    assert "usage error" in err
    assert "tsctm --help" in err


def test_unknown_command_is_usage_error(capsys):
    assert main(["frobnicate"]) == 1
    assert "usage error" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["preprocess", "--input", "x", "--out", "y", "--min-freq", "0"],
    ["preprocess", "--input", "x", "--out", "y", "--min-len", "1"],
    ["eval", "--model", "m", "--corpus", "c", "--top-words", "0"],
    ["eval", "--model", "m", "--corpus", "c", "--window", "-1"],
    ["selftest", "--threads", "0"],
])
def test_flag_validation(argv, capsys):
    assert main(argv) == 1
    assert "usage error" in capsys.readouterr().err


def test_end_to_end_pipeline(workdir, capsys):
    assert main(preprocess_args(workdir)) == 0
    err = capsys.readouterr().err
    assert "config: preprocess" in err
    assert "kept 12 documents" in err

    assert main(train_args(workdir, log=str(workdir / "train.jsonl"))) == 0
    err = capsys.readouterr().err
    assert "config: train" in err
    assert "--seed 7" in err
    assert "checkpoint written" in err
    assert (workdir / "train.jsonl").exists()

    assert main(["eval", "--model", str(workdir / "model.ckpt"),
                 "--corpus", str(workdir / "corpus.json"),
                 "--top-words", "3", "--out", str(workdir / "report.txt")]) == 0
    out = capsys.readouterr().out
    assert "tu=" in out and "purity=" in out and "nmi=" in out and "pair_cos=" in out
    assert (workdir / "report.txt").read_text() == out

    assert main(["export", "--model", str(workdir / "model.ckpt"),
                 "--corpus", str(workdir / "corpus.json"),
                 "--topics", str(workdir / "topics.txt"),
                 "--theta", str(workdir / "theta.txt"),
                 "--top-words", "3"]) == 0
    topics = (workdir / "topics.txt").read_text().splitlines()
    assert len(topics) == 2 and topics[0].startswith("0\t")
    theta = (workdir / "theta.txt").read_text().splitlines()
    assert theta[0] == "12 2"
    assert len(theta) == 13


def test_same_seed_same_checkpoint(workdir, capsys):
    assert main(preprocess_args(workdir)) == 0
    assert main(train_args(workdir, out="a.ckpt")) == 0
    assert main(train_args(workdir, out="b.ckpt")) == 0
    capsys.readouterr()
    assert (workdir / "a.ckpt").read_bytes() == (workdir / "b.ckpt").read_bytes()


def test_seed_from_environment(workdir, capsys, monkeypatch):
    assert main(preprocess_args(workdir)) == 0
    capsys.readouterr()
    monkeypatch.setenv("TSCTM_SEED", "123")
    args = train_args(workdir)
    args.remove("--seed")
    args.remove("7")
    assert main(args) == 0
    assert "--seed 123" in capsys.readouterr().err


def test_bad_environment_seed(workdir, capsys, monkeypatch):
    assert main(preprocess_args(workdir)) == 0
    capsys.readouterr()
    monkeypatch.setenv("TSCTM_SEED", "not-a-number")
    args = train_args(workdir)
    args.remove("--seed")
    args.remove("7")
    assert main(args) == 1
    assert "TSCTM_SEED" in capsys.readouterr().err


def test_runtime_errors_exit_2(workdir, capsys):
    assert main(["train", "--corpus", str(workdir / "missing.json"),
                 "--out", str(workdir / "m.ckpt")]) == 2
    assert "error:" in capsys.readouterr().err

    (workdir / "junk.ckpt").write_bytes(b"not a checkpoint")
    assert main(preprocess_args(workdir)) == 0
    assert main(["eval", "--model", str(workdir / "junk.ckpt"),
                 "--corpus", str(workdir / "corpus.json")]) == 2
    assert "not a model checkpoint" in capsys.readouterr().err


def test_augmented_flag_needs_paired_corpus(workdir, capsys):
    args = preprocess_args(workdir)
    aug_at = args.index("--aug")
    del args[aug_at:aug_at + 2]
    assert main(args) == 0
    assert main(train_args(workdir, augmented=True)) == 2
    assert "no augmentation pairing" in capsys.readouterr().err


def test_selftest_reporting(capsys, monkeypatch):
    monkeypatch.setattr(selftest_mod, "run_all",
                        lambda: [("alpha", True, "fine"), ("beta", False, "broken")])
    assert main(["selftest"]) == 2
    captured = capsys.readouterr()
    assert "PASS alpha: fine" in captured.out
    assert "FAIL beta: broken" in captured.out
    assert "1/2 checks failed" in captured.err

    monkeypatch.setattr(selftest_mod, "run_all", lambda: [("alpha", True, "fine")])
    assert main(["selftest"]) == 0
    assert "all 1 checks passed" in capsys.readouterr().err


def test_module_entrypoint_help():
    proc = subprocess.run([sys.executable, "-m", "tsctm.cli", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "preprocess" in proc.stdout and "selftest" in proc.stdout
