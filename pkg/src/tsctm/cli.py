"""Command-line interface.

Subcommands: preprocess, train, eval, export, selftest. Exit codes:
0 on success, 1 on usage errors, 2 on runtime errors. Every run echoes its
fully resolved configuration (defaults and seed included) to stderr as a
`config:` line whose tokens can be fed back to reproduce the run exactly.
"""
from __future__ import annotations

import argparse
import os
import shlex
import sys
from typing import Optional

import numpy as np

from . import evaluation as ev
from . import selftest as selftest_mod
from .corpus import (
    CorpusError,
    attach_augmentation,
    attach_labels,
    load_corpus,
    preprocess,
    read_label_lines,
    read_lines,
    save_corpus,
)
from .model import CheckpointError, load_checkpoint
from .objectives import TscConfig
from .trainer import TrainConfig, TrainingDiverged, infer_theta, train


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise _UsageError(message)


_THREAD_LIMITER = None


def _apply_threads(n: int) -> None:
    """Cap worker fan-out. Computation is single-process; this limits the
    BLAS thread pools when threadpoolctl is available."""
    global _THREAD_LIMITER
    if n < 1:
        raise _UsageError("--threads must be >= 1")
    try:
        import threadpoolctl
    except ImportError:
        return
    _THREAD_LIMITER = threadpoolctl.threadpool_limits(limits=n)


def _resolve_seed(seed: Optional[int]) -> int:
    if seed is not None:
        return seed
    env = os.environ.get("TSCTM_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise _UsageError(f"TSCTM_SEED must be an integer, got {env!r}")
    return int.from_bytes(os.urandom(8), "little") % (2 ** 31)


def _echo(tokens: list[str]) -> None:
    print("config: " + shlex.join(tokens), file=sys.stderr)


def build_parser() -> _Parser:
    parser = _Parser(prog="tsctm", description="Quantized contrastive topic model for short texts")
    sub = parser.add_subparsers(dest="command", required=True)

    pre = sub.add_parser("preprocess", help="filter raw text into a corpus file")
    pre.add_argument("--input", required=True, help="raw text, one document per line")
    pre.add_argument("--aug", help="augmented text, one line per original line")
    pre.add_argument("--labels", help="integer labels, one per line")
    pre.add_argument("--min-freq", type=int, default=5)
    pre.add_argument("--min-len", type=int, default=2)
    pre.add_argument("--out", required=True)
    pre.add_argument("--threads", type=int, default=1)

    tr = sub.add_parser("train", help="train a model on a corpus file")
    tr.add_argument("--corpus", required=True)
    tr.add_argument("-K", type=int, default=50, dest="n_topics")
    tr.add_argument("--hidden", type=int, default=200)
    tr.add_argument("--epochs", type=int, default=200)
    tr.add_argument("--lr", type=float, default=0.002)
    tr.add_argument("--batch-size", type=int, default=200)
    tr.add_argument("--lambda-commit", type=float, default=0.1)
    tr.add_argument("--lambda-tsc", type=float, default=1.0)
    tr.add_argument("--lambda-original", type=float, default=1.0)
    tr.add_argument("--tau", type=float, default=0.5)
    tr.add_argument("--denominator", choices=["infonce", "literal"], default="infonce",
                    help="keep each numerator inside its denominator, or not")
    tr.add_argument("--reduce", choices=["sum", "mean"], default="sum")
    tr.add_argument("--disable-positives", action="store_true")
    tr.add_argument("--disable-negatives", action="store_true")
    tr.add_argument("--vq-norm", choices=["sq", "l2"], default="sq")
    tr.add_argument("--encoder-layers", type=int, choices=[1, 2], default=2)
    tr.add_argument("--no-code-restarts", action="store_true",
                    help="leave unused codebook rows where they are")
    tr.add_argument("--augmented", action="store_true")
    tr.add_argument("--seed", type=int)
    tr.add_argument("--checkpoint-every", type=int, default=0)
    tr.add_argument("--log", help="write per-epoch records here as JSON lines")
    tr.add_argument("--log-stdout", action="store_true")
    tr.add_argument("--threads", type=int, default=1)
    tr.add_argument("--out", required=True)

    ex = sub.add_parser("eval", help="score a trained model")
    ex.add_argument("--model", required=True)
    ex.add_argument("--corpus", required=True)
    ex.add_argument("--ref-corpus", help="corpus file for coherence counts (default: --corpus)")
    ex.add_argument("--top-words", type=int, default=15)
    ex.add_argument("--window", type=int, default=0)
    ex.add_argument("--out")
    ex.add_argument("--threads", type=int, default=1)

    xp = sub.add_parser("export", help="write topics and document-topic weights")
    xp.add_argument("--model", required=True)
    xp.add_argument("--corpus", required=True)
    xp.add_argument("--topics", required=True)
    xp.add_argument("--theta", required=True)
    xp.add_argument("--top-words", type=int, default=15)
    xp.add_argument("--threads", type=int, default=1)

    st = sub.add_parser("selftest", help="run gradient checks and metric oracles")
    st.add_argument("--threads", type=int, default=1)

    return parser


def _cmd_preprocess(args: argparse.Namespace) -> int:
    if args.min_freq < 1:
        raise _UsageError("--min-freq must be >= 1")
    if args.min_len < 2:
        raise _UsageError("--min-len must be >= 2")
    tokens = ["preprocess", "--input", args.input]
    if args.aug:
        tokens += ["--aug", args.aug]
    if args.labels:
        tokens += ["--labels", args.labels]
    tokens += ["--min-freq", str(args.min_freq), "--min-len", str(args.min_len),
               "--threads", str(args.threads), "--out", args.out]
    _echo(tokens)

    corpus = preprocess(read_lines(args.input), min_freq=args.min_freq, min_len=args.min_len)
    if args.labels:
        corpus = attach_labels(corpus, read_label_lines(args.labels))
    if args.aug:
        corpus = attach_augmentation(corpus, read_lines(args.aug))
    save_corpus(corpus, args.out)
    print(f"preprocess: kept {len(corpus)} documents, vocabulary size {len(corpus.vocab)}",
          file=sys.stderr)
    return 0


def _cmd_train(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args.seed)
    tokens = ["train", "--corpus", args.corpus, "-K", str(args.n_topics),
              "--hidden", str(args.hidden), "--epochs", str(args.epochs),
              "--lr", repr(args.lr), "--batch-size", str(args.batch_size),
              "--lambda-commit", repr(args.lambda_commit),
              "--lambda-tsc", repr(args.lambda_tsc),
              "--lambda-original", repr(args.lambda_original),
              "--tau", repr(args.tau), "--denominator", args.denominator,
              "--reduce", args.reduce, "--vq-norm", args.vq_norm,
              "--encoder-layers", str(args.encoder_layers),
              "--seed", str(seed), "--checkpoint-every", str(args.checkpoint_every),
              "--threads", str(args.threads)]
    if args.no_code_restarts:
        tokens.append("--no-code-restarts")
    if args.augmented:
        tokens.append("--augmented")
    if args.disable_positives:
        tokens.append("--disable-positives")
    if args.disable_negatives:
        tokens.append("--disable-negatives")
    if args.log:
        tokens += ["--log", args.log]
    if args.log_stdout:
        tokens.append("--log-stdout")
    tokens += ["--out", args.out]
    _echo(tokens)

    try:
        tsc = TscConfig(
            tau=args.tau, lambda_tsc=args.lambda_tsc, lambda_original=args.lambda_original,
            include_positive_in_denominator=args.denominator == "infonce",
            reduce=args.reduce, use_positives=not args.disable_positives,
            use_negatives=not args.disable_negatives,
        )
        cfg = TrainConfig(
            n_topics=args.n_topics, hidden=args.hidden, epochs=args.epochs,
            lr=args.lr, batch_size=args.batch_size, lambda_commit=args.lambda_commit,
            tsc=tsc, seed=seed, augmented=args.augmented,
            checkpoint_every=args.checkpoint_every, vq_norm=args.vq_norm,
            encoder_layers=args.encoder_layers,
            code_restarts=not args.no_code_restarts,
        )
    except ValueError as exc:
        raise _UsageError(str(exc))

    corpus = load_corpus(args.corpus)
    if args.augmented and corpus.aug_docs is None:
        raise RuntimeError(
            "corpus has no augmentation pairing; rerun preprocess with --aug "
            "to train with the augmented objective")
    on_epoch = None
    if args.log_stdout:
        on_epoch = lambda stats: print(stats.to_json())
    _, log = train(corpus, cfg, out_path=args.out, log_path=args.log, on_epoch=on_epoch)
    last = log.entries[-1].loss
    print(f"train: {args.epochs} epochs done, final total loss {last.total:.6f}, "
          f"checkpoint written to {args.out}", file=sys.stderr)
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    if args.top_words < 1:
        raise _UsageError("--top-words must be >= 1")
    if args.window < 0:
        raise _UsageError("--window must be >= 0")
    tokens = ["eval", "--model", args.model, "--corpus", args.corpus]
    if args.ref_corpus:
        tokens += ["--ref-corpus", args.ref_corpus]
    tokens += ["--top-words", str(args.top_words), "--window", str(args.window),
               "--threads", str(args.threads)]
    if args.out:
        tokens += ["--out", args.out]
    _echo(tokens)

    params = load_checkpoint(args.model)
    corpus = load_corpus(args.corpus)
    topics = ev.top_words(params.beta, args.top_words)
    tu = ev.topic_uniqueness(topics)
    if args.ref_corpus:
        ref = load_corpus(args.ref_corpus)
        npmi_val = ev.npmi_coherence(topics, ref, window=args.window,
                                     topic_vocab=corpus.vocab)
    else:
        npmi_val = ev.npmi_coherence(topics, corpus, window=args.window)

    theta = infer_theta(params, corpus)
    purity_val = nmi_val = pair_val = None
    if corpus.labels is not None:
        assignments = ev.cluster_assignments(theta)
        labels = np.asarray(corpus.labels)
        purity_val = ev.purity(assignments, labels)
        nmi_val = ev.nmi(assignments, labels)
    if corpus.aug_docs is not None:
        theta_aug = infer_theta(params, corpus, augmented=True)
        pair_val = ev.pair_cosine(theta, theta_aug)

    report = ev.EvalReport(tu=tu, npmi=npmi_val, purity=purity_val,
                           nmi=nmi_val, pair_cos=pair_val)
    text = ev.format_report(report, n_topics=params.n_topics, top_t=args.top_words)
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text)
    return 0


def _cmd_export(args: argparse.Namespace) -> int:
    if args.top_words < 1:
        raise _UsageError("--top-words must be >= 1")
    tokens = ["export", "--model", args.model, "--corpus", args.corpus,
              "--top-words", str(args.top_words), "--threads", str(args.threads),
              "--topics", args.topics, "--theta", args.theta]
    _echo(tokens)

    params = load_checkpoint(args.model)
    corpus = load_corpus(args.corpus)
    topics = ev.top_words(params.beta, args.top_words)
    with open(args.topics, "w", encoding="utf-8") as f:
        f.write(ev.export_topics(topics, corpus.vocab))
    theta = infer_theta(params, corpus)
    with open(args.theta, "w", encoding="utf-8") as f:
        f.write(ev.export_theta(theta))
    print(f"export: wrote {args.topics} and {args.theta}", file=sys.stderr)
    return 0


def _cmd_selftest(args: argparse.Namespace) -> int:
    _echo(["selftest", "--threads", str(args.threads)])
    results = selftest_mod.run_all()
    failed = 0
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        if not ok:
            failed += 1
    if failed:
        print(f"selftest: {failed}/{len(results)} checks failed", file=sys.stderr)
        return 2
    print(f"selftest: all {len(results)} checks passed", file=sys.stderr)
    return 0


_COMMANDS = {
    "preprocess": _cmd_preprocess,
    "train": _cmd_train,
    "eval": _cmd_eval,
    "export": _cmd_export,
    "selftest": _cmd_selftest,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        print("run 'tsctm --help' for the command synopsis", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help and friends
        return int(exc.code or 0)
    try:
        _apply_threads(args.threads)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (CorpusError, CheckpointError, TrainingDiverged, RuntimeError,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
