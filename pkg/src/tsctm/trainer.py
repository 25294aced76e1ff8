"""Minibatch training loop with Adam, telemetry, and checkpointing."""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .corpus import Corpus, to_bow
from .model import (ModelParams, encode_batch, dense_rows, init_params,
                    quantize_batch, save_checkpoint)
from .numerics import AdamState, Array, adam_step, make_rng
from .objectives import LossBreakdown, ObjectiveConfig, TscConfig, _total_loss_impl


class TrainingDiverged(RuntimeError):
    pass


@dataclass
class TrainConfig:
    n_topics: int
    hidden: int = 200
    epochs: int = 200
    lr: float = 0.002
    batch_size: int = 200
    lambda_commit: float = 0.1
    tsc: TscConfig = field(default_factory=TscConfig)
    seed: int = 0
    augmented: bool = False
    checkpoint_every: int = 0
    vq_norm: str = "sq"
    encoder_layers: int = 2
    code_restarts: bool = True

    def __post_init__(self) -> None:
        if self.n_topics < 1:
            raise ValueError("n_topics must be >= 1")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.batch_size < 2:
            raise ValueError("batch_size must be >= 2")
        if not self.lr > 0:
            raise ValueError("lr must be positive")
        if self.checkpoint_every < 0:
            raise ValueError("checkpoint_every must be >= 0")


@dataclass
class EpochStats:
    epoch: int
    loss: LossBreakdown
    codebook_usage: list[int]
    wall_time_s: float

    def to_json(self) -> str:
        return json.dumps({
            "epoch": self.epoch,
            "recon": self.loss.recon,
            "codebook": self.loss.codebook,
            "commit": self.loss.commit,
            "tsc": self.loss.tsc,
            "total": self.loss.total,
            "codebook_usage": self.codebook_usage,
            "wall_time_s": self.wall_time_s,
        })


@dataclass
class TrainLog:
    entries: list[EpochStats] = field(default_factory=list)

    def to_jsonl(self) -> str:
        return "".join(e.to_json() + "\n" for e in self.entries)


def train(corpus: Corpus, cfg: TrainConfig, out_path: Optional[str] = None,
          log_path: Optional[str] = None,
          on_epoch: Optional[Callable[[EpochStats], None]] = None) -> tuple[ModelParams, TrainLog]:
    """Train a model on the corpus.

    Runs epochs x ceil(N / batch_size) Adam steps over seeded shuffles, the
    final partial batch included. Writes the final checkpoint to `out_path`
    when given, plus periodic ones every `checkpoint_every` epochs; epoch
    records go to `log_path` as JSON lines. A non-finite loss term aborts
    with a diagnostic naming the term.

    With `code_restarts` on (the default), a codebook row that captured no
    document in a batch is moved to the batch document farthest from its
    assigned row. A freshly initialized encoder sends every document to one
    row, and a row that has gone unused has no gradient of its own to bring
    it back; the restart keeps all rows in play without touching the
    objective. It needs no extra random draws, so runs stay reproducible,
    and it goes quiet once every row keeps winning documents. The final
    epoch never restarts, so the returned model is consistent with its own
    assignments.
    """
    if cfg.augmented and corpus.aug_docs is None:
        raise ValueError("augmented training requires a corpus with an augmentation pairing")
    n_docs = len(corpus.docs)
    if n_docs == 0:
        raise ValueError("cannot train on an empty corpus")

    rng = make_rng(cfg.seed)
    params = init_params(len(corpus.vocab), cfg.n_topics, cfg.hidden, rng,
                         n_hidden_layers=cfg.encoder_layers)
    pdict = params.as_dict()
    adam = AdamState(lr=cfg.lr)
    obj_cfg = ObjectiveConfig(tsc=cfg.tsc, lambda_commit=cfg.lambda_commit,
                              vq_norm=cfg.vq_norm)

    log = TrainLog()
    log_file = open(log_path, "w", encoding="utf-8") if log_path else None
    try:
        n_batches = math.ceil(n_docs / cfg.batch_size)
        for epoch in range(1, cfg.epochs + 1):
            t0 = time.perf_counter()
            order = rng.permutation(n_docs)
            usage = np.zeros(cfg.n_topics, dtype=np.int64)
            sums = np.zeros(5, dtype=np.float64)
            for step in range(n_batches):
                idx = order[step * cfg.batch_size:(step + 1) * cfg.batch_size]
                batch = to_bow(corpus, [int(i) for i in idx])
                model = ModelParams.from_dict(pdict)
                breakdown, grads, q = _total_loss_impl(
                    model, batch, obj_cfg, cfg.augmented, frozen=None)
                _check_finite(breakdown, epoch, step)
                np.add.at(usage, q, 1)
                sums += (breakdown.recon, breakdown.codebook, breakdown.commit,
                         breakdown.tsc, breakdown.total)
                pdict, adam = adam_step(pdict, grads, adam)
                if cfg.code_restarts and epoch < cfg.epochs:
                    absent = [k for k in range(cfg.n_topics) if not np.any(q == k)]
                    if absent:
                        _restart_codes(pdict, batch.rows, absent)
            mean = sums / n_batches
            stats = EpochStats(
                epoch=epoch,
                loss=LossBreakdown(recon=float(mean[0]), codebook=float(mean[1]),
                                   commit=float(mean[2]), tsc=float(mean[3]),
                                   total=float(mean[4])),
                codebook_usage=[int(c) for c in usage],
                wall_time_s=time.perf_counter() - t0,
            )
            log.entries.append(stats)
            if log_file:
                log_file.write(stats.to_json() + "\n")
                log_file.flush()
            if on_epoch:
                on_epoch(stats)
            if out_path and cfg.checkpoint_every > 0 and epoch % cfg.checkpoint_every == 0 \
                    and epoch < cfg.epochs:
                save_checkpoint(ModelParams.from_dict(pdict), f"{out_path}.epoch{epoch}")
    finally:
        if log_file:
            log_file.close()

    final = ModelParams.from_dict(pdict)
    if out_path:
        save_checkpoint(final, out_path)
    return final, log


def _restart_codes(pdict: dict[str, Array], rows: list[list[tuple[int, int]]],
                   absent: list[int]) -> None:
    """Move each unused codebook row onto a batch document's topic
    distribution, most poorly quantized documents first."""
    model = ModelParams.from_dict(pdict)
    x = dense_rows(rows, model.vocab_size)
    theta = encode_batch(model, x).theta
    _, theta_q = quantize_batch(theta, model.embeddings)
    residual = np.linalg.norm(theta - theta_q, axis=1)
    order = np.argsort(-residual)
    for j, k in enumerate(absent):
        pdict["E"][k] = theta[order[j % len(order)]]


def _check_finite(breakdown: LossBreakdown, epoch: int, step: int) -> None:
    for name in ("recon", "codebook", "commit", "tsc", "total"):
        value = getattr(breakdown, name)
        if not math.isfinite(value):
            raise TrainingDiverged(
                f"loss term {name!r} is not finite ({value}) at epoch {epoch} step {step}")


def infer_theta(params: ModelParams, corpus: Corpus, augmented: bool = False,
                chunk: int = 1024) -> Array:
    """Document-topic distributions (soft, no quantization), one row per doc."""
    if len(corpus.vocab) != params.vocab_size:
        raise ValueError(
            f"vocabulary size mismatch: corpus has {len(corpus.vocab)}, "
            f"model expects {params.vocab_size}")
    docs = corpus.aug_docs if augmented else corpus.docs
    if augmented and docs is None:
        raise ValueError("corpus has no augmentation pairing")
    out = np.zeros((len(docs), params.n_topics), dtype=np.float64)
    for start in range(0, len(docs), chunk):
        block = docs[start:start + chunk]
        rows = []
        for d in block:
            counts: dict[int, int] = {}
            for t in d.tokens:
                counts[t] = counts.get(t, 0) + 1
            rows.append(sorted(counts.items()))
        x = dense_rows(rows, params.vocab_size)
        out[start:start + len(block)] = encode_batch(params, x).theta
    return out
