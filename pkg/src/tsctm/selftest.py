"""Built-in verification suites: gradient checks and metric oracles.

These back both the `selftest` CLI command and the acceptance tests. Each
check returns (name, ok, detail) so callers can print one line per check.
"""
from __future__ import annotations

import math
from typing import Iterable

import numpy as np

from .corpus import BowBatch, Corpus, Document, Vocabulary, preprocess
from .model import ModelParams, init_params, quantize
from .numerics import fd_gradient, make_rng
from .objectives import ObjectiveConfig, TscConfig, capture_assignments, total_loss
from . import evaluation as ev

CheckResult = tuple[str, bool, str]

GRAD_V = 30
GRAD_K = 5
GRAD_HIDDEN = 7
GRAD_B = 8
GRAD_TOL = 1e-4
FD_STEP = 1e-6
# relative error floor: coordinates whose gradients are this small are
# compared absolutely, which keeps finite-difference roundoff out of the ratio
_REL_FLOOR = 1e-3


def _random_batch(rng: np.random.Generator, with_aug: bool) -> BowBatch:
    rows = []
    for _ in range(GRAD_B):
        length = int(rng.integers(3, 13))
        ids = rng.integers(0, GRAD_V, size=length)
        counts: dict[int, int] = {}
        for w in ids:
            counts[int(w)] = counts.get(int(w), 0) + 1
        rows.append(sorted(counts.items()))
    aug_rows = None
    if with_aug:
        aug_rows = []
        for row in rows:
            length = int(rng.integers(3, 13))
            ids = rng.integers(0, GRAD_V, size=length)
            counts = {}
            for w in ids:
                counts[int(w)] = counts.get(int(w), 0) + 1
            aug_rows.append(sorted(counts.items()))
    return BowBatch(rows=rows, aug_rows=aug_rows)


def _max_rel_err(analytic: dict[str, np.ndarray], numeric: dict[str, np.ndarray]) -> float:
    worst = 0.0
    for name in analytic:
        a = analytic[name]
        b = numeric[name]
        denom = np.maximum(np.maximum(np.abs(a), np.abs(b)), _REL_FLOOR)
        worst = max(worst, float(np.max(np.abs(a - b) / denom)))
    return worst


def gradient_instance(seed: int, augmented: bool, include_positive: bool,
                      vq_norm: str) -> tuple[float, bool]:
    """Analytic-vs-central-difference check on one randomized instance.

    Quantization indices, pair sets, and stop-gradient values are captured
    once and held fixed, so the checked function is smooth. Returns
    (max relative error, had nontrivial contrastive pairs).
    """
    rng = make_rng(seed)
    params = init_params(GRAD_V, GRAD_K, GRAD_HIDDEN, rng)
    # nudge the codebook off the identity so every vq residual is nonzero
    params.embeddings += rng.uniform(-0.05, 0.05, size=params.embeddings.shape)
    # spread the output layer so a small batch lands on several codes;
    # a freshly initialized encoder otherwise sends every document to one code
    params.w_out *= 4.0
    batch = _random_batch(rng, with_aug=augmented)
    cfg = ObjectiveConfig(
        tsc=TscConfig(include_positive_in_denominator=include_positive),
        lambda_commit=0.1, vq_norm=vq_norm,
    )
    frozen = capture_assignments(params, batch, cfg, augmented)
    nontrivial = any(p.size and n.size for p, n in
                     zip(frozen.pairs.positives, frozen.pairs.negatives))

    _, analytic = total_loss(params, batch, cfg, augmented, frozen=frozen)

    def loss_fn(pd: dict[str, np.ndarray]) -> float:
        breakdown, _ = total_loss(ModelParams.from_dict(pd), batch, cfg,
                                  augmented, frozen=frozen)
        return breakdown.total

    numeric = fd_gradient(loss_fn, params.as_dict(), h=FD_STEP)
    return _max_rel_err(analytic, numeric), nontrivial


def run_gradient_suite(n_instances: int = 20) -> list[CheckResult]:
    """Randomized gradient checks cycling over augmentation, denominator
    mode, and vq-norm mode."""
    modes = [(aug, inc, norm)
             for aug in (False, True)
             for inc in (True, False)
             for norm in ("sq", "l2")]
    results: list[CheckResult] = []
    for i in range(n_instances):
        augmented, include_positive, vq_norm = modes[i % len(modes)]
        # walk the seed until the batch actually forms contrastive pairs;
        # every attempt is still a full gradient check
        seed = 1000 + i
        err = 0.0
        nontrivial = False
        for _ in range(25):
            err_i, nontrivial = gradient_instance(seed, augmented,
                                                  include_positive, vq_norm)
            err = max(err, err_i)
            if nontrivial:
                break
            seed += 7919
        name = (f"gradient[{i:02d}] aug={int(augmented)} "
                f"incl_pos={int(include_positive)} norm={vq_norm}")
        ok = err <= GRAD_TOL and nontrivial
        detail = f"max rel err {err:.3e}" + ("" if nontrivial else ", no pairs formed")
        results.append((name, ok, detail))
    return results


def run_quantization_oracle(n_draws: int = 1000, seed: int = 4242) -> list[CheckResult]:
    """Identity codebook: the nearest one-hot row is always argmax(theta)."""
    rng = make_rng(seed)
    bad = 0
    for _ in range(n_draws):
        k = int(rng.integers(2, 13))
        theta = rng.dirichlet(np.ones(k))
        q, _ = quantize(theta, np.eye(k))
        if q != int(np.argmax(theta)):
            bad += 1
    ok = bad == 0
    return [("quantization argmax oracle", ok, f"{bad}/{n_draws} mismatches")]


def _tiny_corpus(lines: Iterable[str]) -> Corpus:
    return preprocess(list(lines), min_freq=1, min_len=2)


def run_metric_oracles() -> list[CheckResult]:
    checks: list[CheckResult] = []

    def add(name: str, got: float, want: float, tol: float) -> None:
        ok = math.isfinite(got) and abs(got - want) <= tol
        checks.append((name, ok, f"got {got!r}, want {want!r}"))

    disjoint = ev.TopicSet(word_ids=np.array([[0, 1], [2, 3]]),
                           weights=np.ones((2, 2)))
    add("tu disjoint topics", ev.topic_uniqueness(disjoint), 1.0, 1e-12)
    identical = ev.TopicSet(word_ids=np.array([[0, 1], [0, 1], [0, 1]]),
                            weights=np.ones((3, 2)))
    add("tu identical topics", ev.topic_uniqueness(identical), 1.0 / 3.0, 1e-12)
    shared = ev.TopicSet(word_ids=np.array([[0, 1], [0, 2]]),
                         weights=np.ones((2, 2)))
    add("tu one shared word", ev.topic_uniqueness(shared), 0.75, 1e-12)

    add("purity hand instance",
        ev.purity(np.array([0, 0, 0, 1]), np.array([0, 0, 1, 1])), 0.75, 1e-12)
    add("purity single cluster",
        ev.purity(np.array([0, 0]), np.array([0, 1])), 0.5, 1e-12)

    add("nmi identical partitions",
        ev.nmi(np.array([0, 0, 1, 1]), np.array([1, 1, 0, 0])), 1.0, 1e-12)
    add("nmi single cluster vs balanced",
        ev.nmi(np.array([0, 0, 0, 0]), np.array([0, 1, 0, 1])), 0.0, 1e-12)
    add("nmi independent partitions",
        ev.nmi(np.array([0, 0, 1, 1]), np.array([0, 1, 0, 1])), 0.0, 1e-12)

    ref = _tiny_corpus(["a b", "a b", "x x", "y y"])
    topic_ab = ev.TopicSet(
        word_ids=np.array([[ref.vocab.index["a"], ref.vocab.index["b"]]]),
        weights=np.ones((1, 2)))
    add("npmi perfect co-occurrence",
        ev.npmi_coherence(topic_ab, ref, window=0), 1.0, 1e-9)

    return checks


def run_all() -> list[CheckResult]:
    results = run_gradient_suite()
    results.extend(run_quantization_oracle())
    results.extend(run_metric_oracles())
    return results
