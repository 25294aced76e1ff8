"""Training objectives and their exact gradients.

Two ingredients make up the total loss:

* a topic-model term per document: word reconstruction under the
  straight-through quantized theta, a codebook-pull term |sg(theta) -
  theta_q| whose gradient reaches only the selected codebook row, and a
  commitment term lambda * |sg(theta_q) - theta| whose gradient reaches
  only theta;
* a topic-semantic contrastive term over encoder outputs h, where two
  documents form a positive pair when they quantize to the same codebook
  index and a negative pair otherwise, scored by g(a, b) = cos(a, b)/tau.
  With a paired augmented view, each anchor additionally treats its
  augmented copy as a positive whose denominator also sums the augmented
  views of the negatives.

All gradients here are hand-derived; `capture_assignments` freezes the
discrete parts (quantization indices, pair sets, stop-gradient values) so
the loss becomes a smooth function of the parameters that finite
differences can verify coordinate by coordinate.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .corpus import BowBatch
from .model import (
    EncoderActivations,
    ForwardTrace,
    ModelParams,
    dense_rows,
    encode_batch,
    encoder_backward,
    quantize_batch,
)
from .numerics import Array, log_softmax, softmax_vjp

VQ_NORMS = ("sq", "l2")


@dataclass
class TscConfig:
    """Knobs of the contrastive term.

    include_positive_in_denominator keeps each pair's numerator inside its
    denominator (the bounded form); switching it off yields the literal
    negatives-only denominator. `reduce` picks sum or mean over an
    anchor's positives. use_positives / use_negatives exist for ablations.
    """

    tau: float = 0.5
    lambda_tsc: float = 1.0
    lambda_original: float = 1.0
    include_positive_in_denominator: bool = True
    reduce: str = "sum"
    use_positives: bool = True
    use_negatives: bool = True

    def __post_init__(self) -> None:
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        if self.lambda_tsc < 0 or self.lambda_original < 0:
            raise ValueError("loss weights must be non-negative")
        if self.reduce not in ("sum", "mean"):
            raise ValueError(f"reduce must be 'sum' or 'mean', got {self.reduce!r}")


@dataclass
class ObjectiveConfig:
    tsc: TscConfig = field(default_factory=TscConfig)
    lambda_commit: float = 0.1
    vq_norm: str = "sq"

    def __post_init__(self) -> None:
        if self.lambda_commit < 0:
            raise ValueError("lambda_commit must be non-negative")
        if self.vq_norm not in VQ_NORMS:
            raise ValueError(f"vq_norm must be one of {VQ_NORMS}, got {self.vq_norm!r}")


@dataclass
class PairSets:
    """Per-anchor positive/negative indices over the original traces, plus
    the index of each anchor's augmented view when one exists."""

    positives: list[Array]
    negatives: list[Array]
    aug_positive: Optional[Array]
    n_original: int


@dataclass
class LossBreakdown:
    recon: float
    codebook: float
    commit: float
    tsc: float
    total: float


@dataclass
class TmGrads:
    beta: Array
    theta: Array
    theta_q: Array
    q: int


@dataclass
class FrozenAssignments:
    """Discrete state captured at a parameter point: quantization indices,
    pair sets, and the stop-gradient values entering the topic-model term.
    Evaluating the loss under a frozen assignment keeps it differentiable,
    which is what the finite-difference checks require."""

    q: Array
    theta_bar: Array
    theta_q_bar: Array
    pairs: PairSets
    q_aug: Optional[Array] = None
    theta_bar_aug: Optional[Array] = None
    theta_q_bar_aug: Optional[Array] = None


def build_pairs(traces: list[ForwardTrace]) -> PairSets:
    """Pair sets over the original traces of a forward pass.

    Traces must be in forward() layout: originals first, then their
    augmented views in the same order.
    """
    n_orig = sum(1 for t in traces if not t.is_augmented)
    if n_orig == 0:
        raise ValueError("pair construction requires at least one original trace")
    if any(t.is_augmented for t in traces[:n_orig]):
        raise ValueError("traces out of order: originals must precede augmented views")
    has_aug = len(traces) > n_orig
    if has_aug and len(traces) != 2 * n_orig:
        raise ValueError("augmented traces must pair originals one-to-one")
    q = np.array([t.q for t in traces[:n_orig]], dtype=np.int64)
    return _pairs_from_q(q, has_aug)


def _pairs_from_q(q: Array, has_aug: bool) -> PairSets:
    n = q.shape[0]
    positives: list[Array] = []
    negatives: list[Array] = []
    for i in range(n):
        same = np.flatnonzero(q == q[i])
        positives.append(same[same != i])
        negatives.append(np.flatnonzero(q != q[i]))
    aug_positive = np.arange(n, dtype=np.int64) + n if has_aug else None
    return PairSets(positives, negatives, aug_positive, n)


def score(h_a: Array, h_b: Array, tau: float) -> float:
    """Temperature-scaled cosine: cos(a, b) / tau."""
    if not tau > 0:
        raise ValueError("tau must be positive")
    na = float(np.linalg.norm(h_a))
    nb = float(np.linalg.norm(h_b))
    if na == 0.0 or nb == 0.0:
        raise ValueError("zero-norm representation in contrastive scoring")
    return float(np.dot(h_a, h_b) / (na * nb * tau))


def tsc_loss(traces: list[ForwardTrace], pairs: PairSets,
             cfg: TscConfig) -> tuple[float, Array]:
    """Contrastive loss over original traces; returns (value, dL/dh) with one
    gradient row per trace. Anchors lacking positives or negatives
    contribute nothing; the value is the mean over contributing anchors."""
    h_all = np.stack([t.h for t in traces]).astype(np.float64)
    return _tsc_core(h_all, pairs, cfg, use_aug=False)


def tsc_da_loss(traces: list[ForwardTrace], pairs: PairSets,
                cfg: TscConfig) -> tuple[float, Array]:
    """Contrastive loss with the augmented view of each anchor as an extra
    positive and the augmented views of its negatives as extra denominator
    terms. Original-positive terms are weighted by lambda_original."""
    if pairs.aug_positive is None:
        raise ValueError("augmented contrastive loss requires an augmentation pairing")
    h_all = np.stack([t.h for t in traces]).astype(np.float64)
    if h_all.shape[0] < 2 * pairs.n_original:
        raise ValueError("traces are missing the augmented views")
    return _tsc_core(h_all, pairs, cfg, use_aug=True)


def _tsc_core(h_all: Array, pairs: PairSets, cfg: TscConfig,
              use_aug: bool) -> tuple[float, Array]:
    n = h_all.shape[0]
    d_h = np.zeros_like(h_all)
    n_orig = pairs.n_original
    s = 1.0 if cfg.include_positive_in_denominator else 0.0
    lam_o = cfg.lambda_original

    if use_aug:
        if cfg.use_negatives:
            contributing = [i for i in range(n_orig) if pairs.negatives[i].size > 0]
        else:
            contributing = list(range(n_orig))
    else:
        if not cfg.use_positives:
            return 0.0, d_h
        if cfg.use_negatives:
            contributing = [i for i in range(n_orig)
                            if pairs.positives[i].size > 0 and pairs.negatives[i].size > 0]
        else:
            contributing = [i for i in range(n_orig) if pairs.positives[i].size > 0]
    if not contributing:
        return 0.0, d_h

    used = np.zeros(n, dtype=bool)
    for i in contributing:
        used[i] = True
        if use_aug:
            used[pairs.aug_positive[i]] = True
            if cfg.use_positives:
                used[pairs.positives[i]] = True
            if cfg.use_negatives:
                negs = pairs.negatives[i]
                used[negs] = True
                used[pairs.aug_positive[negs]] = True
        else:
            used[pairs.positives[i]] = True
            if cfg.use_negatives:
                used[pairs.negatives[i]] = True
    norms = np.linalg.norm(h_all, axis=1)
    if np.any(norms[used] == 0.0):
        raise ValueError("zero-norm representation in contrastive scoring")

    safe = np.where(norms > 0.0, norms, 1.0)
    u = h_all / safe[:, None]
    cos_g = u @ u.T
    g = cos_g / cfg.tau

    coeff = np.zeros((n, n), dtype=np.float64)
    value = 0.0
    for i in contributing:
        pos = pairs.positives[i]
        if use_aug and not cfg.use_positives:
            pos = pos[:0]
        w = 1.0 if cfg.reduce == "sum" or pos.size == 0 else 1.0 / pos.size
        if use_aug:
            a = int(pairs.aug_positive[i])
            g_aug = g[i, a]
            if cfg.use_negatives:
                negs = pairs.negatives[i]
                negs_aug = pairs.aug_positive[negs]
                g_negs = g[i, negs]
                g_negs_aug = g[i, negs_aug]
                m = max(g_negs.max(), g_negs_aug.max(), g_aug,
                        g[i, pos].max() if pos.size else -np.inf)
                e_negs = np.exp(g_negs - m)
                e_negs_aug = np.exp(g_negs_aug - m)
                base = e_negs.sum() + e_negs_aug.sum()
                e_aug = np.exp(g_aug - m)
                d_aug = s * e_aug + base
                value += -g_aug + m + np.log(d_aug)
                coeff[i, a] += -1.0 + s * e_aug / d_aug
                inv_sum = 1.0 / d_aug
                if pos.size:
                    g_pos = g[i, pos]
                    e_pos = np.exp(g_pos - m)
                    d_pos = s * e_pos + base
                    value += lam_o * w * float(np.sum(-g_pos + m + np.log(d_pos)))
                    coeff[i, pos] += lam_o * w * (-1.0 + s * e_pos / d_pos)
                    inv_sum += lam_o * w * float(np.sum(1.0 / d_pos))
                coeff[i, negs] += e_negs * inv_sum
                coeff[i, negs_aug] += e_negs_aug * inv_sum
            else:
                value += -g_aug
                coeff[i, a] += -1.0
                if pos.size:
                    value += lam_o * w * float(np.sum(-g[i, pos]))
                    coeff[i, pos] += -lam_o * w
        else:
            g_pos = g[i, pos]
            if cfg.use_negatives:
                negs = pairs.negatives[i]
                g_negs = g[i, negs]
                m = max(g_negs.max(), g_pos.max())
                e_negs = np.exp(g_negs - m)
                base = e_negs.sum()
                e_pos = np.exp(g_pos - m)
                d = s * e_pos + base
                value += w * float(np.sum(-g_pos + m + np.log(d)))
                coeff[i, pos] += w * (-1.0 + s * e_pos / d)
                coeff[i, negs] += e_negs * (w * float(np.sum(1.0 / d)))
            else:
                value += w * float(np.sum(-g_pos))
                coeff[i, pos] += -w

    n_c = len(contributing)
    value /= n_c
    coeff /= n_c

    # dL/dh_i = [sum_m S_im u_m - (sum_m S_im cos_im) u_i] / (tau |h_i|),
    # with S = coeff + coeff^T covering both argument positions of g.
    sym = coeff + coeff.T
    row = np.sum(sym * cos_g, axis=1)
    d_h = (sym @ u - row[:, None] * u) / (cfg.tau * safe[:, None])
    return float(value), d_h


def _tm_core(x: Array, theta: Array, q: Array, embeddings: Array, beta: Array,
             lambda_commit: float, vq_norm: str,
             theta_bar: Optional[Array] = None,
             theta_q_bar: Optional[Array] = None):
    """Batched topic-model term. Returns per-sample (recon, codebook, commit)
    vectors plus unscaled gradients (d_beta summed over the batch, d_theta
    and d_theta_q per sample). When theta_bar/theta_q_bar are given they
    stand in for the stop-gradient values sg(theta) and sg(theta_q)."""
    theta_q_live = embeddings[q]
    if theta_bar is None:
        theta_bar = theta
        theta_q_bar = theta_q_live
        theta_st = theta_q_live
    else:
        # straight-through value with the frozen offset: theta + sg(theta_q - theta)
        theta_st = theta + (theta_q_bar - theta_bar)

    logits = theta_st @ beta.T
    logp = log_softmax(logits, axis=-1)
    recon_vec = -np.sum(x * logp, axis=1)
    p = np.exp(logp)
    totals = x.sum(axis=1)
    d_logits = p * totals[:, None] - x
    d_beta = d_logits.T @ theta_st
    d_theta = d_logits @ beta  # straight-through: recon gradient lands on theta

    diff_cb = theta_bar - theta_q_live   # gradient reaches the codebook row only
    diff_cm = theta - theta_q_bar        # gradient reaches theta only
    if vq_norm == "sq":
        cb_vec = np.sum(diff_cb * diff_cb, axis=1)
        cm_vec = lambda_commit * np.sum(diff_cm * diff_cm, axis=1)
        d_theta_q = -2.0 * diff_cb
        d_theta = d_theta + 2.0 * lambda_commit * diff_cm
    elif vq_norm == "l2":
        cb_n = np.sqrt(np.sum(diff_cb * diff_cb, axis=1))
        cm_n = np.sqrt(np.sum(diff_cm * diff_cm, axis=1))
        cb_vec = cb_n
        cm_vec = lambda_commit * cm_n
        safe_cb = np.where(cb_n > 0.0, cb_n, 1.0)
        safe_cm = np.where(cm_n > 0.0, cm_n, 1.0)
        # subgradient 0 at a zero residual
        d_theta_q = -diff_cb / safe_cb[:, None]
        d_theta_q[cb_n == 0.0] = 0.0
        d_cm = lambda_commit * diff_cm / safe_cm[:, None]
        d_cm[cm_n == 0.0] = 0.0
        d_theta = d_theta + d_cm
    else:
        raise ValueError(f"vq_norm must be one of {VQ_NORMS}, got {vq_norm!r}")
    return recon_vec, cb_vec, cm_vec, d_beta, d_theta, d_theta_q


def tm_loss(trace: ForwardTrace, bow_row: list[tuple[int, int]], beta: Array,
            lambda_commit: float, vq_norm: str = "sq") -> tuple[LossBreakdown, TmGrads]:
    """Topic-model term for a single document."""
    x = dense_rows([bow_row], beta.shape[0])
    theta = trace.theta[None, :]
    # single-row codebook view: the trace already carries its selected row
    recon_vec, cb_vec, cm_vec, d_beta, d_theta, d_theta_q = _tm_core(
        x, theta, np.array([0], dtype=np.int64), trace.theta_q[None, :],
        beta, lambda_commit, vq_norm)
    recon = float(recon_vec[0])
    codebook = float(cb_vec[0])
    commit = float(cm_vec[0])
    breakdown = LossBreakdown(recon=recon, codebook=codebook, commit=commit,
                              tsc=0.0, total=recon + codebook + commit)
    return breakdown, TmGrads(beta=d_beta, theta=d_theta[0],
                              theta_q=d_theta_q[0], q=trace.q)


def capture_assignments(params: ModelParams, batch: BowBatch, cfg: ObjectiveConfig,
                        augmented: bool = False) -> FrozenAssignments:
    """Snapshot the discrete state of the loss at the current parameters."""
    x = dense_rows(batch.rows, params.vocab_size)
    acts = encode_batch(params, x)
    q, theta_q = quantize_batch(acts.theta, params.embeddings)
    pairs = _pairs_from_q(q, has_aug=augmented)
    frozen = FrozenAssignments(q=q, theta_bar=acts.theta.copy(),
                               theta_q_bar=theta_q.copy(), pairs=pairs)
    if augmented:
        if batch.aug_rows is None:
            raise ValueError("augmented objective requires a paired batch")
        xa = dense_rows(batch.aug_rows, params.vocab_size)
        acts_a = encode_batch(params, xa)
        q_a, theta_q_a = quantize_batch(acts_a.theta, params.embeddings)
        frozen.q_aug = q_a
        frozen.theta_bar_aug = acts_a.theta.copy()
        frozen.theta_q_bar_aug = theta_q_a.copy()
    return frozen


def total_loss(params: ModelParams, batch: BowBatch, cfg: ObjectiveConfig,
               augmented: bool = False,
               frozen: Optional[FrozenAssignments] = None) -> tuple[LossBreakdown, dict[str, Array]]:
    """Full objective and exact gradients for every parameter tensor."""
    breakdown, grads, _ = _total_loss_impl(params, batch, cfg, augmented, frozen)
    return breakdown, grads


def _total_loss_impl(params: ModelParams, batch: BowBatch, cfg: ObjectiveConfig,
                     augmented: bool, frozen: Optional[FrozenAssignments]):
    n_rows = len(batch.rows)
    if n_rows == 0:
        raise ValueError("empty batch")
    x = dense_rows(batch.rows, params.vocab_size)
    acts = encode_batch(params, x)

    acts_a: Optional[EncoderActivations] = None
    if augmented:
        if batch.aug_rows is None:
            raise ValueError("augmented objective requires a paired batch; "
                             "the corpus has no augmentation")
        xa = dense_rows(batch.aug_rows, params.vocab_size)
        acts_a = encode_batch(params, xa)

    if frozen is not None:
        q = frozen.q
        tb, tqb = frozen.theta_bar, frozen.theta_q_bar
    else:
        q, _ = quantize_batch(acts.theta, params.embeddings)
        tb = tqb = None
    recon_vec, cb_vec, cm_vec, d_beta, d_theta, d_theta_q = _tm_core(
        x, acts.theta, q, params.embeddings, params.beta,
        cfg.lambda_commit, cfg.vq_norm, tb, tqb)

    d_e = np.zeros_like(params.embeddings)
    np.add.at(d_e, q, d_theta_q / n_rows)

    recon_sum = recon_vec.sum()
    cb_sum = cb_vec.sum()
    cm_sum = cm_vec.sum()

    if augmented:
        if frozen is not None:
            q_a = frozen.q_aug
            tba, tqba = frozen.theta_bar_aug, frozen.theta_q_bar_aug
        else:
            q_a, _ = quantize_batch(acts_a.theta, params.embeddings)
            tba = tqba = None
        recon_vec_a, cb_vec_a, cm_vec_a, d_beta_a, d_theta_a, d_theta_q_a = _tm_core(
            acts_a.x, acts_a.theta, q_a, params.embeddings, params.beta,
            cfg.lambda_commit, cfg.vq_norm, tba, tqba)
        np.add.at(d_e, q_a, d_theta_q_a / n_rows)
        recon_sum += recon_vec_a.sum()
        cb_sum += cb_vec_a.sum()
        cm_sum += cm_vec_a.sum()
        d_beta = d_beta + d_beta_a

    recon = float(recon_sum) / n_rows
    codebook = float(cb_sum) / n_rows
    commit = float(cm_sum) / n_rows

    lam_tsc = cfg.tsc.lambda_tsc
    tsc_val = 0.0
    d_h_tsc: Optional[Array] = None
    if lam_tsc != 0.0:
        if frozen is not None:
            pairs = frozen.pairs
        else:
            pairs = _pairs_from_q(q, has_aug=augmented)
        h_all = np.vstack([acts.h, acts_a.h]) if augmented else acts.h
        tsc_val, d_h_tsc = _tsc_core(h_all, pairs, cfg.tsc, use_aug=augmented)

    d_h = softmax_vjp(acts.theta, d_theta / n_rows)
    if d_h_tsc is not None:
        d_h = d_h + lam_tsc * d_h_tsc[:n_rows]
    grads = encoder_backward(params, acts, d_h)
    if augmented:
        d_h_a = softmax_vjp(acts_a.theta, d_theta_a / n_rows)
        if d_h_tsc is not None:
            d_h_a = d_h_a + lam_tsc * d_h_tsc[n_rows:]
        grads_a = encoder_backward(params, acts_a, d_h_a)
        for name in grads:
            grads[name] = grads[name] + grads_a[name]
    grads["Beta"] = d_beta / n_rows
    grads["E"] = d_e

    breakdown = LossBreakdown(
        recon=recon, codebook=codebook, commit=commit, tsc=tsc_val,
        total=recon + codebook + commit + lam_tsc * tsc_val,
    )
    return breakdown, grads, q
