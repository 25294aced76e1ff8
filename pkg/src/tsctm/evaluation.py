"""Topic and clustering metrics plus report formatting.

Conventions used throughout:

* topic uniqueness: TU = (1/K) sum_k (1/T) sum_{w in top_T(k)} 1/cnt(w),
  where cnt(w) counts how many topics list w in their top T;
* coherence: mean pairwise NPMI of each topic's top words, probabilities
  from boolean sliding-window counts over a reference corpus; a pair that
  never co-occurs scores -1, topics with fewer than two words are skipped;
* purity and NMI (arithmetic-mean normalization, natural logs) for
  clusterings obtained by argmax over theta.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .corpus import Corpus, Vocabulary
from .numerics import Array

_NPMI_EPS = 1e-12


@dataclass
class TopicSet:
    """Top word ids per topic with their Beta weights; shape (K, T)."""

    word_ids: Array
    weights: Array

    @property
    def n_topics(self) -> int:
        return self.word_ids.shape[0]

    @property
    def top_t(self) -> int:
        return self.word_ids.shape[1]


@dataclass
class EvalReport:
    tu: float
    npmi: Optional[float] = None
    purity: Optional[float] = None
    nmi: Optional[float] = None
    pair_cos: Optional[float] = None


def top_words(beta: Array, top_t: int) -> TopicSet:
    """Top `top_t` word ids per topic by descending weight; ties break
    toward the lower word id."""
    vocab_size, n_topics = beta.shape
    if not 1 <= top_t <= vocab_size:
        raise ValueError(f"top_t must be in [1, {vocab_size}], got {top_t}")
    ids = np.empty((n_topics, top_t), dtype=np.int64)
    weights = np.empty((n_topics, top_t), dtype=np.float64)
    for k in range(n_topics):
        order = np.argsort(-beta[:, k], kind="stable")[:top_t]
        ids[k] = order
        weights[k] = beta[order, k]
    return TopicSet(word_ids=ids, weights=weights)


def topic_uniqueness(topics: TopicSet) -> float:
    cnt = Counter(int(w) for row in topics.word_ids for w in row)
    per_topic = [
        float(np.mean([1.0 / cnt[int(w)] for w in row]))
        for row in topics.word_ids
    ]
    return float(np.mean(per_topic))


def npmi_coherence(topics: TopicSet, ref_corpus: Corpus, window: int = 0,
                   topic_vocab: Optional[Vocabulary] = None) -> float:
    """Mean over topics of mean pairwise NPMI of the topic's top words.

    `window` = 0 treats each document as one window; otherwise windows of
    that length slide by one token (documents shorter than the window form
    a single window). When the topics were built against a different
    vocabulary, pass it as `topic_vocab` so ids are re-mapped by word
    string; words absent from the reference count as never occurring.
    """
    if window < 0:
        raise ValueError("window must be >= 0")
    windows = _windows(ref_corpus, window)
    n_windows = len(windows)

    def to_ref_id(topic_word: int) -> int:
        if topic_vocab is None:
            if not 0 <= topic_word < len(ref_corpus.vocab):
                raise ValueError(f"topic word id {topic_word} outside reference vocabulary")
            return topic_word
        return ref_corpus.vocab.index.get(topic_vocab.words[topic_word], -1)

    occur: dict[int, set[int]] = {}
    for w_idx, win in enumerate(windows):
        for word in win:
            occur.setdefault(word, set()).add(w_idx)

    topic_scores = []
    for row in topics.word_ids:
        ref_ids = [to_ref_id(int(w)) for w in row]
        if len(ref_ids) < 2:
            continue
        pair_scores = []
        for a_pos in range(len(ref_ids)):
            for b_pos in range(a_pos + 1, len(ref_ids)):
                a, b = ref_ids[a_pos], ref_ids[b_pos]
                wins_a = occur.get(a, set()) if a >= 0 else set()
                wins_b = occur.get(b, set()) if b >= 0 else set()
                joint = len(wins_a & wins_b)
                if joint == 0:
                    pair_scores.append(-1.0)
                    continue
                p_ab = joint / n_windows + _NPMI_EPS
                p_a = len(wins_a) / n_windows
                p_b = len(wins_b) / n_windows
                denom = -np.log(p_ab)
                if denom <= 0.0:
                    # the pair co-occurs in every window: association is undefined,
                    # pmi and its normalizer both vanish
                    pair_scores.append(0.0)
                    continue
                pmi = np.log(p_ab / (p_a * p_b))
                pair_scores.append(float(pmi / denom))
        if pair_scores:
            topic_scores.append(float(np.mean(pair_scores)))
    if not topic_scores:
        raise ValueError("no scorable topics")
    return float(np.mean(topic_scores))


def _windows(corpus: Corpus, window: int) -> list[set[int]]:
    wins: list[set[int]] = []
    for doc in corpus.docs:
        toks = doc.tokens
        if window == 0 or len(toks) <= window:
            wins.append(set(toks))
        else:
            for start in range(len(toks) - window + 1):
                wins.append(set(toks[start:start + window]))
    return wins


def cluster_assignments(theta: Array) -> Array:
    """Hard cluster per row: argmax over topics, ties to the lowest index."""
    theta = np.asarray(theta, dtype=np.float64)
    if theta.ndim != 2:
        raise ValueError("theta must be a 2-d array")
    return np.argmax(theta, axis=1)


def purity(assignments: Array, labels: Array) -> float:
    assignments = np.asarray(assignments)
    labels = np.asarray(labels)
    if assignments.shape != labels.shape or assignments.ndim != 1:
        raise ValueError("assignments and labels must be 1-d arrays of equal length")
    n = assignments.shape[0]
    if n == 0:
        raise ValueError("purity of an empty clustering is undefined")
    total = 0
    for cluster in np.unique(assignments):
        inside = labels[assignments == cluster]
        total += int(Counter(inside.tolist()).most_common(1)[0][1])
    return total / n


def nmi(assignments: Array, labels: Array) -> float:
    """Normalized mutual information, I / ((H_c + H_l) / 2), natural logs.

    Returns 0 when the partitions share no information and 1 when both
    entropies vanish (two trivial single-class partitions).
    """
    assignments = np.asarray(assignments)
    labels = np.asarray(labels)
    if assignments.shape != labels.shape or assignments.ndim != 1:
        raise ValueError("assignments and labels must be 1-d arrays of equal length")
    n = assignments.shape[0]
    if n == 0:
        raise ValueError("NMI of an empty clustering is undefined")
    joint = Counter(zip(assignments.tolist(), labels.tolist()))
    pc = Counter(assignments.tolist())
    pl = Counter(labels.tolist())
    info = 0.0
    for (c, l), count in joint.items():
        p = count / n
        info += p * np.log(p * n * n / (pc[c] * pl[l]))
    h_c = -sum((c / n) * np.log(c / n) for c in pc.values())
    h_l = -sum((c / n) * np.log(c / n) for c in pl.values())
    if h_c == 0.0 and h_l == 0.0:
        return 1.0
    info = max(info, 0.0)
    if info == 0.0:
        return 0.0
    return float(info / ((h_c + h_l) / 2.0))


def pair_cosine(theta_orig: Array, theta_aug: Array) -> float:
    """Mean cosine similarity between matched rows of the two matrices."""
    a = np.asarray(theta_orig, dtype=np.float64)
    b = np.asarray(theta_aug, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 2:
        raise ValueError("theta matrices must share the same 2-d shape")
    if a.shape[0] == 0:
        raise ValueError("pair cosine of empty matrices is undefined")
    na = np.linalg.norm(a, axis=1)
    nb = np.linalg.norm(b, axis=1)
    if np.any(na == 0.0) or np.any(nb == 0.0):
        raise ValueError("zero-norm row in pair cosine")
    return float(np.mean(np.sum(a * b, axis=1) / (na * nb)))


def format_report(report: EvalReport, n_topics: int, top_t: int) -> str:
    """Readable summary followed by a flat key=value block."""
    lines = [
        "evaluation report",
        f"  topics: {n_topics}, top words per topic: {top_t}",
        f"  topic uniqueness: {report.tu!r}",
    ]
    if report.npmi is not None:
        lines.append(f"  npmi coherence: {report.npmi!r}")
    if report.purity is not None:
        lines.append(f"  clustering purity: {report.purity!r}")
    if report.nmi is not None:
        lines.append(f"  normalized mutual information: {report.nmi!r}")
    if report.pair_cos is not None:
        lines.append(f"  original/augmented cosine: {report.pair_cos!r}")
    lines.append("")
    lines.append(f"tu={report.tu!r}")
    for key in ("npmi", "purity", "nmi", "pair_cos"):
        value = getattr(report, key)
        if value is not None:
            lines.append(f"{key}={value!r}")
    return "\n".join(lines) + "\n"


def export_topics(topics: TopicSet, vocab: Vocabulary) -> str:
    """One line per topic: topic_id<TAB>word word word ..."""
    lines = []
    for k in range(topics.n_topics):
        words = " ".join(vocab.words[int(w)] for w in topics.word_ids[k])
        lines.append(f"{k}\t{words}")
    return "\n".join(lines) + "\n"


def export_theta(theta: Array) -> str:
    """Header "N K" then one row of K decimal floats per document."""
    n, k = theta.shape
    lines = [f"{n} {k}"]
    for row in theta:
        lines.append(" ".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"
