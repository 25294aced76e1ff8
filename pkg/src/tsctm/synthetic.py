"""Synthetic benchmark corpus with known topic structure.

Documents are short token lists drawn from one of `n_topics` disjoint
vocabulary blocks, so the generating topic of every document is known and
recovery can be scored exactly. The generator goes through the regular
preprocessing pipeline, which keeps the whole stack honest.
"""
from __future__ import annotations

import math

from .corpus import Corpus, attach_augmentation, attach_labels, preprocess
from .numerics import make_rng


def topic_word(topic: int, j: int) -> str:
    return f"t{topic}w{j}"


def make_lines(n_docs: int = 2000, n_topics: int = 5, words_per_topic: int = 40,
               min_len: int = 5, max_len: int = 10, seed: int = 7) -> tuple[list[str], list[int]]:
    """Raw text lines plus the generating topic of each line."""
    rng = make_rng(seed)
    lines = []
    topics = []
    for _ in range(n_docs):
        topic = int(rng.integers(0, n_topics))
        length = int(rng.integers(min_len, max_len + 1))
        words = [topic_word(topic, int(j)) for j in rng.integers(0, words_per_topic, size=length)]
        lines.append(" ".join(words))
        topics.append(topic)
    return lines, topics


def swap_augment(lines: list[str], topics: list[int], words_per_topic: int = 40,
                 rate: float = 0.3, seed: int = 8) -> list[str]:
    """Augmented view of each line: ceil(rate * len) tokens replaced by
    uniform draws from the same topic's vocabulary block."""
    rng = make_rng(seed)
    out = []
    for line, topic in zip(lines, topics):
        tokens = line.split()
        n_swap = math.ceil(rate * len(tokens))
        positions = rng.choice(len(tokens), size=min(n_swap, len(tokens)), replace=False)
        for pos in positions:
            tokens[int(pos)] = topic_word(topic, int(rng.integers(0, words_per_topic)))
        out.append(" ".join(tokens))
    return out


def make_topic_corpus(n_docs: int = 2000, n_topics: int = 5, words_per_topic: int = 40,
                      seed: int = 7, augment: bool = True, aug_rate: float = 0.3,
                      aug_seed: int = 8) -> Corpus:
    """Labeled synthetic corpus, optionally with a within-topic swap
    augmentation attached."""
    lines, topics = make_lines(n_docs=n_docs, n_topics=n_topics,
                               words_per_topic=words_per_topic, seed=seed)
    corpus = preprocess(lines, min_freq=1, min_len=2)
    corpus = attach_labels(corpus, [topics[d.raw_line_no] for d in corpus.docs])
    if augment:
        aug = swap_augment(lines, topics, words_per_topic=words_per_topic,
                           rate=aug_rate, seed=aug_seed)
        corpus = attach_augmentation(corpus, aug)
    return corpus


def topic_blocks(corpus: Corpus, n_topics: int) -> list[set[int]]:
    """Vocabulary ids of each generating topic's block."""
    blocks: list[set[int]] = [set() for _ in range(n_topics)]
    for word, idx in corpus.vocab.index.items():
        topic = int(word[1:word.index("w")])
        blocks[topic].add(idx)
    return blocks
