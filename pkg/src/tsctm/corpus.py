"""Corpus handling: tokenization, filtering, augmentation pairing, bag-of-words.

The preprocessing pipeline is fixed and order-sensitive:

1. tokenize each line on non-alphanumeric boundaries and lowercase,
2. drop documents shorter than `min_len` tokens,
3. drop words whose document frequency is below `min_freq`,
4. re-drop documents that fell below `min_len` in step 3.

Vocabulary ids are assigned in first-occurrence order over the surviving
documents, so preprocessing is deterministic given the input lines.
"""
from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, replace
from typing import Optional, Sequence

CORPUS_FORMAT = "tsctm-corpus"
CORPUS_VERSION = 1

# Alphanumeric runs; underscore and every control or punctuation character
# act as boundaries. \w minus underscore keeps the rule unicode-aware.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


class CorpusError(ValueError):
    pass


def tokenize(text: str) -> list[str]:
    """Lowercased alphanumeric runs of `text`, in order."""
    return [m.group(0).lower() for m in _TOKEN_RE.finditer(text)]


@dataclass
class Vocabulary:
    words: list[str]
    index: dict[str, int]
    doc_freq: dict[str, int]

    @classmethod
    def from_words(cls, words: Sequence[str], doc_freq: dict[str, int]) -> "Vocabulary":
        return cls(list(words), {w: i for i, w in enumerate(words)},
                   {w: int(doc_freq[w]) for w in words})

    def __len__(self) -> int:
        return len(self.words)


@dataclass
class Document:
    tokens: list[int]
    raw_line_no: int


@dataclass
class Corpus:
    vocab: Vocabulary
    docs: list[Document]
    n_raw_lines: int
    labels: Optional[list[int]] = None
    aug_docs: Optional[list[Document]] = None

    def __len__(self) -> int:
        return len(self.docs)


@dataclass
class BowBatch:
    """Sparse count rows: one list of (word_id, count) pairs per document."""

    rows: list[list[tuple[int, int]]]
    aug_rows: Optional[list[list[tuple[int, int]]]] = None

    def __len__(self) -> int:
        return len(self.rows)


def preprocess(raw_lines: Sequence[str], min_freq: int = 5, min_len: int = 2) -> Corpus:
    """Run the filtering pipeline over raw text lines.

    Raises CorpusError("corpus empty after filtering") when nothing survives.
    """
    if min_freq < 1:
        raise ValueError("min_freq must be >= 1")
    if min_len < 2:
        raise ValueError("min_len must be >= 2")
    if not raw_lines:
        raise CorpusError("corpus empty after filtering")

    kept: list[tuple[int, list[str]]] = []
    for line_no, line in enumerate(raw_lines):
        toks = tokenize(line)
        if len(toks) >= min_len:
            kept.append((line_no, toks))

    df: Counter[str] = Counter()
    for _, toks in kept:
        df.update(set(toks))

    # First-occurrence order over surviving docs defines the id space.
    words: list[str] = []
    seen: set[str] = set()
    for _, toks in kept:
        for w in toks:
            if w not in seen and df[w] >= min_freq:
                seen.add(w)
                words.append(w)
    vocab = Vocabulary.from_words(words, df)

    docs: list[Document] = []
    for line_no, toks in kept:
        ids = [vocab.index[w] for w in toks if w in vocab.index]
        if len(ids) >= min_len:
            docs.append(Document(ids, line_no))
    if not docs:
        raise CorpusError("corpus empty after filtering")
    return Corpus(vocab=vocab, docs=docs, n_raw_lines=len(raw_lines))


def attach_labels(corpus: Corpus, labels: Sequence[int]) -> Corpus:
    """Attach one integer label per document.

    Accepts either one label per original raw line (filtered down by each
    document's raw_line_no) or one label per surviving document.
    """
    labels = [int(x) for x in labels]
    if len(labels) == len(corpus.docs):
        picked = labels
    elif len(labels) == corpus.n_raw_lines:
        picked = [labels[d.raw_line_no] for d in corpus.docs]
    else:
        raise CorpusError(
            f"label count {len(labels)} matches neither raw line count "
            f"{corpus.n_raw_lines} nor surviving document count {len(corpus.docs)}"
        )
    return replace(corpus, labels=picked)


def attach_augmentation(corpus: Corpus, aug_lines: Sequence[str]) -> Corpus:
    """Pair each surviving document with its augmented counterpart.

    `aug_lines` must hold one line per original raw line, in the original
    order; lines whose source document was dropped are ignored. Augmented
    text is tokenized against the frozen vocabulary (out-of-vocabulary
    words are dropped), and an augmented document that comes out empty is
    replaced by its original.
    """
    if len(aug_lines) != corpus.n_raw_lines:
        raise CorpusError(
            f"augmentation line count {len(aug_lines)} does not match "
            f"original raw line count {corpus.n_raw_lines}"
        )
    aug_docs: list[Document] = []
    for doc in corpus.docs:
        toks = tokenize(aug_lines[doc.raw_line_no])
        ids = [corpus.vocab.index[w] for w in toks if w in corpus.vocab.index]
        if not ids:
            ids = list(doc.tokens)
        aug_docs.append(Document(ids, doc.raw_line_no))
    return replace(corpus, aug_docs=aug_docs)


def to_bow(corpus: Corpus, indices: Sequence[int]) -> BowBatch:
    """Sparse count vectors for the documents at `indices`, with augmented
    rows alongside when the corpus carries an augmentation pairing."""
    rows = [_count_row(corpus.docs, i, len(corpus)) for i in indices]
    aug_rows = None
    if corpus.aug_docs is not None:
        aug_rows = [_count_row(corpus.aug_docs, i, len(corpus)) for i in indices]
    return BowBatch(rows=rows, aug_rows=aug_rows)


def _count_row(docs: list[Document], i: int, n: int) -> list[tuple[int, int]]:
    if not 0 <= i < n:
        raise IndexError(f"document index {i} out of range for corpus of size {n}")
    counts = Counter(docs[i].tokens)
    return sorted((int(w), int(c)) for w, c in counts.items())


def save_corpus(corpus: Corpus, path: str) -> None:
    """Write the processed corpus as versioned JSON."""
    payload = {
        "format": CORPUS_FORMAT,
        "version": CORPUS_VERSION,
        "n_raw_lines": corpus.n_raw_lines,
        "words": corpus.vocab.words,
        "doc_freq": [corpus.vocab.doc_freq[w] for w in corpus.vocab.words],
        "docs": [d.tokens for d in corpus.docs],
        "raw_line_nos": [d.raw_line_no for d in corpus.docs],
        "labels": corpus.labels,
        "aug_docs": [d.tokens for d in corpus.aug_docs] if corpus.aug_docs is not None else None,
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, separators=(",", ":"))
        f.write("\n")


def load_corpus(path: str) -> Corpus:
    with open(path, "r", encoding="utf-8") as f:
        payload = json.load(f)
    if payload.get("format") != CORPUS_FORMAT:
        raise CorpusError(f"not a corpus file: {path}")
    if payload.get("version") != CORPUS_VERSION:
        raise CorpusError(f"unsupported corpus version {payload.get('version')}")
    words = payload["words"]
    doc_freq = dict(zip(words, payload["doc_freq"]))
    vocab = Vocabulary.from_words(words, doc_freq)
    line_nos = payload["raw_line_nos"]
    docs = [Document(list(t), int(n)) for t, n in zip(payload["docs"], line_nos)]
    aug_docs = None
    if payload["aug_docs"] is not None:
        aug_docs = [Document(list(t), int(n)) for t, n in zip(payload["aug_docs"], line_nos)]
    return Corpus(
        vocab=vocab,
        docs=docs,
        n_raw_lines=int(payload["n_raw_lines"]),
        labels=list(payload["labels"]) if payload["labels"] is not None else None,
        aug_docs=aug_docs,
    )


def read_lines(path: str) -> list[str]:
    """Read a UTF-8 text file as a list of lines; undecodable bytes are
    replaced and later dropped by tokenization."""
    with open(path, "r", encoding="utf-8", errors="replace") as f:
        return f.read().splitlines()


def read_label_lines(path: str) -> list[int]:
    out = []
    for i, line in enumerate(read_lines(path)):
        s = line.strip()
        if not s:
            continue
        try:
            out.append(int(s))
        except ValueError:
            raise CorpusError(f"label file {path}: line {i + 1} is not an integer: {s!r}")
    return out
