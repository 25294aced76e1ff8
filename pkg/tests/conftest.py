"""Shared fixtures. Thread caps are set before numpy loads so every test
sees single-threaded BLAS, matching the reproducibility contract."""
import os

for var in ("OPENBLAS_NUM_THREADS", "OMP_NUM_THREADS", "MKL_NUM_THREADS"):
    os.environ.setdefault(var, "1")

import numpy as np
import pytest

from tsctm.synthetic import make_topic_corpus
from tsctm.trainer import TrainConfig, train, infer_theta


@pytest.fixture(scope="session")
def synth_corpus():
    """The benchmark corpus without augmentation."""
    return make_topic_corpus(seed=7, augment=False)


@pytest.fixture(scope="session")
def synth_corpus_aug():
    """The benchmark corpus with within-topic swap augmentation."""
    return make_topic_corpus(seed=7, augment=True)


@pytest.fixture(scope="session")
def recovery_run(synth_corpus):
    """Full default training run on the benchmark corpus, seed 42.

    Shared by the recovery, determinism, and round-trip tests; wall time is
    recorded because the recovery test budgets it.
    """
    import time
    cfg = TrainConfig(n_topics=5, seed=42)
    t0 = time.perf_counter()
    params, log = train(synth_corpus, cfg)
    wall = time.perf_counter() - t0
    theta = infer_theta(params, synth_corpus)
    return {"cfg": cfg, "params": params, "log": log, "theta": theta, "wall_s": wall}


@pytest.fixture
def tiny_corpus():
    """Six two-word documents over a four-word vocabulary."""
    from tsctm.corpus import preprocess
    lines = ["apple banana", "banana apple", "cherry date", "date cherry",
             "apple cherry", "banana date"]
    return preprocess(lines, min_freq=1, min_len=2)
