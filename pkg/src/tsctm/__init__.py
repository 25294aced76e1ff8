"""Quantized contrastive topic model for short texts.

The package trains a bag-of-words encoder whose topic distributions are
snapped onto a learned codebook; documents sharing a code are pulled
together and documents on different codes pushed apart, optionally with a
paired augmentation of each document as an extra positive.
"""
from .corpus import (
    BowBatch,
    Corpus,
    CorpusError,
    Document,
    Vocabulary,
    attach_augmentation,
    attach_labels,
    load_corpus,
    preprocess,
    save_corpus,
    to_bow,
    tokenize,
)
from .evaluation import (
    EvalReport,
    TopicSet,
    cluster_assignments,
    nmi,
    npmi_coherence,
    pair_cosine,
    purity,
    top_words,
    topic_uniqueness,
)
from .model import (
    CheckpointError,
    ModelParams,
    encode,
    forward,
    init_params,
    load_checkpoint,
    quantize,
    save_checkpoint,
)
from .numerics import AdamState, adam_step, make_rng, softmax
from .objectives import (
    FrozenAssignments,
    LossBreakdown,
    ObjectiveConfig,
    PairSets,
    TscConfig,
    build_pairs,
    capture_assignments,
    tm_loss,
    total_loss,
    tsc_da_loss,
    tsc_loss,
)
from .trainer import TrainConfig, TrainLog, TrainingDiverged, infer_theta, train

__version__ = "0.1.0"

__all__ = [
    "AdamState",
    "BowBatch",
    "CheckpointError",
    "Corpus",
    "CorpusError",
    "Document",
    "EvalReport",
    "FrozenAssignments",
    "LossBreakdown",
    "ModelParams",
    "ObjectiveConfig",
    "PairSets",
    "TopicSet",
    "TrainConfig",
    "TrainLog",
    "TrainingDiverged",
    "TscConfig",
    "Vocabulary",
    "adam_step",
    "attach_augmentation",
    "attach_labels",
    "build_pairs",
    "capture_assignments",
    "cluster_assignments",
    "encode",
    "forward",
    "infer_theta",
    "init_params",
    "load_checkpoint",
    "load_corpus",
    "make_rng",
    "nmi",
    "npmi_coherence",
    "pair_cosine",
    "preprocess",
    "purity",
    "quantize",
    "save_checkpoint",
    "save_corpus",
    "softmax",
    "tm_loss",
    "to_bow",
    "tokenize",
    "top_words",
    "topic_uniqueness",
    "total_loss",
    "train",
    "tsc_da_loss",
    "tsc_loss",
]
