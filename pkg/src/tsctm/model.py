"""Model parameters, encoder forward pass, vector quantization, checkpoints.

The encoder is an MLP over bag-of-words counts: by default two softplus
hidden layers of equal width followed by a linear output of size K, and
theta = softmax(h) lives on the K-simplex. theta is quantized against a
K x K codebook E (rows e_k, initialized to distinct one-hot vectors) by
nearest euclidean distance; the decoder reconstructs word logits as
Beta @ theta_st where theta_st carries the straight-through value
theta + sg(theta_q - theta).
"""
from __future__ import annotations

import os
import struct
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .corpus import BowBatch
from .numerics import Array, make_rng, softmax, sigmoid, softplus

CHECKPOINT_MAGIC = b"TSCTM\x01"
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_U64 = 0xFFFFFFFFFFFFFFFF


class CheckpointError(ValueError):
    pass


@dataclass
class ModelParams:
    """All trainable tensors.

    hidden layers are stored first-to-last; `w_out`/`b_out` is the linear
    output layer producing h in R^K. `embeddings` is the codebook E and
    `beta` the V x K topic-word matrix.
    """

    hidden_ws: list[Array]
    hidden_bs: list[Array]
    w_out: Array
    b_out: Array
    embeddings: Array
    beta: Array

    @property
    def vocab_size(self) -> int:
        return self.hidden_ws[0].shape[1]

    @property
    def n_topics(self) -> int:
        return self.w_out.shape[0]

    @property
    def hidden_width(self) -> int:
        return self.hidden_ws[0].shape[0]

    @property
    def n_hidden_layers(self) -> int:
        return len(self.hidden_ws)

    def as_dict(self) -> dict[str, Array]:
        """Named tensor view in a fixed order: W1,b1,...,Wn,bn,E,Beta, where
        the last W/b pair is the output layer."""
        out: dict[str, Array] = {}
        for i, (w, b) in enumerate(zip(self.hidden_ws, self.hidden_bs), start=1):
            out[f"W{i}"] = w
            out[f"b{i}"] = b
        n = len(self.hidden_ws) + 1
        out[f"W{n}"] = self.w_out
        out[f"b{n}"] = self.b_out
        out["E"] = self.embeddings
        out["Beta"] = self.beta
        return out

    @classmethod
    def from_dict(cls, d: dict[str, Array]) -> "ModelParams":
        n_layers = sum(1 for k in d if k.startswith("W")) - 1
        hidden_ws = [d[f"W{i}"] for i in range(1, n_layers + 1)]
        hidden_bs = [d[f"b{i}"] for i in range(1, n_layers + 1)]
        return cls(
            hidden_ws=hidden_ws,
            hidden_bs=hidden_bs,
            w_out=d[f"W{n_layers + 1}"],
            b_out=d[f"b{n_layers + 1}"],
            embeddings=d["E"],
            beta=d["Beta"],
        )


def init_params(vocab_size: int, n_topics: int, hidden: int,
                rng: np.random.Generator, n_hidden_layers: int = 2) -> ModelParams:
    """Glorot-style uniform init for weights, biases and Beta; the codebook
    starts as the identity (one one-hot row per topic)."""
    if vocab_size < 1:
        raise ValueError("vocab_size must be >= 1")
    if n_topics < 1:
        raise ValueError("n_topics must be >= 1")
    if hidden < 1:
        raise ValueError("hidden width must be >= 1")
    if n_hidden_layers < 1:
        raise ValueError("n_hidden_layers must be >= 1")

    def draw(fan_out: int, fan_in: int, shape: tuple[int, ...]) -> Array:
        bound = np.sqrt(6.0 / (fan_in + fan_out))
        return rng.uniform(-bound, bound, size=shape)

    hidden_ws: list[Array] = []
    hidden_bs: list[Array] = []
    prev = vocab_size
    for _ in range(n_hidden_layers):
        hidden_ws.append(draw(hidden, prev, (hidden, prev)))
        hidden_bs.append(draw(hidden, prev, (hidden,)))
        prev = hidden
    w_out = draw(n_topics, prev, (n_topics, prev))
    b_out = draw(n_topics, prev, (n_topics,))
    beta = draw(n_topics, vocab_size, (vocab_size, n_topics))
    embeddings = np.eye(n_topics, dtype=np.float64)
    return ModelParams(hidden_ws, hidden_bs, w_out, b_out, embeddings, beta)


@dataclass
class EncoderActivations:
    """Batched forward cache used by the backward pass."""

    x: Array              # (B, V)
    pre: list[Array]      # per hidden layer, (B, hidden)
    act: list[Array]      # softplus(pre)
    h: Array              # (B, K)
    theta: Array          # (B, K)


def encode_batch(params: ModelParams, x: Array) -> EncoderActivations:
    pre: list[Array] = []
    act: list[Array] = []
    cur = x
    for w, b in zip(params.hidden_ws, params.hidden_bs):
        z = cur @ w.T + b
        a = softplus(z)
        pre.append(z)
        act.append(a)
        cur = a
    h = cur @ params.w_out.T + params.b_out
    theta = softmax(h, axis=-1)
    return EncoderActivations(x=x, pre=pre, act=act, h=h, theta=theta)


def encoder_backward(params: ModelParams, acts: EncoderActivations, d_h: Array) -> dict[str, Array]:
    """Exact gradients of the encoder tensors given dL/dh for the batch."""
    grads: dict[str, Array] = {}
    n = params.n_hidden_layers
    top = acts.act[-1] if n > 0 else acts.x
    grads[f"W{n + 1}"] = d_h.T @ top
    grads[f"b{n + 1}"] = d_h.sum(axis=0)
    d_cur = d_h @ params.w_out
    for i in range(n - 1, -1, -1):
        d_pre = d_cur * sigmoid(acts.pre[i])
        below = acts.act[i - 1] if i > 0 else acts.x
        grads[f"W{i + 1}"] = d_pre.T @ below
        grads[f"b{i + 1}"] = d_pre.sum(axis=0)
        if i > 0:
            d_cur = d_pre @ params.hidden_ws[i]
    return grads


def encode(params: ModelParams, bow_row: Sequence[tuple[int, int]]) -> tuple[Array, Array, list[Array]]:
    """Encode one sparse count row; returns (h, theta, hidden activations)."""
    x = dense_rows([list(bow_row)], params.vocab_size)
    acts = encode_batch(params, x)
    return acts.h[0], acts.theta[0], [a[0] for a in acts.act]


def quantize(theta: Array, embeddings: Array) -> tuple[int, Array]:
    """Nearest codebook row by euclidean distance; ties take the lowest index."""
    theta = np.asarray(theta, dtype=np.float64)
    if theta.ndim != 1 or theta.shape[0] != embeddings.shape[1]:
        raise ValueError("theta shape does not match the codebook")
    if np.any(theta < -1e-9) or abs(float(theta.sum()) - 1.0) > 1e-6:
        raise ValueError("theta must lie on the probability simplex")
    d2 = np.sum((embeddings - theta[None, :]) ** 2, axis=1)
    q = int(np.argmin(d2))
    return q, embeddings[q].copy()


def quantize_batch(theta: Array, embeddings: Array) -> tuple[Array, Array]:
    diff = theta[:, None, :] - embeddings[None, :, :]
    d2 = np.sum(diff * diff, axis=2)
    q = np.argmin(d2, axis=1)
    return q, embeddings[q]


def dense_rows(rows: list[list[tuple[int, int]]], vocab_size: int) -> Array:
    x = np.zeros((len(rows), vocab_size), dtype=np.float64)
    for i, row in enumerate(rows):
        for word_id, count in row:
            if not 0 <= word_id < vocab_size:
                raise ValueError(f"word id {word_id} out of range for V={vocab_size}")
            if count <= 0:
                raise ValueError("bag-of-words counts must be positive")
            x[i, word_id] += count
    return x


@dataclass
class ForwardTrace:
    """Per-sample record of one forward pass."""

    pre_activations: list[Array]
    activations: list[Array]
    h: Array
    theta: Array
    q: int
    theta_q: Array
    recon_logits: Array
    is_augmented: bool


def forward(params: ModelParams, batch: BowBatch) -> list[ForwardTrace]:
    """Forward the batch; original traces come first, augmented traces (when
    the batch is paired) follow in the same order."""
    traces = _forward_rows(params, batch.rows, is_augmented=False)
    if batch.aug_rows is not None:
        traces.extend(_forward_rows(params, batch.aug_rows, is_augmented=True))
    return traces


def _forward_rows(params: ModelParams, rows: list[list[tuple[int, int]]],
                  is_augmented: bool) -> list[ForwardTrace]:
    x = dense_rows(rows, params.vocab_size)
    acts = encode_batch(params, x)
    q, theta_q = quantize_batch(acts.theta, params.embeddings)
    logits = theta_q @ params.beta.T
    out = []
    for i in range(len(rows)):
        out.append(ForwardTrace(
            pre_activations=[z[i] for z in acts.pre],
            activations=[a[i] for a in acts.act],
            h=acts.h[i],
            theta=acts.theta[i],
            q=int(q[i]),
            theta_q=theta_q[i].copy(),
            recon_logits=logits[i],
            is_augmented=is_augmented,
        ))
    return out


def fnv1a64(data: bytes) -> int:
    """64-bit FNV-1a over raw bytes."""
    h = _FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * _FNV_PRIME) & _U64
    return h


def save_checkpoint(params: ModelParams, path: str) -> None:
    """Binary checkpoint: magic, (V, K, hidden, flags) header as little-endian
    u64, tensors as row-major little-endian f64, then an FNV-1a checksum of
    header+tensors. flags carries the hidden-layer count. The write is
    atomic: a temp file in the same directory is renamed into place."""
    header = struct.pack(
        "<4Q", params.vocab_size, params.n_topics, params.hidden_width,
        params.n_hidden_layers,
    )
    chunks = [header]
    for name, tensor in params.as_dict().items():
        arr = np.ascontiguousarray(tensor, dtype=np.float64)
        chunks.append(arr.astype("<f8", copy=False).tobytes())
    payload = b"".join(chunks)
    blob = CHECKPOINT_MAGIC + payload + struct.pack("<Q", fnv1a64(payload))
    tmp = path + ".tmp"
    with open(tmp, "wb") as f:
        f.write(blob)
    os.replace(tmp, path)


def load_checkpoint(path: str) -> ModelParams:
    with open(path, "rb") as f:
        blob = f.read()
    if not blob.startswith(CHECKPOINT_MAGIC):
        raise CheckpointError(f"bad magic: {path} is not a model checkpoint")
    body = blob[len(CHECKPOINT_MAGIC):]
    if len(body) < 40:
        raise CheckpointError("checkpoint truncated")
    payload, trailer = body[:-8], body[-8:]
    (stored_sum,) = struct.unpack("<Q", trailer)
    if fnv1a64(payload) != stored_sum:
        raise CheckpointError("checkpoint checksum mismatch")
    v, k, hidden, flags = struct.unpack("<4Q", payload[:32])
    if not 1 <= flags <= 8:
        raise CheckpointError(f"unsupported layer count {flags}")
    shapes: list[tuple[str, tuple[int, ...]]] = []
    prev = v
    for i in range(1, flags + 1):
        shapes.append((f"W{i}", (hidden, prev)))
        shapes.append((f"b{i}", (hidden,)))
        prev = hidden
    shapes.append((f"W{flags + 1}", (k, prev)))
    shapes.append((f"b{flags + 1}", (k,)))
    shapes.append(("E", (k, k)))
    shapes.append(("Beta", (v, k)))

    offset = 32
    tensors: dict[str, Array] = {}
    for name, shape in shapes:
        n = int(np.prod(shape))
        end = offset + 8 * n
        if end > len(payload):
            raise CheckpointError("checkpoint truncated")
        tensors[name] = np.frombuffer(payload[offset:end], dtype="<f8").reshape(shape).astype(
            np.float64, copy=True)
        offset = end
    if offset != len(payload):
        raise CheckpointError("checkpoint has trailing bytes")
    return ModelParams.from_dict(tensors)
