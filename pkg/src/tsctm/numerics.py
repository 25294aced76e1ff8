"""Float64 numeric kernels shared by the whole package.

Everything here is deterministic: the only randomness enters through
`make_rng`, and every public function is a pure mapping from inputs to
outputs. Arrays are numpy float64 throughout; no other dtype is used
anywhere in the model path.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Union

import numpy as np

Array = np.ndarray
Params = Dict[str, Array]


def make_rng(seed: int) -> np.random.Generator:
    """Seeded PCG64 generator. All sampling in the package flows from these."""
    return np.random.Generator(np.random.PCG64(seed))


def softmax(v: Array, axis: int = -1) -> Array:
    """Max-shifted softmax along `axis`.

    The shift makes exp() safe for arbitrarily large logits without
    changing the result: softmax(v) == softmax(v - max(v)).
    """
    v = np.asarray(v, dtype=np.float64)
    shifted = v - np.max(v, axis=axis, keepdims=True)
    e = np.exp(shifted)
    return e / np.sum(e, axis=axis, keepdims=True)


def log_softmax(v: Array, axis: int = -1) -> Array:
    """log(softmax(v)) without forming the softmax first."""
    v = np.asarray(v, dtype=np.float64)
    shifted = v - np.max(v, axis=axis, keepdims=True)
    return shifted - np.log(np.sum(np.exp(shifted), axis=axis, keepdims=True))


def softmax_vjp(theta: Array, d_theta: Array) -> Array:
    """Backprop through softmax: given theta = softmax(h) and dL/dtheta,
    return dL/dh = theta * (dL/dtheta - <theta, dL/dtheta>)."""
    dot = np.sum(theta * d_theta, axis=-1, keepdims=True)
    return theta * (d_theta - dot)


def softplus(v: Array) -> Array:
    """log(1 + e^x), computed as max(x, 0) + log1p(e^-|x|) so neither
    branch can overflow."""
    v = np.asarray(v, dtype=np.float64)
    return np.maximum(v, 0.0) + np.log1p(np.exp(-np.abs(v)))


def sigmoid(v: Array) -> Array:
    """Logistic function; the derivative of softplus."""
    v = np.asarray(v, dtype=np.float64)
    out = np.empty_like(v)
    pos = v >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-v[pos]))
    ev = np.exp(v[~pos])
    out[~pos] = ev / (1.0 + ev)
    return out


@dataclass
class AdamState:
    """First/second moment estimates plus step counter for Adam."""

    lr: float = 0.002
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    t: int = 0
    m: Params = field(default_factory=dict)
    v: Params = field(default_factory=dict)


def adam_step(params: Params, grads: Params, state: AdamState) -> tuple[Params, AdamState]:
    """One bias-corrected Adam update.

    Pure: returns fresh parameter arrays and a fresh state, leaving the
    inputs untouched, so identical (params, grads, state) always produce
    identical outputs.
    """
    t = state.t + 1
    new_params: Params = {}
    new_m: Params = {}
    new_v: Params = {}
    for name, p in params.items():
        g = grads[name]
        if g.shape != p.shape:
            raise ValueError(
                f"gradient shape {g.shape} does not match parameter shape {p.shape} for {name!r}"
            )
        m_prev = state.m.get(name)
        v_prev = state.v.get(name)
        if m_prev is None:
            m_prev = np.zeros_like(p)
            v_prev = np.zeros_like(p)
        m = state.beta1 * m_prev + (1.0 - state.beta1) * g
        v = state.beta2 * v_prev + (1.0 - state.beta2) * (g * g)
        m_hat = m / (1.0 - state.beta1 ** t)
        v_hat = v / (1.0 - state.beta2 ** t)
        new_params[name] = p - state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
        new_m[name] = m
        new_v[name] = v
    new_state = AdamState(
        lr=state.lr, beta1=state.beta1, beta2=state.beta2, eps=state.eps,
        t=t, m=new_m, v=new_v,
    )
    return new_params, new_state


FdParams = Union[Array, Params]


def fd_gradient(loss_fn: Callable[[FdParams], float], params: FdParams, h: float = 1e-6) -> FdParams:
    """Central-difference gradient of a scalar function, one coordinate at a time.

    `params` may be a single array or a dict of named arrays; the result
    mirrors the structure. `loss_fn` must be pure: it is re-evaluated
    2 * n_coordinates times on perturbed copies.
    """
    if isinstance(params, dict):
        work = {k: np.array(v, dtype=np.float64) for k, v in params.items()}
        out: Params = {}
        for name in params:
            out[name] = _fd_one(lambda: float(loss_fn(work)), work[name], h)
        return out
    work_arr = np.array(params, dtype=np.float64)
    return _fd_one(lambda: float(loss_fn(work_arr)), work_arr, h)


def _fd_one(evaluate: Callable[[], float], arr: Array, h: float) -> Array:
    grad = np.zeros_like(arr)
    flat = arr.reshape(-1)
    gflat = grad.reshape(-1)
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + h
        up = evaluate()
        flat[i] = orig - h
        down = evaluate()
        flat[i] = orig
        gflat[i] = (up - down) / (2.0 * h)
    return grad
