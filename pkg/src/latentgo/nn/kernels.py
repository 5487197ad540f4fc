"""Dense float64 kernels with hand-written exact backward passes.

There is no general autodiff here: every composite model assembles its own
backward from these pieces, and finite differences are the ground truth
(see gradcheck).  All shapes broadcast over leading batch dimensions.
"""

from __future__ import annotations

import math

import numpy as np


class ShapeMismatch(ValueError):
    pass


def softmax(x: np.ndarray, axis: int = -1) -> np.ndarray:
    shifted = x - x.max(axis=axis, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=axis, keepdims=True)


# -- linear -------------------------------------------------------------------


def linear_forward(x: np.ndarray, w: np.ndarray, b: np.ndarray) -> np.ndarray:
    if x.shape[-1] != w.shape[0]:
        raise ShapeMismatch(f"linear: {x.shape} @ {w.shape}")
    return x @ w + b


def linear_backward(x: np.ndarray, w: np.ndarray, dout: np.ndarray):
    dx = dout @ w.T
    x2 = x.reshape(-1, x.shape[-1])
    d2 = dout.reshape(-1, dout.shape[-1])
    dw = x2.T @ d2
    db = d2.sum(axis=0)
    return dx, dw, db


# -- activations ----------------------------------------------------------------


def tanh_forward(x: np.ndarray) -> np.ndarray:
    return np.tanh(x)


def tanh_backward(y: np.ndarray, dout: np.ndarray) -> np.ndarray:
    return dout * (1.0 - y * y)


_GELU_C = math.sqrt(2.0 / math.pi)


def gelu_forward(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    inner = _GELU_C * (x + 0.044715 * x**3)
    t = np.tanh(inner)
    return 0.5 * x * (1.0 + t), t


def gelu_backward(x: np.ndarray, t: np.ndarray, dout: np.ndarray) -> np.ndarray:
    dinner = _GELU_C * (1.0 + 3 * 0.044715 * x * x)
    return dout * (0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * dinner)


# -- layer norm -----------------------------------------------------------------


def layernorm_forward(x: np.ndarray, gain: np.ndarray, bias: np.ndarray, eps: float = 1e-5):
    mu = x.mean(axis=-1, keepdims=True)
    xc = x - mu
    var = (xc * xc).mean(axis=-1, keepdims=True)
    inv = 1.0 / np.sqrt(var + eps)
    xhat = xc * inv
    return xhat * gain + bias, (xhat, inv)


def layernorm_backward(cache, gain: np.ndarray, dout: np.ndarray):
    xhat, inv = cache
    n = xhat.shape[-1]
    dxhat = dout * gain
    dgain = (dout * xhat).reshape(-1, n).sum(axis=0)
    dbias = dout.reshape(-1, n).sum(axis=0)
    mean_d = dxhat.mean(axis=-1, keepdims=True)
    mean_dx = (dxhat * xhat).mean(axis=-1, keepdims=True)
    dx = inv * (dxhat - mean_d - xhat * mean_dx)
    return dx, dgain, dbias


# -- scaled dot-product attention ----------------------------------------------


def attention_forward(
    q: np.ndarray, k: np.ndarray, v: np.ndarray, causal: bool = False
):
    """softmax(q k^T / sqrt(d)) v over the trailing two axes.

    ``causal`` requires matching query/key lengths and blocks j > i.
    Returns (out, cache) for the exact backward.
    """
    if q.shape[-1] != k.shape[-1] or k.shape[-2] != v.shape[-2]:
        raise ShapeMismatch(f"attention: q{q.shape} k{k.shape} v{v.shape}")
    scale = 1.0 / math.sqrt(q.shape[-1])
    scores = (q @ np.swapaxes(k, -1, -2)) * scale
    if causal:
        tq, tk = q.shape[-2], k.shape[-2]
        if tq != tk:
            raise ShapeMismatch("causal attention needs equal query/key lengths")
        mask = np.triu(np.ones((tq, tk), dtype=bool), k=1)
        scores = np.where(mask, -np.inf, scores)
    attn = softmax(scores)
    out = attn @ v
    return out, (q, k, v, attn, scale)


def attention_backward(cache, dout: np.ndarray):
    q, k, v, attn, scale = cache
    dv = np.swapaxes(attn, -1, -2) @ dout
    dattn = dout @ np.swapaxes(v, -1, -2)
    # softmax jacobian; masked entries have attn == 0 and thus zero gradient
    dscores = attn * (dattn - (dattn * attn).sum(axis=-1, keepdims=True))
    dq = (dscores @ k) * scale
    dk = (np.swapaxes(dscores, -1, -2) @ q) * scale
    return dq, dk, dv


# -- losses -----------------------------------------------------------------


def cross_entropy(logits: np.ndarray, targets: np.ndarray, mask: np.ndarray):
    """Mean masked next-token loss.  Returns (loss, dlogits).

    logits: (n, V); targets: (n,) int ids; mask: (n,) bool.
    """
    n, vocab = logits.shape
    if targets.shape != (n,) or mask.shape != (n,):
        raise ShapeMismatch("cross_entropy: misaligned targets or mask")
    if targets.min(initial=0) < 0 or targets.max(initial=0) >= vocab:
        raise ValueError("target id outside vocabulary")
    count = int(mask.sum())
    if count == 0:
        raise ValueError("cross_entropy: empty mask")
    shifted = logits - logits.max(axis=1, keepdims=True)
    lse = np.log(np.exp(shifted).sum(axis=1))
    picked = shifted[np.arange(n), targets]
    losses = lse - picked
    loss = float(losses[mask].mean())

    probs = softmax(logits)
    probs[np.arange(n), targets] -= 1.0
    probs[~mask] = 0.0
    dlogits = probs / count
    return loss, dlogits


def mse(pred: np.ndarray, target: np.ndarray):
    if pred.shape != target.shape:
        raise ShapeMismatch(f"mse: {pred.shape} vs {target.shape}")
    diff = pred - target
    loss = float((diff * diff).mean())
    dpred = 2.0 * diff / diff.size
    return loss, dpred
