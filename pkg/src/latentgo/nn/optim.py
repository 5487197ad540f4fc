"""AdamW with decoupled weight decay and a warmup-then-cosine schedule."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

Params = dict[str, np.ndarray]


@dataclass(frozen=True)
class AdamConfig:
    base_lr: float
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    weight_decay: float = 0.0
    warmup_iters: int = 0
    max_iters: int = 1

    def __post_init__(self):
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0):
            raise ValueError("betas must lie in [0, 1)")
        if self.warmup_iters > self.max_iters:
            raise ValueError("warmup must not exceed max iterations")


# Published training configurations for the two model families; desk-scale
# runs override base_lr and the iteration horizon.
LDM_ADAM_DEFAULTS = AdamConfig(
    base_lr=5.4e-5, beta1=0.5, beta2=0.9, weight_decay=0.01,
    warmup_iters=30_000, max_iters=100_000,
)
AR_ADAM_DEFAULTS = AdamConfig(
    base_lr=3.0e-5, beta1=0.9, beta2=0.98, weight_decay=0.0,
    warmup_iters=30_000, max_iters=1_000_000,
)


def learning_rate(config: AdamConfig, step: int) -> float:
    """Linear warmup to base_lr at step == warmup_iters, then cosine to zero."""
    if step < 1:
        raise ValueError("steps are 1-based")
    if config.warmup_iters > 0 and step <= config.warmup_iters:
        return config.base_lr * step / config.warmup_iters
    if config.max_iters == config.warmup_iters:
        return config.base_lr
    t = min(step, config.max_iters) - config.warmup_iters
    span = config.max_iters - config.warmup_iters
    return config.base_lr * 0.5 * (1.0 + math.cos(math.pi * t / span))


def init_moments(params: Params) -> dict[str, Params]:
    return {
        "m": {k: np.zeros_like(v) for k, v in params.items()},
        "v": {k: np.zeros_like(v) for k, v in params.items()},
    }


def adamw_step(
    params: Params,
    grads: Params,
    moments: dict[str, Params],
    step_index: int,
    config: AdamConfig,
) -> tuple[Params, dict[str, Params]]:
    """One bias-corrected update, in place:
    theta <- theta - lr_t * (m_hat / (sqrt(v_hat) + eps) + wd * theta).
    """
    lr = learning_rate(config, step_index)
    b1, b2 = config.beta1, config.beta2
    c1 = 1.0 - b1**step_index
    c2 = 1.0 - b2**step_index
    for name, g in grads.items():
        if not np.all(np.isfinite(g)):
            raise FloatingPointError(f"non-finite gradient for {name!r}")
        p = params[name]
        if p.shape != g.shape:
            raise ValueError(f"gradient shape mismatch for {name!r}")
        m = moments["m"][name]
        v = moments["v"][name]
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * (g * g)
        update = (m / c1) / (np.sqrt(v / c2) + config.eps)
        if config.weight_decay:
            update = update + config.weight_decay * p
        p -= lr * update
    return params, moments
