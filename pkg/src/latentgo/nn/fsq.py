"""Finite scalar quantization: bounded per-dimension rounding with a
straight-through backward.

Each latent dimension i with L_i levels is squashed by
``tanh(z + atanh(offset/half)) * half - offset`` where half = (L_i - 1) / 2
and offset is 0.5 for even L_i, then rounded to the integer lattice.  The
lattice digit is ``code + floor(L_i / 2)`` and the flat index combines digits
in mixed radix, first dimension fastest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np


@dataclass(frozen=True)
class FsqSpec:
    levels: tuple[int, ...]

    def __post_init__(self):
        if not self.levels or any(l < 2 for l in self.levels):
            raise ValueError("every FSQ level count must be at least 2")
        object.__setattr__(self, "levels", tuple(int(l) for l in self.levels))

    @property
    def dim(self) -> int:
        return len(self.levels)

    @property
    def codebook_size(self) -> int:
        return math.prod(self.levels)

    @cached_property
    def _arrays(self):
        levels = np.asarray(self.levels, dtype=np.float64)
        halves = (levels - 1.0) / 2.0
        offsets = np.where(np.asarray(self.levels) % 2 == 0, 0.5, 0.0)
        shifts = np.arctanh(offsets / halves)
        low = -(np.asarray(self.levels) // 2)
        return halves, offsets, shifts, low.astype(np.int64)


DEFAULT_LEVELS = (8, 8, 8, 5, 5, 5)  # codebook of exactly 64,000


def fsq_bound(z: np.ndarray, spec: FsqSpec) -> np.ndarray:
    halves, offsets, shifts, _ = spec._arrays
    return np.tanh(z + shifts) * halves - offsets


def code_to_index(code: np.ndarray, spec: FsqSpec) -> np.ndarray:
    """Mixed-radix flatten of lattice codes; first dimension is the fastest."""
    _, _, _, low = spec._arrays
    digits = code.astype(np.int64) - low
    if digits.min() < 0 or (digits >= np.asarray(spec.levels)).any():
        raise ValueError("code outside the lattice")
    index = np.zeros(code.shape[:-1], dtype=np.int64)
    stride = 1
    for i, level in enumerate(spec.levels):
        index = index + digits[..., i] * stride
        stride *= level
    return index


def index_to_code(index: np.ndarray, spec: FsqSpec) -> np.ndarray:
    index = np.asarray(index, dtype=np.int64)
    if index.min(initial=0) < 0 or index.max(initial=0) >= spec.codebook_size:
        raise ValueError("index outside the codebook")
    _, _, _, low = spec._arrays
    digits = np.empty(index.shape + (spec.dim,), dtype=np.int64)
    rest = index
    for i, level in enumerate(spec.levels):
        digits[..., i] = rest % level
        rest = rest // level
    return digits + low


def fsq_quantize(z: np.ndarray, spec: FsqSpec) -> tuple[np.ndarray, np.ndarray]:
    """Quantize latents to (integer lattice code, flat codebook index)."""
    if z.shape[-1] != spec.dim:
        raise ValueError(f"latent dim {z.shape[-1]} != spec dim {spec.dim}")
    code = np.rint(fsq_bound(z, spec)).astype(np.int64)
    return code, code_to_index(code, spec)


def fsq_forward(z: np.ndarray, spec: FsqSpec, mode: str = "ste"):
    """Forward value plus cache for the straight-through backward.

    ``ste`` emits the rounded lattice value; ``relaxed`` emits the bounded
    value itself so finite differences see the exact same path the analytic
    backward differentiates.
    """
    if z.shape[-1] != spec.dim:
        raise ValueError(f"latent dim {z.shape[-1]} != spec dim {spec.dim}")
    halves, offsets, shifts, _ = spec._arrays
    t = np.tanh(z + shifts)
    bounded = t * halves - offsets
    if mode == "ste":
        code = np.rint(bounded).astype(np.int64)
        value = code.astype(np.float64)
    elif mode == "relaxed":
        code = np.rint(bounded).astype(np.int64)
        value = bounded
    else:
        raise ValueError(f"unknown FSQ mode {mode!r}")
    index = code_to_index(code, spec)
    cache = (t, halves)
    return value, code, index, cache


def fsq_backward(cache, dvalue: np.ndarray) -> np.ndarray:
    """Round is treated as identity; the tanh bound is differentiated exactly."""
    t, halves = cache
    return dvalue * (1.0 - t * t) * halves
