"""Parameter checkpoints: versioned magic, JSON header, little-endian f64 blobs."""

from __future__ import annotations

import json
import struct
from pathlib import Path
from typing import Any

import numpy as np

MAGIC = b"LGCP"
VERSION = 1

Params = dict[str, np.ndarray]


class CheckpointError(Exception):
    pass


def save_params(path, params: Params, meta: dict[str, Any] | None = None) -> None:
    header = {
        "version": VERSION,
        "meta": meta or {},
        "tensors": [
            {"name": k, "shape": list(v.shape)} for k, v in params.items()
        ],
    }
    blob = json.dumps(header, sort_keys=True).encode()
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<IQ", VERSION, len(blob)))
        fh.write(blob)
        for v in params.values():
            if not np.all(np.isfinite(v)):
                raise CheckpointError("refusing to save non-finite parameters")
            fh.write(np.ascontiguousarray(v, dtype="<f8").tobytes())


def load_params(path) -> tuple[Params, dict[str, Any]]:
    data = Path(path).read_bytes()
    if data[:4] != MAGIC:
        raise CheckpointError(f"{path}: bad magic")
    version, header_len = struct.unpack("<IQ", data[4:16])
    if version != VERSION:
        raise CheckpointError(f"{path}: unsupported version {version}")
    header = json.loads(data[16 : 16 + header_len])
    params: Params = {}
    offset = 16 + header_len
    for entry in header["tensors"]:
        shape = tuple(entry["shape"])
        count = int(np.prod(shape)) if shape else 1
        arr = np.frombuffer(data, dtype="<f8", count=count, offset=offset)
        offset += count * 8
        params[entry["name"]] = arr.reshape(shape).astype(np.float64)
    if offset != len(data):
        raise CheckpointError(f"{path}: trailing bytes")
    return params, header["meta"]
