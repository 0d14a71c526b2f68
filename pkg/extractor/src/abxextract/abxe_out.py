"""Writers for the embedding-file and manifest formats consumed downstream.

The embedding file is little-endian: magic "ABXE", uint32 version (1),
uint32 dim, uint64 n_frames, float64 frame_rate_hz, then n_frames * dim
float32 values in frame-major order. The manifest is the JSON document the
scoring toolkit loads. Both are written atomically.
"""
import json
import os
import struct
from pathlib import Path

import numpy as np

_HEADER = struct.Struct("<4sIIQd")
_MAGIC = b"ABXE"
_VERSION = 1


def _atomic_write_bytes(path: Path, data: bytes) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


def write_embedding(frames: np.ndarray, frame_rate_hz: float, path: str | Path) -> None:
    """frames: (n_frames, dim) array, stored as float32."""
    frames = np.ascontiguousarray(frames, dtype="<f4")
    if frames.ndim != 2 or frames.shape[1] < 1:
        raise ValueError(f"frames must be (n_frames, dim), got shape {frames.shape}")
    header = _HEADER.pack(_MAGIC, _VERSION, frames.shape[1], frames.shape[0], float(frame_rate_hz))
    _atomic_write_bytes(Path(path), header + frames.tobytes())


def write_manifest(dataset_name: str, entries: list[dict], path: str | Path) -> None:
    """entries: [{"id": ..., "embedding_path": ..., "metadata": {...}}, ...]."""
    doc = {"dataset": dataset_name, "recordings": entries}
    _atomic_write_bytes(Path(path), (json.dumps(doc, indent=2) + "\n").encode())
