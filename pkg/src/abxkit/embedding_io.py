"""Reader and writer for the ``.abxe`` embedding file format.

An ``.abxe`` file stores the frame-level representation matrix of one
recording. Layout, all little-endian:

    bytes 0-3    magic ``ABXE``
    bytes 4-7    format version, u32 (currently 1)
    bytes 8-11   vector dimensionality ``dim``, u32
    bytes 12-19  frame count ``n_frames``, u64
    bytes 20-27  frame rate in Hz, IEEE-754 binary64
    bytes 28-    ``n_frames * dim`` IEEE-754 binary32 values, frame-major

Total size is therefore exactly ``28 + 4 * dim * n_frames`` bytes, which the
reader verifies before touching the payload.
"""
from __future__ import annotations

import math
import os
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    BadFrameRate,
    BadMagic,
    IoFailure,
    NonFiniteValue,
    SizeMismatch,
    UnsupportedVersion,
    ZeroDim,
)

MAGIC = b"ABXE"
VERSION = 1
_HEADER = struct.Struct("<4sIIQd")
HEADER_SIZE = _HEADER.size  # 28


@dataclass(frozen=True, eq=False)
class EmbeddingSequence:
    """Frame-level representation of one recording.

    ``frames`` is an ``(n_frames, dim)`` float32 matrix; ``frame_rate_hz`` is
    the number of frames per second of source audio. A sequence may be empty
    (zero frames) but never zero-dimensional, and every value must be finite.
    """

    frames: np.ndarray
    frame_rate_hz: float

    def __post_init__(self) -> None:
        frames = np.asarray(self.frames, dtype=np.float32)
        if frames.ndim != 2:
            raise ValueError(f"frames must be 2-D (n_frames, dim), got shape {frames.shape}")
        if frames.shape[1] < 1:
            raise ValueError("dim must be >= 1")
        if not (math.isfinite(self.frame_rate_hz) and self.frame_rate_hz > 0):
            raise ValueError(f"frame_rate_hz must be positive and finite, got {self.frame_rate_hz}")
        if frames.size and not np.all(np.isfinite(frames)):
            raise ValueError("frames contain non-finite values")
        object.__setattr__(self, "frames", frames)
        object.__setattr__(self, "frame_rate_hz", float(self.frame_rate_hz))

    @property
    def dim(self) -> int:
        return self.frames.shape[1]

    @property
    def n_frames(self) -> int:
        return self.frames.shape[0]

    @property
    def duration_seconds(self) -> float:
        return self.n_frames / self.frame_rate_hz

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EmbeddingSequence):
            return NotImplemented
        return (
            self.frame_rate_hz == other.frame_rate_hz
            and self.frames.shape == other.frames.shape
            and bool(np.array_equal(self.frames, other.frames))
        )


def parse_embedding_bytes(data: bytes, source: str = "<bytes>") -> EmbeddingSequence:
    """Parse an in-memory ``.abxe`` byte string.

    Raises a structured ``EmbeddingFormatError`` subclass naming the first
    offending field or byte offset; never propagates low-level struct or
    numpy errors.
    """
    if len(data) < HEADER_SIZE:
        raise SizeMismatch(
            f"{source}: {len(data)} bytes is shorter than the {HEADER_SIZE}-byte header"
        )
    magic, version, dim, n_frames, frame_rate = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise BadMagic(f"{source}: bytes 0-3 are {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise UnsupportedVersion(
            f"{source}: version field (bytes 4-7) is {version}, supported version is {VERSION}"
        )
    if dim == 0:
        raise ZeroDim(f"{source}: dim field (bytes 8-11) is zero")
    expected = HEADER_SIZE + 4 * dim * n_frames
    if len(data) != expected:
        raise SizeMismatch(
            f"{source}: file is {len(data)} bytes but the header (dim={dim}, "
            f"n_frames={n_frames}) implies {expected}"
        )
    if not math.isfinite(frame_rate):
        raise NonFiniteValue(f"{source}: frame_rate_hz (bytes 20-27) is {frame_rate}")
    if frame_rate <= 0:
        raise BadFrameRate(
            f"{source}: frame_rate_hz (bytes 20-27) is {frame_rate}, must be > 0"
        )
    frames = np.frombuffer(data, dtype="<f4", offset=HEADER_SIZE).reshape(n_frames, dim)
    finite = np.isfinite(frames)
    if not finite.all():
        flat = int(np.flatnonzero(~finite.ravel())[0])
        offset = HEADER_SIZE + 4 * flat
        raise NonFiniteValue(
            f"{source}: non-finite value at frame {flat // dim} component {flat % dim} "
            f"(byte offset {offset})"
        )
    return EmbeddingSequence(frames=frames.astype(np.float32), frame_rate_hz=float(frame_rate))


def read_embedding_file(path: str | Path) -> EmbeddingSequence:
    """Read and validate a ``.abxe`` file."""
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    return parse_embedding_bytes(data, source=str(path))


def read_embedding_header(path: str | Path) -> tuple[int, int, float]:
    """Validate the header and file size only; returns (dim, n_frames, frame_rate_hz).

    Cheap existence-plus-shape check used when validating manifests without
    loading payloads.
    """
    path = Path(path)
    try:
        size = path.stat().st_size
        with open(path, "rb") as fh:
            head = fh.read(HEADER_SIZE)
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    if len(head) < HEADER_SIZE or size < HEADER_SIZE:
        raise SizeMismatch(f"{path}: {size} bytes is shorter than the {HEADER_SIZE}-byte header")
    magic, version, dim, n_frames, frame_rate = _HEADER.unpack(head)
    if magic != MAGIC:
        raise BadMagic(f"{path}: bytes 0-3 are {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise UnsupportedVersion(
            f"{path}: version field (bytes 4-7) is {version}, supported version is {VERSION}"
        )
    if dim == 0:
        raise ZeroDim(f"{path}: dim field (bytes 8-11) is zero")
    expected = HEADER_SIZE + 4 * dim * n_frames
    if size != expected:
        raise SizeMismatch(
            f"{path}: file is {size} bytes but the header (dim={dim}, "
            f"n_frames={n_frames}) implies {expected}"
        )
    if not math.isfinite(frame_rate):
        raise NonFiniteValue(f"{path}: frame_rate_hz (bytes 20-27) is {frame_rate}")
    if frame_rate <= 0:
        raise BadFrameRate(f"{path}: frame_rate_hz (bytes 20-27) is {frame_rate}, must be > 0")
    return int(dim), int(n_frames), float(frame_rate)


def embedding_bytes(seq: EmbeddingSequence) -> bytes:
    header = _HEADER.pack(MAGIC, VERSION, seq.dim, seq.n_frames, seq.frame_rate_hz)
    return header + np.ascontiguousarray(seq.frames, dtype="<f4").tobytes()


def write_embedding_file(seq: EmbeddingSequence, path: str | Path) -> None:
    """Write ``seq`` to ``path`` atomically (temp file + rename)."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    try:
        tmp.write_bytes(embedding_bytes(seq))
        os.replace(tmp, path)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
