"""Mono 16-bit PCM WAV reading and writing.

Samples are exchanged as float64 in [-1, 1], scaled by 1/32768, so a
write-after-read round trip reproduces the original file byte for byte.
"""
from __future__ import annotations

import os
import wave
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    CorruptHeader,
    EmptyAudio,
    IoFailure,
    UnsupportedChannelCount,
    UnsupportedEncoding,
)

_SCALE = 32768.0


@dataclass(frozen=True, eq=False)
class AudioBuffer:
    """Mono audio: float samples in [-1, 1] at a fixed sample rate."""

    samples: np.ndarray
    sample_rate_hz: int

    def __post_init__(self) -> None:
        arr = np.asarray(self.samples, dtype=np.float64)
        if arr.ndim != 1:
            raise UnsupportedChannelCount(f"expected mono samples, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("samples must be finite")
        if arr.size and np.max(np.abs(arr)) > 1.0:
            raise ValueError("samples must lie in [-1, 1]")
        if int(self.sample_rate_hz) <= 0:
            raise ValueError(f"sample rate must be positive, got {self.sample_rate_hz}")
        object.__setattr__(self, "samples", arr)
        object.__setattr__(self, "sample_rate_hz", int(self.sample_rate_hz))

    def __len__(self) -> int:
        return self.samples.shape[0]

    @property
    def duration_seconds(self) -> float:
        return self.samples.shape[0] / self.sample_rate_hz

    def __eq__(self, other) -> bool:
        if not isinstance(other, AudioBuffer):
            return NotImplemented
        return self.sample_rate_hz == other.sample_rate_hz and np.array_equal(
            self.samples, other.samples
        )


def read_wav(path: str | Path) -> AudioBuffer:
    path = Path(path)
    try:
        with wave.open(str(path), "rb") as wav:
            channels = wav.getnchannels()
            width = wav.getsampwidth()
            rate = wav.getframerate()
            n_frames = wav.getnframes()
            raw = wav.readframes(n_frames)
    except wave.Error as exc:
        raise CorruptHeader(f"{path}: {exc}") from exc
    except EOFError as exc:
        raise CorruptHeader(f"{path}: truncated file") from exc
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc

    if channels != 1:
        raise UnsupportedChannelCount(f"{path}: expected mono, got {channels} channels")
    if width != 2:
        raise UnsupportedEncoding(f"{path}: expected 16-bit PCM, got {8 * width}-bit samples")
    if len(raw) != 2 * n_frames:
        raise CorruptHeader(
            f"{path}: header promises {n_frames} frames but {len(raw)} payload bytes exist"
        )
    pcm = np.frombuffer(raw, dtype="<i2")
    return AudioBuffer(samples=pcm.astype(np.float64) / _SCALE, sample_rate_hz=rate)


def write_wav(buffer: AudioBuffer, path: str | Path) -> None:
    """Quantize to 16-bit PCM and write atomically.

    Values outside the representable [-1, 32767/32768] range are clipped, so
    a buffer produced by ``read_wav`` survives unchanged.
    """
    if len(buffer) == 0:
        raise EmptyAudio("refusing to write a zero-sample file")
    path = Path(path)
    scaled = np.clip(np.rint(buffer.samples * _SCALE), -32768, 32767).astype("<i2")
    tmp = path.with_name(path.name + ".tmp")
    try:
        with wave.open(str(tmp), "wb") as wav:
            wav.setnchannels(1)
            wav.setsampwidth(2)
            wav.setframerate(buffer.sample_rate_hz)
            wav.writeframes(scaled.tobytes())
        os.replace(tmp, path)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
