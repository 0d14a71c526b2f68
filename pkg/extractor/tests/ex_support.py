"""Shared helpers for the extractor tests."""
import wave
from pathlib import Path

import numpy as np

SR = 16000


def write_wav(path: Path, samples: np.ndarray, sample_rate_hz: int = SR,
              n_channels: int = 1) -> Path:
    """PCM-16 WAV; multi-channel input is (n, channels)."""
    data = np.clip(np.rint(np.asarray(samples) * 32768), -32768, 32767).astype("<i2")
    with wave.open(str(path), "wb") as handle:
        handle.setnchannels(n_channels)
        handle.setsampwidth(2)
        handle.setframerate(sample_rate_hz)
        handle.writeframes(data.tobytes())
    return path


def tone(seconds: float, freq_hz: float = 220.0, sample_rate_hz: int = SR) -> np.ndarray:
    t = np.arange(int(seconds * sample_rate_hz)) / sample_rate_hz
    return 0.3 * np.sin(2 * np.pi * freq_hz * t)


def noise(seconds: float, seed: int, sample_rate_hz: int = SR) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return 0.2 * rng.standard_normal(int(seconds * sample_rate_hz)).clip(-4, 4) / 4
