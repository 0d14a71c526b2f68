"""WAV loading for the extraction pipeline.

PCM-16 only. Stereo is downmixed by channel mean; anything not at the target
rate is polyphase-resampled. Returns float32 in [-1, 1].
"""
import wave
from fractions import Fraction
from pathlib import Path

import numpy as np
from scipy.signal import resample_poly


def load_wav_mono(path: str | Path, target_rate_hz: int) -> np.ndarray:
    from .errors import BadAudio

    path = Path(path)
    try:
        with wave.open(str(path), "rb") as handle:
            n_channels = handle.getnchannels()
            width = handle.getsampwidth()
            rate = handle.getframerate()
            n_frames = handle.getnframes()
            payload = handle.readframes(n_frames)
    except (wave.Error, EOFError) as exc:
        raise BadAudio(f"{path}: not a readable WAV file ({exc})") from exc
    except OSError as exc:
        raise BadAudio(f"{path}: {exc}") from exc

    if width != 2:
        raise BadAudio(f"{path}: only PCM-16 supported, got sample width {width}")
    if n_channels < 1:
        raise BadAudio(f"{path}: no channels")
    samples = np.frombuffer(payload, dtype="<i2").astype(np.float32) / 32768.0
    if n_channels > 1:
        usable = (len(samples) // n_channels) * n_channels
        samples = samples[:usable].reshape(-1, n_channels).mean(axis=1)
    if samples.size == 0:
        raise BadAudio(f"{path}: empty audio")

    if rate != target_rate_hz:
        ratio = Fraction(target_rate_hz, rate)
        samples = resample_poly(samples, ratio.numerator, ratio.denominator)
        samples = np.clip(samples, -1.0, 1.0).astype(np.float32)
    return samples
