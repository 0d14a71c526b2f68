"""Artificial room tone: a classic parallel-comb, series-allpass reverberator.

Four feedback comb filters (delays 29.7, 37.1, 41.1 and 43.7 ms) run in
parallel, their average feeding two allpass filters in series (5.0 and
1.7 ms, gain 0.7). Comb feedback gains follow the usual decay-time rule
g = 10^(-3 * loop_delay / decay_seconds), so the impulse response falls by
60 dB over ``decay_seconds``. The output blends (1 - wet) parts dry signal
with ``wet`` parts reverberated signal and keeps a tail of one decay time
so late reflections survive snippet extraction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.signal import lfilter
from sklearn.base import BaseEstimator, TransformerMixin

from .audio import AudioBuffer
from .errors import EmptyAudio

COMB_DELAYS_MS = (29.7, 37.1, 41.1, 43.7)
ALLPASS_DELAYS_MS = (5.0, 1.7)
ALLPASS_GAIN = 0.7


@dataclass(frozen=True)
class ReverbParams:
    """Wet-mix fraction and decay time; the filter bank itself is fixed."""

    wet: float
    decay_seconds: float = 1.2

    def __post_init__(self) -> None:
        if not 0.0 <= self.wet <= 1.0:
            raise ValueError(f"wet must be in [0, 1], got {self.wet}")
        if not self.decay_seconds > 0:
            raise ValueError(f"decay_seconds must be positive, got {self.decay_seconds}")

    def comb_gain(self, delay_samples: int, sample_rate_hz: int) -> float:
        return 10.0 ** (-3.0 * (delay_samples / sample_rate_hz) / self.decay_seconds)


def _delay_samples(delay_ms: float, sample_rate_hz: int) -> int:
    return max(1, round(delay_ms * sample_rate_hz / 1000.0))


def _comb(x: np.ndarray, delay: int, gain: float) -> np.ndarray:
    # y[n] = x[n - delay] + gain * y[n - delay]; the feedforward tap is
    # delayed so the wet path contributes nothing at t = 0
    b = np.zeros(delay + 1)
    b[delay] = 1.0
    a = np.zeros(delay + 1)
    a[0] = 1.0
    a[delay] = -gain
    return lfilter(b, a, x)


def _allpass(x: np.ndarray, delay: int, gain: float) -> np.ndarray:
    b = np.zeros(delay + 1)
    b[0] = -gain
    b[delay] = 1.0
    a = np.zeros(delay + 1)
    a[0] = 1.0
    a[delay] = -gain
    return lfilter(b, a, x)


def apply_reverb(audio: AudioBuffer, params: ReverbParams) -> AudioBuffer:
    """Blend the dry signal with its reverberated copy.

    The output is the input length plus ceil(decay_seconds * sample_rate)
    samples of tail, and is peak-normalized only when some sample exceeds
    1 in magnitude. wet = 0 reproduces the input exactly (plus silent tail).
    """
    if len(audio) == 0:
        raise EmptyAudio("cannot reverberate an empty buffer")
    sr = audio.sample_rate_hz
    tail = math.ceil(params.decay_seconds * sr)
    dry = np.concatenate([audio.samples, np.zeros(tail)])

    if params.wet == 0.0:
        return AudioBuffer(samples=dry, sample_rate_hz=sr)

    acc = np.zeros_like(dry)
    for delay_ms in COMB_DELAYS_MS:
        delay = _delay_samples(delay_ms, sr)
        acc += _comb(dry, delay, params.comb_gain(delay, sr))
    wet_sig = acc / len(COMB_DELAYS_MS)
    for delay_ms in ALLPASS_DELAYS_MS:
        wet_sig = _allpass(wet_sig, _delay_samples(delay_ms, sr), ALLPASS_GAIN)

    out = (1.0 - params.wet) * dry + params.wet * wet_sig
    peak = np.max(np.abs(out))
    if peak > 1.0:
        out = out / peak
    return AudioBuffer(samples=out, sample_rate_hz=sr)


class ReverbAugmenter(TransformerMixin, BaseEstimator):
    """Transformer wrapper around :func:`apply_reverb`.

    ``transform`` maps one buffer, or an iterable of buffers, through the
    same reverb settings.
    """

    def __init__(self, wet: float = 0.1, decay_seconds: float = 1.2):
        self.wet = wet
        self.decay_seconds = decay_seconds

    def _resolved_params(self) -> ReverbParams:
        return ReverbParams(wet=self.wet, decay_seconds=self.decay_seconds)

    def fit(self, X=None, y=None):
        self._resolved_params()  # surface bad settings at fit time
        return self

    def transform(self, X: AudioBuffer | Iterable[AudioBuffer]):
        params = self._resolved_params()
        if isinstance(X, AudioBuffer):
            return apply_reverb(X, params)
        return [apply_reverb(buf, params) for buf in X]
