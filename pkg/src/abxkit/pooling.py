"""Slicing a frame sequence into fixed-duration snippets and pooling each one.

A snippet is a contiguous window of exactly ``frames_per_snippet`` frames;
the trailing partial window is discarded so every pooled vector summarizes
the same duration. Pooling is component-wise, either the maximum or the
arithmetic mean over the window.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .embedding_io import EmbeddingSequence
from .errors import SnippetLongerThanFrame, SnippetLongerThanRecording, ZeroNormVector
from .validation import check_pooling, check_positive


@dataclass(frozen=True)
class SnippetParams:
    snippet_seconds: float = 10.0
    pooling: str = "max"

    def __post_init__(self) -> None:
        check_positive(self.snippet_seconds, "snippet_seconds")
        check_pooling(self.pooling)


@dataclass(frozen=True, eq=False)
class SnippetSet:
    """Temporally ordered pooled snippet vectors for one recording."""

    recording_id: str
    snippet_seconds: float
    pooling: str
    frames_per_snippet: int
    vectors: np.ndarray  # (n_snippets, dim) float64

    def __len__(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]


def frames_per_snippet(snippet_seconds: float, frame_rate_hz: float) -> int:
    """floor(snippet_seconds * frame_rate_hz); errors if that is zero."""
    check_positive(snippet_seconds, "snippet_seconds")
    check_positive(frame_rate_hz, "frame_rate_hz")
    count = math.floor(snippet_seconds * frame_rate_hz)
    if count == 0:
        raise SnippetLongerThanFrame(
            f"snippet of {snippet_seconds} s covers no full frame at {frame_rate_hz} frames/s"
        )
    return count


def slice_and_pool(
    seq: EmbeddingSequence, params: SnippetParams, recording_id: str = ""
) -> SnippetSet:
    """Partition ``seq`` into consecutive non-overlapping windows and pool each.

    Windows hold exactly ``frames_per_snippet`` frames; a trailing partial
    window is dropped. Raises ``SnippetLongerThanRecording`` when not even one
    full window fits, and ``ZeroNormVector`` when a pooled vector has zero
    Euclidean norm (cosine distances would be undefined downstream).
    """
    window = frames_per_snippet(params.snippet_seconds, seq.frame_rate_hz)
    n_snippets = seq.n_frames // window
    label = recording_id or "<unnamed>"
    if n_snippets == 0:
        raise SnippetLongerThanRecording(
            f"recording {label}: {seq.n_frames} frames is less than one "
            f"{window}-frame window ({params.snippet_seconds} s at {seq.frame_rate_hz} frames/s)"
        )
    windows = seq.frames[: n_snippets * window].astype(np.float64).reshape(
        n_snippets, window, seq.dim
    )
    if params.pooling == "max":
        pooled = windows.max(axis=1)
    else:
        # shift by the first frame so windows of identical frames pool exactly
        first = windows[:, :1, :]
        pooled = first[:, 0, :] + (windows - first).sum(axis=1) / window
    norms = np.sqrt(np.add.reduce(pooled * pooled, axis=1))
    if np.any(norms == 0.0):
        bad = int(np.flatnonzero(norms == 0.0)[0])
        raise ZeroNormVector(f"recording {label}: pooled snippet {bad} has zero norm")
    return SnippetSet(
        recording_id=recording_id,
        snippet_seconds=float(params.snippet_seconds),
        pooling=params.pooling,
        frames_per_snippet=window,
        vectors=pooled,
    )


class SnippetPooler(TransformerMixin, BaseEstimator):
    """Stateless transformer from frame sequences to pooled snippet sets.

    Parameters follow the estimator convention (``get_params`` /
    ``set_params``); ``fit`` only validates them. ``transform`` accepts a
    single ``EmbeddingSequence`` or an iterable of them and returns the
    matching ``SnippetSet`` or list of sets.
    """

    def __init__(self, snippet_seconds: float = 10.0, pooling: str = "max"):
        self.snippet_seconds = snippet_seconds
        self.pooling = pooling

    def _resolved_params(self) -> SnippetParams:
        return SnippetParams(snippet_seconds=self.snippet_seconds, pooling=self.pooling)

    def fit(self, X=None, y=None):
        self._resolved_params()
        return self

    def transform(self, X: EmbeddingSequence | Iterable[EmbeddingSequence]):
        params = self._resolved_params()
        if isinstance(X, EmbeddingSequence):
            return slice_and_pool(X, params)
        return [slice_and_pool(seq, params) for seq in X]
