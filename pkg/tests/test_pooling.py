"""Snippet slicing and pooling: window arithmetic and pooled-vector math."""
import numpy as np
import pytest
from hypothesis import given, strategies as st
from sklearn.base import clone

from abxkit import EmbeddingSequence, SnippetParams, SnippetPooler, slice_and_pool
from abxkit.errors import (
    SnippetLongerThanFrame,
    SnippetLongerThanRecording,
    ZeroNormVector,
)
from abxkit.pooling import frames_per_snippet

from support import make_sequence


def seq_of(frames, rate=1.0) -> EmbeddingSequence:
    return EmbeddingSequence(
        frames=np.asarray(frames, dtype=np.float32), frame_rate_hz=rate
    )


class TestWindowArithmetic:
    @pytest.mark.parametrize(
        "seconds,rate,expected",
        [(10, 49.0, 490), (1, 49.0, 49), (20, 49.0, 980), (0.5, 49.0, 24), (2, 10.0, 20)],
    )
    def test_frames_per_snippet(self, seconds, rate, expected):
        assert frames_per_snippet(seconds, rate) == expected

    def test_sub_frame_snippet_rejected(self):
        with pytest.raises(SnippetLongerThanFrame):
            frames_per_snippet(0.01, 49.0)

    def test_trailing_partial_window_dropped(self):
        seq = make_sequence(np.random.default_rng(0), n_frames=1000, dim=3, frame_rate_hz=49.0)
        snips = slice_and_pool(seq, SnippetParams(snippet_seconds=10.0, pooling="max"))
        assert snips.frames_per_snippet == 490
        assert len(snips) == 2  # 20 trailing frames dropped

    def test_single_full_length_snippet(self):
        seq = make_sequence(np.random.default_rng(1), n_frames=980, dim=4, frame_rate_hz=49.0)
        snips = slice_and_pool(seq, SnippetParams(snippet_seconds=20.0, pooling="max"))
        assert len(snips) == 1
        assert snips.frames_per_snippet == 980

    def test_recording_shorter_than_snippet(self):
        seq = make_sequence(np.random.default_rng(2), n_frames=10, dim=2, frame_rate_hz=1.0)
        with pytest.raises(SnippetLongerThanRecording):
            slice_and_pool(seq, SnippetParams(snippet_seconds=11.0, pooling="max"))


class TestPoolingMath:
    def test_component_wise_max(self):
        seq = seq_of([[1, 4], [3, 2]])
        snips = slice_and_pool(seq, SnippetParams(snippet_seconds=2.0, pooling="max"))
        assert np.array_equal(snips.vectors, [[3.0, 4.0]])

    def test_mean_matches_numpy_reference(self):
        rng = np.random.default_rng(7)
        seq = make_sequence(rng, n_frames=30, dim=5, frame_rate_hz=1.0)
        snips = slice_and_pool(seq, SnippetParams(snippet_seconds=10.0, pooling="mean"))
        reference = seq.frames.astype(np.float64).reshape(3, 10, 5).mean(axis=1)
        assert np.allclose(snips.vectors, reference, rtol=1e-12, atol=0)

    @pytest.mark.parametrize("pooling", ["max", "mean"])
    def test_constant_window_pools_to_that_frame_exactly(self, pooling):
        rng = np.random.default_rng(8)
        frame = rng.normal(size=7).astype(np.float32)
        seq = seq_of(np.tile(frame, (9, 1)), rate=1.0)
        snips = slice_and_pool(seq, SnippetParams(snippet_seconds=3.0, pooling=pooling))
        expected = np.tile(frame.astype(np.float64), (3, 1))
        assert np.array_equal(snips.vectors, expected)

    def test_zero_norm_window_rejected(self):
        seq = seq_of([[0, 0], [0, 0], [1, 2], [3, 4]])
        with pytest.raises(ZeroNormVector):
            slice_and_pool(seq, SnippetParams(snippet_seconds=2.0, pooling="max"))

    def test_vectors_are_float64(self):
        seq = seq_of([[1, 2], [3, 4]])
        snips = slice_and_pool(seq, SnippetParams(snippet_seconds=1.0, pooling="mean"))
        assert snips.vectors.dtype == np.float64


class TestPoolingProperties:
    @given(data=st.data())
    def test_max_pool_permutation_invariant_within_window(self, data):
        rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
        window = int(rng.integers(2, 8))
        n_windows = int(rng.integers(1, 4))
        dim = int(rng.integers(1, 6))
        frames = rng.normal(size=(window * n_windows, dim)).astype(np.float32)
        shuffled = frames.copy()
        for w in range(n_windows):
            rng.shuffle(shuffled[w * window:(w + 1) * window])
        params = SnippetParams(snippet_seconds=float(window), pooling="max")
        a = slice_and_pool(seq_of(frames), params)
        b = slice_and_pool(seq_of(shuffled), params)
        assert np.array_equal(a.vectors, b.vectors)

    @given(data=st.data())
    def test_max_pool_monotone_in_any_component(self, data):
        rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
        frames = rng.normal(size=(6, 4)).astype(np.float32)
        bumped = frames.copy()
        i = int(rng.integers(0, 6))
        j = int(rng.integers(0, 4))
        bumped[i, j] += float(rng.uniform(0.0, 2.0))
        params = SnippetParams(snippet_seconds=3.0, pooling="max")
        base = slice_and_pool(seq_of(frames), params).vectors
        more = slice_and_pool(seq_of(bumped), params).vectors
        assert np.all(more >= base)

    def test_prefix_stability_under_concatenation(self):
        rng = np.random.default_rng(4)
        first = rng.normal(size=(23, 3)).astype(np.float32)
        second = rng.normal(size=(11, 3)).astype(np.float32)
        params = SnippetParams(snippet_seconds=5.0, pooling="max")
        alone = slice_and_pool(seq_of(first), params).vectors
        joined = slice_and_pool(seq_of(np.vstack([first, second])), params).vectors
        assert np.array_equal(joined[: alone.shape[0]], alone)


class TestTransformer:
    def test_params_round_trip_and_clone(self):
        pooler = SnippetPooler(snippet_seconds=5.0, pooling="mean")
        assert pooler.get_params() == {"snippet_seconds": 5.0, "pooling": "mean"}
        duplicate = clone(pooler)
        assert duplicate.get_params() == pooler.get_params()

    def test_transform_single_and_batch(self):
        rng = np.random.default_rng(6)
        seqs = [make_sequence(rng, n_frames=8, dim=3, frame_rate_hz=1.0) for _ in range(2)]
        pooler = SnippetPooler(snippet_seconds=4.0, pooling="max").fit()
        single = pooler.transform(seqs[0])
        batch = pooler.transform(seqs)
        assert len(single) == 2
        assert len(batch) == 2
        assert np.array_equal(batch[0].vectors, single.vectors)

    def test_invalid_pooling_surfaces_at_fit(self):
        with pytest.raises(ValueError):
            SnippetPooler(pooling="median").fit()

    def test_invalid_params_dataclass(self):
        with pytest.raises(ValueError):
            SnippetParams(snippet_seconds=-1.0, pooling="max")
        with pytest.raises(ValueError):
            SnippetParams(snippet_seconds=1.0, pooling="avg")
