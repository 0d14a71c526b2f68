"""End-to-end acceptance checks.

Each test here is one gate criterion; the terminal summary section prints
one PASS/FAIL line per criterion after the run. Everything is synthetic
and generated in-suite: random vector populations, constructed clusters,
synthetic speechlike audio with a deterministic spectral stub encoder,
and temporary corpora on disk.
"""
import dataclasses
import struct
import time

import numpy as np
import pytest
from click.testing import CliRunner
from scipy.signal import lfilter

from abxkit import (
    AudioBuffer,
    EmbeddingSequence,
    ReverbParams,
    SampleSpec,
    SnippetParams,
    abx_diagonal,
    abx_directional,
    abx_directional_fast,
    apply_reverb,
    embedding_bytes,
    parse_embedding_bytes,
    slice_and_pool,
)
from abxkit.cli import main as cli_main
from abxkit.errors import EmbeddingFormatError
from abxkit.pooling import frames_per_snippet

from support import cluster, clustered_corpus, oracle_directional, unit_cloud

pytestmark = pytest.mark.acceptance

SR = 16000


# --- synthetic audio and the deterministic stub encoder ----------------------

def speechlike_noise(seconds: float, seed: int) -> AudioBuffer:
    """Band-resonant noise with a fixed 4 Hz syllable rhythm.

    Loudness is set by RMS, not peak, so two realizations of the process get
    the same gain and differ only in content.
    """
    rng = np.random.default_rng(seed)
    n = int(seconds * SR)
    x = rng.normal(size=n)
    y = np.zeros(n)
    for f0, bw in [(300, 80), (1200, 150), (2400, 250)]:
        r = np.exp(-np.pi * bw / SR)
        theta = 2 * np.pi * f0 / SR
        y = y + lfilter([1.0], [1.0, -2 * r * np.cos(theta), r * r], x)
    t = np.arange(n) / SR
    env = ((t * 4.0) % 1.0 < 0.6).astype(float)
    kernel = np.hanning(int(0.05 * SR))
    env = np.convolve(env, kernel / kernel.sum(), mode="same")
    sig = y * env
    sig = 0.04 * sig / np.sqrt(np.mean(sig * sig))
    return AudioBuffer(samples=sig, sample_rate_hz=SR)


def stub_encode(buffer: AudioBuffer) -> EmbeddingSequence:
    """Log band energies over 25 ms windows at 20 ms hop; no learned parts."""
    x = buffer.samples
    win, hop = 400, 320
    count = 1 + (len(x) - win) // hop
    idx = np.arange(win) + hop * np.arange(count)[:, None]
    frames = x[idx] * np.hanning(win)
    spec = np.abs(np.fft.rfft(frames, axis=1)) ** 2
    edges = np.unique(np.round(np.geomspace(2, 200, 33)).astype(int))
    bands = np.add.reduceat(spec, edges[:-1], axis=1)
    return EmbeddingSequence(
        frames=np.log(bands + 1e-10).astype(np.float32),
        frame_rate_hz=buffer.sample_rate_hz / hop,
    )


def symmetrized(S, T) -> float:
    return (abx_directional_fast(S, T).score + abx_directional_fast(T, S).score) / 2.0


# --- criteria ----------------------------------------------------------------

def test_oracle_equivalence():
    """500 randomized small instances: fast path == enumeration, exactly."""
    start = time.perf_counter()
    rng = np.random.default_rng(1234)
    for _ in range(500):
        n_s = int(rng.integers(2, 11))
        n_t = int(rng.integers(1, 11))
        dim = int(rng.integers(1, 9))
        if rng.random() < 0.3:
            # quantized values force plenty of exact distance ties
            S = rng.integers(-1, 3, size=(n_s, dim)).astype(float)
            T = rng.integers(-1, 3, size=(n_t, dim)).astype(float)
            S[np.all(S == 0, axis=1)] = 1.0
            T[np.all(T == 0, axis=1)] = 1.0
        else:
            S = rng.normal(size=(n_s, dim))
            T = rng.normal(size=(n_t, dim))
        if rng.random() < 0.5:
            S[int(rng.integers(0, n_s))] = S[int(rng.integers(0, n_s))]
            T[int(rng.integers(0, n_t))] = S[int(rng.integers(0, n_s))]
        wins, ties, total = oracle_directional(S, T)
        fast = abx_directional_fast(S, T)
        assert (fast.wins, fast.ties, fast.total_triplets) == (wins, ties, total)
    assert time.perf_counter() - start < 10.0


def test_chance_level():
    """i.i.d. unit-vector populations score 0.5 +/- 0.05, every repetition."""
    rng = np.random.default_rng(20260823)
    for _ in range(20):
        S = unit_cloud(rng, 100, 16)
        T = unit_cloud(rng, 100, 16)
        assert abs(symmetrized(S, T) - 0.5) <= 0.05
        D = unit_cloud(rng, 100, 16)
        assert abs(abx_diagonal(D) - 0.5) <= 0.05


def test_separation():
    """Orthogonal cluster means with sigma = 0.01 noise score at least 0.99."""
    rng = np.random.default_rng(7)
    e1 = np.zeros(16)
    e2 = np.zeros(16)
    e1[0] = 1.0
    e2[1] = 1.0
    S = cluster(rng, e1, 50, 0.01)
    T = cluster(rng, e2, 50, 0.01)
    assert symmetrized(S, T) >= 0.99


def test_reverb_sweep_dip():
    """Room-tone sweep: the score against a reverberant reference dips at the
    matching wet mix and rises on both sides."""
    start = time.perf_counter()
    params = SnippetParams(snippet_seconds=5.0, pooling="mean")
    reference = speechlike_noise(90.0, seed=101)
    probe = speechlike_noise(90.0, seed=202)
    A = slice_and_pool(
        stub_encode(apply_reverb(reference, ReverbParams(wet=0.15))), params, "A"
    ).vectors
    scores = {}
    for wet in (0.0, 0.05, 0.10, 0.15, 0.20):
        B = slice_and_pool(
            stub_encode(apply_reverb(probe, ReverbParams(wet=wet))), params, "B"
        ).vectors
        scores[wet] = symmetrized(A, B)
    assert min(scores, key=scores.get) == 0.15
    assert time.perf_counter() - start < 60.0


def test_scale_invariance():
    """Multiplying all vectors by 7.3 changes no result field."""
    rng = np.random.default_rng(55)
    S = rng.normal(size=(30, 12))
    T = rng.normal(size=(25, 12))
    S[3] = S[9]  # keep an exact tie in play
    for compute in (
        lambda U, V: abx_directional_fast(U, V),
        lambda U, V: abx_directional(U, V, sample=SampleSpec(count=1000, seed=3)),
    ):
        base = compute(S, T)
        scaled = compute(S * 7.3, T * 7.3)
        assert dataclasses.asdict(scaled) == dataclasses.asdict(base)
    assert abx_diagonal(S * 7.3) == abx_diagonal(S)


def test_tie_convention():
    """All-identical vectors tie on every triplet and score exactly 0.5."""
    S = np.tile([0.6, -0.2, 0.11], (8, 1))
    T = np.tile([0.6, -0.2, 0.11], (5, 1))
    result = abx_directional(S, T)
    assert result.score == 0.5
    assert result.wins == 0
    assert result.ties == result.total_triplets
    assert abx_diagonal(S) == 0.5


def test_pooling_properties():
    """1000 random windows: max pooling is permutation-invariant and monotone;
    a 20 s input at 49 frames/s pools 980 frames into one snippet."""
    rng = np.random.default_rng(99)
    for _ in range(1000):
        window = int(rng.integers(2, 9))
        dim = int(rng.integers(1, 7))
        frames = rng.normal(size=(window, dim)).astype(np.float32)
        params = SnippetParams(snippet_seconds=float(window), pooling="max")

        def pooled(f):
            seq = EmbeddingSequence(frames=f, frame_rate_hz=1.0)
            return slice_and_pool(seq, params).vectors

        base = pooled(frames)
        shuffled = frames[rng.permutation(window)]
        assert np.array_equal(pooled(shuffled), base)
        bumped = frames.copy()
        bumped[int(rng.integers(0, window)), int(rng.integers(0, dim))] += float(
            rng.uniform(0.0, 1.0)
        )
        assert np.all(pooled(bumped) >= base)

    assert frames_per_snippet(20.0, 49.0) == 980
    seq = EmbeddingSequence(
        frames=rng.normal(size=(980, 8)).astype(np.float32), frame_rate_hz=49.0
    )
    snips = slice_and_pool(seq, SnippetParams(snippet_seconds=20.0, pooling="max"))
    assert len(snips) == 1
    assert snips.frames_per_snippet == 980


def test_format_fuzzing():
    """10,000 adversarial byte strings parse to a structured error or a valid
    sequence; 100 random sequences survive a bit-exact round trip."""
    rng = np.random.default_rng(4321)
    valid = embedding_bytes(
        EmbeddingSequence(
            frames=rng.normal(size=(3, 4)).astype(np.float32), frame_rate_hz=49.0
        )
    )
    checked = 0
    for _ in range(10_000):
        kind = rng.random()
        if kind < 0.6:
            data = rng.bytes(int(rng.integers(0, 120)))
        elif kind < 0.8:
            data = struct.pack("<4sI", b"ABXE", 1) + rng.bytes(int(rng.integers(0, 80)))
        else:
            blob = bytearray(valid)
            for _ in range(int(rng.integers(1, 4))):
                blob[int(rng.integers(0, len(blob)))] = int(rng.integers(0, 256))
            data = bytes(blob[: int(rng.integers(1, len(blob) + 1))])
        try:
            parsed = parse_embedding_bytes(data)
            assert isinstance(parsed, EmbeddingSequence)
        except EmbeddingFormatError:
            pass
        checked += 1
    assert checked == 10_000

    for _ in range(100):
        seq = EmbeddingSequence(
            frames=rng.normal(size=(int(rng.integers(0, 20)), int(rng.integers(1, 12))))
            .astype(np.float32),
            frame_rate_hz=float(rng.uniform(1.0, 100.0)),
        )
        blob = embedding_bytes(seq)
        assert parse_embedding_bytes(blob) == seq
        assert embedding_bytes(parse_embedding_bytes(blob)) == blob


def test_performance_budget():
    """Full enumeration at 1500 x 1500, dim 1024: single-threaded within
    240 s, four workers within 60 s, counts identical."""
    rng = np.random.default_rng(2)
    S = rng.normal(size=(1500, 1024))
    T = rng.normal(size=(1500, 1024))

    start = time.perf_counter()
    single = abx_directional_fast(S, T, n_jobs=1)
    single_elapsed = time.perf_counter() - start

    start = time.perf_counter()
    quad = abx_directional_fast(S, T, n_jobs=4)
    quad_elapsed = time.perf_counter() - start

    assert single == quad
    assert single.total_triplets == 1500 * 1499 * 1500
    assert single_elapsed < 240.0
    assert quad_elapsed < 60.0


def test_reverb_properties():
    """Identity at wet 0, strictly increasing tail energy over the four wet
    values, bounded output for full-scale input."""
    audio = speechlike_noise(1.5, seed=8)
    n = len(audio)
    dry = apply_reverb(audio, ReverbParams(wet=0.0))
    assert np.array_equal(dry.samples[:n], audio.samples)
    assert np.all(dry.samples[n:] == 0.0)

    energies = []
    for wet in (0.05, 0.10, 0.15, 0.20):
        tail = apply_reverb(audio, ReverbParams(wet=wet)).samples[n:]
        energies.append(float(np.sum(tail * tail)))
    assert all(a < b for a, b in zip(energies, energies[1:]))

    t = np.arange(SR) / SR
    full_scale = AudioBuffer(
        samples=np.sign(np.sin(2 * np.pi * 97 * t)), sample_rate_hz=SR
    )
    loud = apply_reverb(full_scale, ReverbParams(wet=0.2))
    assert np.max(np.abs(loud.samples)) <= 1.0


def test_end_to_end_determinism(tmp_path):
    """Scoring the same corpus twice produces byte-identical JSON, CSV and SVG."""
    rng = np.random.default_rng(31)
    manifest = clustered_corpus(
        tmp_path / "data", rng, n_recordings=3, frames_per_recording=50, dim=8
    )
    runner = CliRunner()
    outputs = []
    for run in ("one", "two"):
        out = tmp_path / run
        result = runner.invoke(
            cli_main,
            ["score", "--manifest", str(manifest), "--snippet-seconds", "1,2",
             "--out", str(out)],
        )
        assert result.exit_code == 0, result.output
        result = runner.invoke(
            cli_main,
            ["report", "--scores", str(out / "scores_1s.json"),
             "--out", str(out / "scores_1s.svg")],
        )
        assert result.exit_code == 0, result.output
        outputs.append(out)

    first, second = outputs
    for name in ("scores_1s.json", "scores_1s.csv", "scores_2s.json",
                 "scores_2s.csv", "scores_1s.svg"):
        assert (first / name).read_bytes() == (second / name).read_bytes(), name
