"""Shared test helpers: an independent counting oracle and corpus builders."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from abxkit import EmbeddingSequence, write_embedding_file
from abxkit.scoring import cosine_distance


def oracle_directional(S, T) -> tuple[int, int, int]:
    """Reference win/tie/total counts by enumerating every ordered triplet.

    Distances come from the scalar ``cosine_distance`` so exact-tie semantics
    match the engine; the counting itself is a plain triple loop.
    """
    S = np.asarray(S, dtype=np.float64)
    T = np.asarray(T, dtype=np.float64)
    n_s, n_t = S.shape[0], T.shape[0]
    d_ss = [[cosine_distance(S[a], S[x]) for x in range(n_s)] for a in range(n_s)]
    d_st = [[cosine_distance(S[a], T[b]) for b in range(n_t)] for a in range(n_s)]
    wins = ties = total = 0
    for a in range(n_s):
        for x in range(n_s):
            if x == a:
                continue
            for b in range(n_t):
                total += 1
                if d_ss[a][x] < d_st[a][b]:
                    wins += 1
                elif d_ss[a][x] == d_st[a][b]:
                    ties += 1
    return wins, ties, total


def unit_cloud(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    """i.i.d. directions, uniform on the sphere."""
    vectors = rng.normal(size=(count, dim))
    return vectors / np.linalg.norm(vectors, axis=1, keepdims=True)


def cluster(rng: np.random.Generator, center: np.ndarray, count: int, sigma: float) -> np.ndarray:
    return center + rng.normal(0.0, sigma, size=(count, center.shape[0]))


def make_sequence(
    rng: np.random.Generator, n_frames: int, dim: int, frame_rate_hz: float = 49.0
) -> EmbeddingSequence:
    frames = rng.normal(size=(n_frames, dim)).astype(np.float32)
    return EmbeddingSequence(frames=frames, frame_rate_hz=frame_rate_hz)


def write_corpus(
    root: Path,
    arrays_by_id: dict[str, np.ndarray],
    frame_rate_hz: float = 49.0,
    metadata: dict[str, dict[str, str]] | None = None,
    dataset: str = "synthetic",
) -> Path:
    """Write .abxe files plus a manifest; returns the manifest path."""
    emb_dir = root / "emb"
    emb_dir.mkdir(parents=True, exist_ok=True)
    recordings = []
    for rec_id, frames in arrays_by_id.items():
        seq = EmbeddingSequence(
            frames=np.asarray(frames, dtype=np.float32), frame_rate_hz=frame_rate_hz
        )
        write_embedding_file(seq, emb_dir / f"{rec_id}.abxe")
        recordings.append(
            {
                "id": rec_id,
                "embedding_path": f"emb/{rec_id}.abxe",
                "metadata": (metadata or {}).get(rec_id, {}),
            }
        )
    manifest_path = root / "manifest.json"
    manifest_path.write_text(
        json.dumps({"dataset": dataset, "recordings": recordings}), encoding="utf-8"
    )
    return manifest_path


def clustered_corpus(
    root: Path,
    rng: np.random.Generator,
    n_recordings: int = 3,
    frames_per_recording: int = 60,
    dim: int = 12,
    sigma: float = 0.01,
    frame_rate_hz: float = 10.0,
    metadata: dict[str, dict[str, str]] | None = None,
) -> Path:
    """Manifest of well-separated recordings, one orthogonal axis each."""
    arrays = {}
    for k in range(n_recordings):
        center = np.zeros(dim)
        center[k % dim] = 1.0
        arrays[f"R{k + 1}"] = cluster(rng, center, frames_per_recording, sigma)
    return write_corpus(root, arrays, frame_rate_hz=frame_rate_hz, metadata=metadata)
