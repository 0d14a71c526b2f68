"""ABX discriminability scoring between snippet sets.

A triplet draws two snippets A and X from the set sharing the probed
characteristic (set ``S``) and one snippet B from the set that does not
(set ``T``). The triplet counts as a win when the cosine distance
``d(A, X)`` is strictly smaller than ``d(A, B)``, and as a tie when the two
distances are exactly equal; ties contribute half a win. The score is the
win fraction over all enumerated (or sampled) triplets, so 0.5 is chance
and 1.0 is perfect discrimination.

Distances are accumulated in float64 with a fixed per-pair reduction order
(element-wise multiply followed by ``np.add.reduce`` over the component
axis). That makes every ``d(u, v)`` a pure function of the two vectors'
bits, so the scalar, matrix, enumerating and sorting code paths agree on
exact equality: ties are well defined and win/tie counts are identical
across paths and thread counts.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DimMismatch, TooFewSnippets, ZeroNorm
from .validation import check_vector_set


@dataclass(frozen=True)
class SampleSpec:
    """Monte-Carlo mode: draw ``count`` triplets i.i.d. with the given seed."""

    count: int
    seed: int

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError(f"sample count must be >= 1, got {self.count}")


@dataclass(frozen=True)
class AbxResult:
    score: float
    wins: int
    ties: int
    total_triplets: int
    mode: str  # "full" or "sampled"
    seed: int | None = None


def _score(wins: int, ties: int, total: int) -> float:
    return (wins + 0.5 * ties) / total


def _unit_rows(X, name: str) -> np.ndarray:
    """Validated float64 vectors scaled to unit norm."""
    arr = check_vector_set(X, name=name)
    if arr.shape[1] == 0:
        raise ZeroNorm(f"{name}: vectors have zero components")
    norms = np.sqrt(np.add.reduce(arr * arr, axis=1))
    if np.any(norms == 0.0):
        bad = int(np.flatnonzero(norms == 0.0)[0])
        raise ZeroNorm(f"{name}: vector {bad} has zero norm")
    return arr / norms[:, None]


def cosine_distance(u, v) -> float:
    """1 - cos(u, v); in [0, 2] up to rounding."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.ndim != 1 or v.ndim != 1:
        raise ValueError("cosine_distance expects 1-D vectors")
    if u.shape[0] != v.shape[0]:
        raise DimMismatch(f"vectors have {u.shape[0]} and {v.shape[0]} components")
    nu = np.sqrt(np.add.reduce(u * u))
    nv = np.sqrt(np.add.reduce(v * v))
    if nu == 0.0 or nv == 0.0:
        raise ZeroNorm("cosine distance is undefined for zero-norm vectors")
    return float(1.0 - np.add.reduce((u / nu) * (v / nv)))


def _unit_distance_rows(unit_u: np.ndarray, unit_V: np.ndarray) -> np.ndarray:
    # same multiply + add.reduce order as the scalar path, row by row
    return 1.0 - np.add.reduce(unit_u * unit_V, axis=1)


def _distance_matrix_units(U: np.ndarray, V: np.ndarray, n_jobs: int = 1) -> np.ndarray:
    out = np.empty((U.shape[0], V.shape[0]))

    def fill(_: int, rows: range) -> None:
        for i in rows:
            out[i] = _unit_distance_rows(U[i], V)

    _run_chunks(fill, U.shape[0], n_jobs)
    return out


def cosine_distance_matrix(U, V, n_jobs: int = 1) -> np.ndarray:
    """Pairwise cosine distances; entry (i, j) equals cosine_distance(U[i], V[j]) bit-for-bit."""
    un = _unit_rows(U, "U")
    vn = _unit_rows(V, "V")
    if un.shape[1] != vn.shape[1]:
        raise DimMismatch(f"U has dim {un.shape[1]}, V has dim {vn.shape[1]}")
    return _distance_matrix_units(un, vn, n_jobs=n_jobs)


def _run_chunks(fn, n: int, n_jobs: int) -> None:
    """Call ``fn(chunk_index, row_range)`` over a fixed partition of range(n).

    The partition depends only on n and n_jobs, never on scheduling, so any
    chunk-wise integer counts can be summed into thread-count-independent
    totals.
    """
    if n_jobs <= 1 or n < 2:
        fn(0, range(n))
        return
    n_jobs = min(n_jobs, n)
    bounds = np.linspace(0, n, n_jobs + 1).astype(int)
    chunks = [range(bounds[k], bounds[k + 1]) for k in range(n_jobs)]
    with ThreadPoolExecutor(max_workers=n_jobs) as pool:
        for future in [pool.submit(fn, k, chunk) for k, chunk in enumerate(chunks)]:
            future.result()


def _prepare(S, T, min_s: int, min_t: int) -> tuple[np.ndarray, np.ndarray]:
    a = _unit_rows(S, "S")
    b = _unit_rows(T, "T")
    if a.shape[0] < min_s:
        raise TooFewSnippets(f"S holds {a.shape[0]} snippets, need at least {min_s}")
    if b.shape[0] < min_t:
        raise TooFewSnippets(f"T holds {b.shape[0]} snippets, need at least {min_t}")
    if a.shape[1] != b.shape[1]:
        raise DimMismatch(f"S has dim {a.shape[1]}, T has dim {b.shape[1]}")
    return a, b


def abx_directional(S, T, sample: SampleSpec | None = None, n_jobs: int = 1) -> AbxResult:
    """Directional ABX score with A, X drawn from ``S`` and B from ``T``.

    Full mode enumerates every ordered triplet (a, x in S with a != x, b in
    T) by direct comparison. Sampled mode draws ``sample.count`` triplets
    uniformly and independently from the same space; identical seed and
    inputs give identical results.
    """
    su, tu = _prepare(S, T, min_s=2, min_t=1)
    n_s, n_t = su.shape[0], tu.shape[0]
    d_st = _distance_matrix_units(su, tu, n_jobs=n_jobs)
    d_ss = _distance_matrix_units(su, su, n_jobs=n_jobs)

    if sample is not None:
        rng = np.random.default_rng(sample.seed)
        a = rng.integers(0, n_s, sample.count)
        x = rng.integers(0, n_s - 1, sample.count)
        x = x + (x >= a)  # skip x == a while keeping the draw uniform
        b = rng.integers(0, n_t, sample.count)
        dax = d_ss[a, x]
        dab = d_st[a, b]
        wins = int(np.sum(dax < dab))
        ties = int(np.sum(dax == dab))
        return AbxResult(
            score=_score(wins, ties, sample.count),
            wins=wins,
            ties=ties,
            total_triplets=sample.count,
            mode="sampled",
            seed=sample.seed,
        )

    wins = ties = 0
    for a in range(n_s):
        dax = np.delete(d_ss[a], a)
        dab = d_st[a]
        wins += int(np.less.outer(dax, dab).sum())
        ties += int(np.equal.outer(dax, dab).sum())
    total = n_s * (n_s - 1) * n_t
    return AbxResult(
        score=_score(wins, ties, total),
        wins=wins,
        ties=ties,
        total_triplets=total,
        mode="full",
    )


def abx_directional_fast(S, T, n_jobs: int = 1) -> AbxResult:
    """Full-mode ABX via per-row sorting and binary search.

    Returns counts exactly equal to the enumerating path: for each anchor
    ``a``, the ``|T|`` cross distances are sorted once and every ``d(a, x)``
    is resolved by binary search, counting strictly greater entries as wins
    and equal entries as ties.
    """
    su, tu = _prepare(S, T, min_s=2, min_t=1)
    n_s, n_t = su.shape[0], tu.shape[0]
    d_st = _distance_matrix_units(su, tu, n_jobs=n_jobs)
    d_ss = _distance_matrix_units(su, su, n_jobs=n_jobs)
    d_st.sort(axis=1)

    results: list[tuple[int, int]] = [(0, 0)] * max(min(n_jobs, n_s), 1)

    def count(chunk: int, rows: range) -> None:
        wins = ties = 0
        for a in rows:
            row = d_st[a]
            dax = np.delete(d_ss[a], a)
            hi = np.searchsorted(row, dax, side="right")
            lo = np.searchsorted(row, dax, side="left")
            wins += int(np.sum(n_t - hi))
            ties += int(np.sum(hi - lo))
        results[chunk] = (wins, ties)

    _run_chunks(count, n_s, n_jobs)
    wins = sum(w for w, _ in results)
    ties = sum(t for _, t in results)
    total = n_s * (n_s - 1) * n_t
    return AbxResult(
        score=_score(wins, ties, total),
        wins=wins,
        ties=ties,
        total_triplets=total,
        mode="full",
    )


def abx_within_set(S) -> AbxResult:
    """Diagnostic score with X and B both drawn from ``S`` minus the anchor.

    Triplets (a, x, b) and (a, b, x) pair off, so a set with no tied
    distances scores exactly 0.5.
    """
    su = _unit_rows(S, "S")
    n = su.shape[0]
    if n < 2:
        raise TooFewSnippets(f"S holds {n} snippets, need at least 2")
    d = _distance_matrix_units(su, su)
    wins = ties = 0
    for a in range(n):
        row = np.delete(d[a], a)
        wins += int(np.less.outer(row, row).sum())
        ties += int(np.equal.outer(row, row).sum())
    total = n * (n - 1) * (n - 1)
    return AbxResult(
        score=_score(wins, ties, total), wins=wins, ties=ties, total_triplets=total, mode="full"
    )


def _half_sample(sample: SampleSpec | None, which: int) -> SampleSpec | None:
    if sample is None:
        return None
    child = int(np.random.SeedSequence((sample.seed, which)).generate_state(1, np.uint64)[0])
    return SampleSpec(count=sample.count, seed=child)


def abx_diagonal(S, sample: SampleSpec | None = None, n_jobs: int = 1) -> float:
    """Split-half self-score of one snippet set.

    Even- and odd-indexed snippets form two pseudo-recordings; the result is
    the mean of the two directional scores between them. Measures
    within-recording drift: chance level (0.5) means the two halves are
    statistically interchangeable.
    """
    arr = check_vector_set(S, name="S")
    if arr.shape[0] < 4:
        raise TooFewSnippets(
            f"split-half diagonal needs at least 4 snippets, got {arr.shape[0]}"
        )
    even = arr[0::2]
    odd = arr[1::2]
    if sample is None:
        fwd = abx_directional_fast(even, odd, n_jobs=n_jobs)
        bwd = abx_directional_fast(odd, even, n_jobs=n_jobs)
    else:
        fwd = abx_directional(even, odd, sample=_half_sample(sample, 0), n_jobs=n_jobs)
        bwd = abx_directional(odd, even, sample=_half_sample(sample, 1), n_jobs=n_jobs)
    return (fwd.score + bwd.score) / 2.0
