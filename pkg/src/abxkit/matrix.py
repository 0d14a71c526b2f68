"""Pairwise score matrices over a dataset manifest.

Builds the full grid of directional ABX results between every ordered pair
of recordings, the symmetrized per-pair means used by heatmaps, and the
split-half self-score for each recording. Also reads and writes the JSON
and CSV forms of a matrix.
"""
from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .embedding_io import read_embedding_file
from .errors import (
    AbxError,
    IoFailure,
    ScoreFileError,
    SingleValue,
    TooFewRecordings,
    TooFewSnippets,
    UnknownKey,
)
from .manifest import DatasetManifest
from .pooling import SnippetParams, SnippetSet, slice_and_pool
from .scoring import AbxResult, SampleSpec, abx_diagonal, abx_directional, abx_directional_fast

MODE_FULL = "full"
MODE_SAMPLE = "sample"


@dataclass(frozen=True)
class AbxScoreMatrix:
    """Directional, symmetrized and diagonal scores for one snippet length.

    ``directional`` is keyed by ordered index pairs into ``recording_ids``;
    ``symmetrized`` by pairs with i < j; ``diagonal`` by single indices.
    Recordings too short for a split-half self-score are absent from
    ``diagonal``.
    """

    recording_ids: tuple[str, ...]
    directional: dict[tuple[int, int], AbxResult]
    symmetrized: dict[tuple[int, int], float]
    diagonal: dict[int, float]
    params: SnippetParams
    mode: str = MODE_FULL
    max_triplets: int | None = None
    seed: int | None = None
    dataset_name: str = ""

    def __post_init__(self) -> None:
        if self.mode not in (MODE_FULL, MODE_SAMPLE):
            raise ValueError(f"mode must be {MODE_FULL!r} or {MODE_SAMPLE!r}, got {self.mode!r}")

    def __len__(self) -> int:
        return len(self.recording_ids)

    def symmetrized_score(self, i: int, j: int) -> float:
        return self.symmetrized[(i, j) if i < j else (j, i)]

    def params_dict(self) -> dict:
        out: dict = {
            "dataset": self.dataset_name,
            "snippet_seconds": self.params.snippet_seconds,
            "pooling": self.params.pooling,
            "mode": self.mode,
        }
        if self.mode == MODE_SAMPLE:
            out["max_triplets"] = self.max_triplets
            out["seed"] = self.seed
        return out


def _pair_seed(base_seed: int, i: int, j: int) -> int:
    # one fixed stream per cell so results do not depend on evaluation order
    return int(np.random.SeedSequence((base_seed, i, j)).generate_state(1, np.uint64)[0])


def _with_context(exc: AbxError, context: str) -> AbxError:
    return type(exc)(f"{context}: {exc}")


def pool_manifest(
    manifest: DatasetManifest, params: SnippetParams, min_snippets: int = 2
) -> list[SnippetSet]:
    """One pooled snippet set per manifest entry, in manifest order."""
    sets = []
    for entry in manifest:
        seq = read_embedding_file(manifest.embedding_file(entry))
        snips = slice_and_pool(seq, params, recording_id=entry.id)
        if len(snips) < min_snippets:
            raise TooFewSnippets(
                f"recording {entry.id!r} yields {len(snips)} snippet(s) at "
                f"{params.snippet_seconds:g} s, need at least {min_snippets}"
            )
        sets.append(snips)
    return sets


def score_matrix(
    manifest: DatasetManifest,
    params: SnippetParams,
    sample: SampleSpec | None = None,
    n_jobs: int = 1,
) -> AbxScoreMatrix:
    """Score every ordered pair of recordings in a manifest.

    With ``sample`` set, each cell of the grid gets its own substream of the
    base seed, so the result is identical no matter in which order cells are
    computed. A failing cell aborts the whole run with the pair named.
    """
    if len(manifest) < 2:
        raise TooFewRecordings(f"manifest holds {len(manifest)} recording(s), need at least 2")
    sets = pool_manifest(manifest, params)
    ids = manifest.ids
    n = len(ids)

    directional: dict[tuple[int, int], AbxResult] = {}
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            try:
                if sample is None:
                    directional[(i, j)] = abx_directional_fast(
                        sets[i].vectors, sets[j].vectors, n_jobs=n_jobs
                    )
                else:
                    spec = SampleSpec(count=sample.count, seed=_pair_seed(sample.seed, i, j))
                    directional[(i, j)] = abx_directional(
                        sets[i].vectors, sets[j].vectors, sample=spec, n_jobs=n_jobs
                    )
            except AbxError as exc:
                raise _with_context(exc, f"pair ({ids[i]!r}, {ids[j]!r})") from exc

    symmetrized = {
        (i, j): (directional[(i, j)].score + directional[(j, i)].score) / 2.0
        for i in range(n)
        for j in range(i + 1, n)
    }

    diagonal: dict[int, float] = {}
    for i in range(n):
        if len(sets[i]) < 4:
            continue  # too short for a split-half self-score; leave the cell empty
        try:
            if sample is None:
                diagonal[i] = abx_diagonal(sets[i].vectors, n_jobs=n_jobs)
            else:
                spec = SampleSpec(count=sample.count, seed=_pair_seed(sample.seed, i, i))
                diagonal[i] = abx_diagonal(sets[i].vectors, sample=spec, n_jobs=n_jobs)
        except AbxError as exc:
            raise _with_context(exc, f"recording {ids[i]!r}") from exc

    return AbxScoreMatrix(
        recording_ids=ids,
        directional=directional,
        symmetrized=symmetrized,
        diagonal=diagonal,
        params=params,
        mode=MODE_FULL if sample is None else MODE_SAMPLE,
        max_triplets=None if sample is None else sample.count,
        seed=None if sample is None else sample.seed,
        dataset_name=manifest.dataset_name,
    )


# --- serialization -----------------------------------------------------------

def matrix_to_json_dict(matrix: AbxScoreMatrix) -> dict:
    ids = matrix.recording_ids
    return {
        "params": matrix.params_dict(),
        "recordings": list(ids),
        "directional": [
            {
                "a": ids[i],
                "b": ids[j],
                "score": res.score,
                "wins": res.wins,
                "ties": res.ties,
                "total": res.total_triplets,
            }
            for (i, j), res in sorted(matrix.directional.items())
        ],
        "symmetrized": [
            {"pair": [ids[i], ids[j]], "score": score}
            for (i, j), score in sorted(matrix.symmetrized.items())
        ],
        "diagonal": [
            {"id": ids[i], "score": score} for i, score in sorted(matrix.diagonal.items())
        ],
    }


def matrix_to_csv_text(matrix: AbxScoreMatrix) -> str:
    """Square CSV: symmetrized scores off the diagonal, self-scores (or n/a) on it."""
    ids = matrix.recording_ids
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["id", *ids])
    for i, rec_id in enumerate(ids):
        row: list[str] = [rec_id]
        for j in range(len(ids)):
            if i == j:
                row.append(repr(matrix.diagonal[i]) if i in matrix.diagonal else "n/a")
            else:
                row.append(repr(matrix.symmetrized_score(i, j)))
        writer.writerow(row)
    return buf.getvalue()


def _atomic_write_text(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    try:
        tmp.write_text(text, encoding="utf-8")
        os.replace(tmp, path)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def write_matrix_json(matrix: AbxScoreMatrix, path: str | Path) -> None:
    _atomic_write_text(Path(path), json.dumps(matrix_to_json_dict(matrix), indent=2) + "\n")


def write_matrix_csv(matrix: AbxScoreMatrix, path: str | Path) -> None:
    _atomic_write_text(Path(path), matrix_to_csv_text(matrix))


def _score_file_get(obj: dict, key: str, kind: type, where: str):
    if key not in obj:
        raise ScoreFileError(f"{where}: missing key {key!r}")
    value = obj[key]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind) or isinstance(value, bool):
        raise ScoreFileError(f"{where}: key {key!r} must be {kind.__name__}")
    return value


def read_matrix_json(path: str | Path) -> AbxScoreMatrix:
    """Load a score matrix written by ``write_matrix_json``."""
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ScoreFileError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ScoreFileError(f"{path}: top level must be an object")
    where = str(path)

    params_obj = _score_file_get(doc, "params", dict, where)
    recordings = _score_file_get(doc, "recordings", list, where)
    if not all(isinstance(r, str) for r in recordings):
        raise ScoreFileError(f"{where}: recordings must be strings")
    ids = tuple(recordings)
    if len(set(ids)) != len(ids):
        raise ScoreFileError(f"{where}: duplicate recording ids")
    index = {rec_id: i for i, rec_id in enumerate(ids)}

    mode = _score_file_get(params_obj, "mode", str, f"{where}: params")
    params = SnippetParams(
        snippet_seconds=_score_file_get(params_obj, "snippet_seconds", float, f"{where}: params"),
        pooling=_score_file_get(params_obj, "pooling", str, f"{where}: params"),
    )

    def resolve(rec_id, where_entry: str) -> int:
        if not isinstance(rec_id, str) or rec_id not in index:
            raise ScoreFileError(f"{where_entry}: unknown recording id {rec_id!r}")
        return index[rec_id]

    directional: dict[tuple[int, int], AbxResult] = {}
    for k, entry in enumerate(_score_file_get(doc, "directional", list, where)):
        loc = f"{where}: directional[{k}]"
        if not isinstance(entry, dict):
            raise ScoreFileError(f"{loc}: must be an object")
        i = resolve(entry.get("a"), loc)
        j = resolve(entry.get("b"), loc)
        if i == j:
            raise ScoreFileError(f"{loc}: a and b must differ")
        directional[(i, j)] = AbxResult(
            score=_score_file_get(entry, "score", float, loc),
            wins=_score_file_get(entry, "wins", int, loc),
            ties=_score_file_get(entry, "ties", int, loc),
            total_triplets=_score_file_get(entry, "total", int, loc),
            mode="sampled" if mode == MODE_SAMPLE else "full",
        )

    symmetrized: dict[tuple[int, int], float] = {}
    for k, entry in enumerate(_score_file_get(doc, "symmetrized", list, where)):
        loc = f"{where}: symmetrized[{k}]"
        if not isinstance(entry, dict):
            raise ScoreFileError(f"{loc}: must be an object")
        pair = _score_file_get(entry, "pair", list, loc)
        if len(pair) != 2:
            raise ScoreFileError(f"{loc}: pair must hold two ids")
        i, j = sorted((resolve(pair[0], loc), resolve(pair[1], loc)))
        if i == j:
            raise ScoreFileError(f"{loc}: pair ids must differ")
        symmetrized[(i, j)] = _score_file_get(entry, "score", float, loc)

    diagonal: dict[int, float] = {}
    for k, entry in enumerate(_score_file_get(doc, "diagonal", list, where)):
        loc = f"{where}: diagonal[{k}]"
        if not isinstance(entry, dict):
            raise ScoreFileError(f"{loc}: must be an object")
        i = resolve(entry.get("id"), loc)
        diagonal[i] = _score_file_get(entry, "score", float, loc)

    try:
        return AbxScoreMatrix(
            recording_ids=ids,
            directional=directional,
            symmetrized=symmetrized,
            diagonal=diagonal,
            params=params,
            mode=mode,
            max_triplets=params_obj.get("max_triplets"),
            seed=params_obj.get("seed"),
            dataset_name=params_obj.get("dataset", "") or "",
        )
    except ValueError as exc:
        raise ScoreFileError(f"{where}: {exc}") from exc


# --- metadata contrasts ------------------------------------------------------

@dataclass(frozen=True)
class ContrastCell:
    mean: float
    n_pairs: int


@dataclass(frozen=True)
class GroupContrast:
    """Symmetrized-score means split by the values of one metadata key."""

    key: str
    cross: dict[tuple[str, str], ContrastCell] = field(default_factory=dict)
    within: dict[str, ContrastCell] = field(default_factory=dict)


def group_contrast(matrix: AbxScoreMatrix, manifest: DatasetManifest, key: str) -> GroupContrast:
    """Mean symmetrized score for each pair of values of a metadata key.

    Recordings lacking the key are left out. Values held by a single
    recording appear in cross-value cells but have no within-value mean.
    """
    values: dict[int, str] = {}
    for i, rec_id in enumerate(matrix.recording_ids):
        meta = manifest.entry(rec_id).metadata
        if key in meta:
            values[i] = meta[key]
    if not values:
        raise UnknownKey(f"metadata key {key!r} appears in no recording of the matrix")
    if len(set(values.values())) < 2:
        only = next(iter(set(values.values())))
        raise SingleValue(f"metadata key {key!r} has the single value {only!r}")

    sums: dict[tuple[str, str], float] = {}
    counts: dict[tuple[str, str], int] = {}
    for (i, j), score in matrix.symmetrized.items():
        if i not in values or j not in values:
            continue
        pair = tuple(sorted((values[i], values[j])))
        sums[pair] = sums.get(pair, 0.0) + score
        counts[pair] = counts.get(pair, 0) + 1

    cross = {}
    within = {}
    for pair in sorted(sums):
        cell = ContrastCell(mean=sums[pair] / counts[pair], n_pairs=counts[pair])
        if pair[0] == pair[1]:
            within[pair[0]] = cell
        else:
            cross[pair] = cell
    return GroupContrast(key=key, cross=cross, within=within)
