"""Dataset manifests: recording IDs, embedding paths, free-form metadata.

A manifest is a UTF-8 JSON file::

    {"dataset": "...",
     "recordings": [{"id": "...", "embedding_path": "...",
                     "metadata": {"key": "value", ...}}, ...]}

Embedding paths are resolved relative to the directory containing the
manifest file.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .embedding_io import read_embedding_header
from .errors import DuplicateRecordingId, MissingEmbeddingFile, ParseError


@dataclass(frozen=True)
class RecordingEntry:
    id: str
    embedding_path: str
    metadata: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class DatasetManifest:
    dataset_name: str
    recordings: tuple[RecordingEntry, ...]
    root: Path

    def __len__(self) -> int:
        return len(self.recordings)

    def __iter__(self):
        return iter(self.recordings)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(entry.id for entry in self.recordings)

    def entry(self, rec_id: str) -> RecordingEntry:
        for entry in self.recordings:
            if entry.id == rec_id:
                return entry
        raise KeyError(rec_id)

    def embedding_file(self, entry: RecordingEntry | str) -> Path:
        if isinstance(entry, str):
            entry = self.entry(entry)
        return self.root / entry.embedding_path


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ParseError(message)


def load_manifest(path: str | Path, check_files: bool = True) -> DatasetManifest:
    """Load and validate a manifest file.

    With ``check_files`` (the default) every referenced embedding file must
    exist and carry a valid header of the right size; payload values are
    checked when the file is actually read.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read manifest {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: not valid JSON: {exc}") from exc

    _require(isinstance(doc, dict), f"{path}: top level must be a JSON object")
    _require(isinstance(doc.get("dataset"), str), f"{path}: 'dataset' must be a string")
    _require(isinstance(doc.get("recordings"), list), f"{path}: 'recordings' must be a list")

    root = path.parent
    entries: list[RecordingEntry] = []
    seen: set[str] = set()
    for pos, rec in enumerate(doc["recordings"]):
        where = f"{path}: recordings[{pos}]"
        _require(isinstance(rec, dict), f"{where} must be an object")
        rec_id = rec.get("id")
        _require(isinstance(rec_id, str) and rec_id != "", f"{where}: 'id' must be a non-empty string")
        if rec_id in seen:
            raise DuplicateRecordingId(f"{where}: id {rec_id!r} appears more than once")
        seen.add(rec_id)
        emb = rec.get("embedding_path")
        _require(isinstance(emb, str) and emb != "", f"{where}: 'embedding_path' must be a non-empty string")
        metadata = rec.get("metadata", {})
        _require(isinstance(metadata, dict), f"{where}: 'metadata' must be an object")
        for key, value in metadata.items():
            _require(isinstance(key, str) and key != "", f"{where}: metadata keys must be non-empty strings")
            _require(isinstance(value, str), f"{where}: metadata value for {key!r} must be a string")
        entries.append(RecordingEntry(id=rec_id, embedding_path=emb, metadata=dict(metadata)))

    manifest = DatasetManifest(
        dataset_name=doc["dataset"], recordings=tuple(entries), root=root
    )
    if check_files:
        for entry in manifest:
            target = manifest.embedding_file(entry)
            if not target.is_file():
                raise MissingEmbeddingFile(
                    f"{path}: recording {entry.id!r} references missing file {target}"
                )
            read_embedding_header(target)
    return manifest
