"""Whole-recording hidden-state extraction with chunked inference.

Long audio cannot go through the encoder in one pass, so it is cut into
chunks whose boundaries sit on multiples of the convolutional stride. Each
chunk is fed with extra context on both sides and only the frames it owns
are kept, so the concatenation has exactly the frame count a single pass
over the full signal would produce: no duplicates, no gaps. Frames near a
boundary still see slightly different attention context than an unchunked
pass would give them; the chunk and context lengths trade that off against
memory.
"""
import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .abxe_out import write_embedding, write_manifest
from .audio_in import load_wav_mono
from .errors import BadAudio, LayerOutOfRange, MissingSidecarColumn, NoInputAudio
from .model import LoadedEncoder, load_encoder

log = logging.getLogger("abxextract")

DEFAULT_MODEL = "facebook/wav2vec2-large-xlsr-53"


@dataclass(frozen=True)
class ExtractionConfig:
    model: str = DEFAULT_MODEL
    layer_index: int = 21
    sample_rate_hz: int = 16000
    device: str = "cpu"
    chunk_seconds: float = 30.0
    context_seconds: float = 2.0

    def __post_init__(self) -> None:
        if self.sample_rate_hz != 16000:
            raise ValueError("the encoder family operates at 16000 Hz input")
        if self.layer_index < 0:
            raise ValueError("layer_index must be >= 0")
        if not self.chunk_seconds > 0:
            raise ValueError("chunk_seconds must be positive")
        if self.context_seconds < 0:
            raise ValueError("context_seconds must be >= 0")


@dataclass(frozen=True)
class ExtractResult:
    n_frames: int
    dim: int
    frame_rate_hz: float


def conv_frame_count(n_samples: int, kernels, strides) -> int:
    """Output length of the stacked valid convolutions for a given input."""
    n = n_samples
    for kernel, stride in zip(kernels, strides):
        if n < kernel:
            return 0
        n = (n - kernel) // stride + 1
    return n


def conv_geometry(kernels, strides) -> tuple[int, int]:
    """(total stride, receptive field) in samples; frame j covers
    [j * stride, j * stride + receptive)."""
    total = 1
    receptive = kernels[0]
    for kernel, stride in zip(kernels[1:], strides[:-1]):
        total *= stride
        receptive += (kernel - 1) * total
    total *= strides[-1]
    return total, receptive


@dataclass(frozen=True)
class ChunkSpan:
    sample_lo: int
    sample_hi: int
    keep_lo: int  # frame offsets inside this chunk's output
    keep_hi: int


def plan_chunks(n_samples: int, kernels, strides, frames_per_chunk: int,
                context_samples: int) -> list[ChunkSpan]:
    """Partition the full frame range into owned, stride-aligned spans."""
    total_frames = conv_frame_count(n_samples, kernels, strides)
    stride, receptive = conv_geometry(kernels, strides)
    context_frames = math.ceil(context_samples / stride)
    spans = []
    for f_lo in range(0, total_frames, frames_per_chunk):
        f_hi = min(f_lo + frames_per_chunk, total_frames)
        a_frame = max(0, f_lo - context_frames)
        sample_lo = a_frame * stride
        sample_hi = min(n_samples, (f_hi - 1) * stride + receptive + context_samples)
        spans.append(ChunkSpan(sample_lo, sample_hi, f_lo - a_frame, f_hi - a_frame))
    return spans


def extract(audio_path: str | Path, config: ExtractionConfig,
            out_path: str | Path, encoder: LoadedEncoder | None = None) -> ExtractResult:
    """Encode one WAV file and write its frames; returns what was written.

    Pass a preloaded ``encoder`` when processing many files; loading is by
    far the slowest step.
    """
    if encoder is None:
        encoder = load_encoder(config.model, config.device)
    if not 0 <= config.layer_index <= encoder.num_layers:
        raise LayerOutOfRange(
            f"layer_index {config.layer_index} outside 0..{encoder.num_layers}"
        )

    samples = load_wav_mono(audio_path, config.sample_rate_hz)
    n = len(samples)
    kernels, strides = encoder.conv_kernel, encoder.conv_stride
    total_frames = conv_frame_count(n, kernels, strides)
    if total_frames == 0:
        raise BadAudio(f"{audio_path}: too short to produce a single frame")

    stride, _ = conv_geometry(kernels, strides)
    frames_per_chunk = max(1, int(config.chunk_seconds * config.sample_rate_hz) // stride)
    context_samples = int(round(config.context_seconds * config.sample_rate_hz))
    spans = plan_chunks(n, kernels, strides, frames_per_chunk, context_samples)

    pieces = []
    for span in spans:
        chunk = encoder.hidden_frames(
            samples[span.sample_lo:span.sample_hi], config.layer_index
        )
        piece = chunk[span.keep_lo:span.keep_hi]
        if piece.shape[0] != span.keep_hi - span.keep_lo:
            raise RuntimeError(
                f"{audio_path}: encoder produced {chunk.shape[0]} frames for a chunk, "
                f"expected at least {span.keep_hi}"
            )
        pieces.append(piece)
    frames = np.concatenate(pieces, axis=0)
    assert frames.shape[0] == total_frames

    frame_rate_hz = total_frames * config.sample_rate_hz / n
    write_embedding(frames, frame_rate_hz, out_path)
    return ExtractResult(
        n_frames=total_frames, dim=frames.shape[1], frame_rate_hz=frame_rate_hz
    )


def read_sidecar(path: str | Path) -> dict[str, dict[str, str]]:
    """CSV with an 'id' column plus arbitrary metadata columns."""
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or "id" not in reader.fieldnames:
            raise MissingSidecarColumn(f"{path}: sidecar needs an 'id' column")
        table: dict[str, dict[str, str]] = {}
        for row in reader:
            rec_id = (row.get("id") or "").strip()
            if not rec_id:
                continue
            if rec_id in table:
                log.warning("sidecar %s: duplicate id %r, keeping the last row", path, rec_id)
            table[rec_id] = {
                key: (value if value is not None else "")
                for key, value in row.items()
                if key != "id" and key is not None
            }
        return table


def extract_manifest(in_dir: str | Path, out_dir: str | Path,
                     config: ExtractionConfig, sidecar: str | Path | None = None,
                     dataset_name: str | None = None,
                     encoder: LoadedEncoder | None = None) -> Path:
    """Encode every WAV in a directory and write a manifest next to the
    embeddings. Returns the manifest path."""
    in_dir = Path(in_dir)
    out_dir = Path(out_dir)
    wavs = sorted(in_dir.glob("*.wav"))
    if not wavs:
        raise NoInputAudio(f"{in_dir}: no .wav files")
    metadata_by_id = read_sidecar(sidecar) if sidecar is not None else None

    if encoder is None:
        encoder = load_encoder(config.model, config.device)
    out_dir.mkdir(parents=True, exist_ok=True)

    entries = []
    for wav in wavs:
        rec_id = wav.stem
        extract(wav, config, out_dir / f"{rec_id}.abxe", encoder=encoder)
        metadata: dict[str, str] = {}
        if metadata_by_id is not None:
            if rec_id in metadata_by_id:
                metadata = metadata_by_id[rec_id]
            else:
                log.warning("no sidecar row for %r, emitting empty metadata", rec_id)
        entries.append(
            {"id": rec_id, "embedding_path": f"{rec_id}.abxe", "metadata": metadata}
        )
    if metadata_by_id is not None:
        for orphan in sorted(set(metadata_by_id) - {w.stem for w in wavs}):
            log.warning("sidecar row %r matches no WAV file", orphan)

    manifest_path = out_dir / "manifest.json"
    write_manifest(dataset_name or in_dir.name, entries, manifest_path)
    return manifest_path
