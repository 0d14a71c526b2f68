"""ABX discriminability toolkit for pooled speech-representation snippets."""

from .audio import AudioBuffer, read_wav, write_wav
from .embedding_io import (
    EmbeddingSequence,
    embedding_bytes,
    parse_embedding_bytes,
    read_embedding_file,
    read_embedding_header,
    write_embedding_file,
)
from .manifest import DatasetManifest, RecordingEntry, load_manifest
from .matrix import (
    AbxScoreMatrix,
    GroupContrast,
    group_contrast,
    read_matrix_json,
    score_matrix,
    write_matrix_csv,
    write_matrix_json,
)
from .pooling import SnippetParams, SnippetPooler, SnippetSet, slice_and_pool
from .reporting import SummaryStats, render_heatmap, summarize, write_summary_csv
from .reverb import ReverbAugmenter, ReverbParams, apply_reverb
from .scoring import (
    AbxResult,
    SampleSpec,
    abx_diagonal,
    abx_directional,
    abx_directional_fast,
    abx_within_set,
    cosine_distance,
    cosine_distance_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "AbxResult",
    "AbxScoreMatrix",
    "AudioBuffer",
    "DatasetManifest",
    "EmbeddingSequence",
    "GroupContrast",
    "RecordingEntry",
    "ReverbAugmenter",
    "ReverbParams",
    "SampleSpec",
    "SnippetParams",
    "SnippetPooler",
    "SnippetSet",
    "SummaryStats",
    "abx_diagonal",
    "abx_directional",
    "abx_directional_fast",
    "abx_within_set",
    "apply_reverb",
    "cosine_distance",
    "cosine_distance_matrix",
    "embedding_bytes",
    "group_contrast",
    "load_manifest",
    "parse_embedding_bytes",
    "read_embedding_file",
    "read_embedding_header",
    "read_matrix_json",
    "read_wav",
    "render_heatmap",
    "score_matrix",
    "slice_and_pool",
    "summarize",
    "write_embedding_file",
    "write_matrix_csv",
    "write_matrix_json",
    "write_summary_csv",
    "write_wav",
]
