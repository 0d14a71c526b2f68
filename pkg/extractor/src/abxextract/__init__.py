"""Dump transformer speech-encoder hidden states into the scoring toolkit's
embedding format."""
from .errors import (
    BadAudio,
    EnvironmentError_,
    ExtractError,
    InputError,
    LayerOutOfRange,
    MissingSidecarColumn,
    ModelUnavailable,
    NoInputAudio,
)
from .extract import (
    DEFAULT_MODEL,
    ChunkSpan,
    ExtractionConfig,
    ExtractResult,
    conv_frame_count,
    conv_geometry,
    extract,
    extract_manifest,
    plan_chunks,
    read_sidecar,
)
from .model import LoadedEncoder, load_encoder

__all__ = [
    "BadAudio",
    "ChunkSpan",
    "DEFAULT_MODEL",
    "EnvironmentError_",
    "ExtractError",
    "ExtractResult",
    "ExtractionConfig",
    "InputError",
    "LayerOutOfRange",
    "LoadedEncoder",
    "MissingSidecarColumn",
    "ModelUnavailable",
    "NoInputAudio",
    "conv_frame_count",
    "conv_geometry",
    "extract",
    "extract_manifest",
    "load_encoder",
    "plan_chunks",
    "read_sidecar",
]
__version__ = "0.1.0"
