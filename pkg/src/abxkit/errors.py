"""Exception taxonomy.

Two broad categories drive the CLI exit codes: ``DataError`` (malformed or
missing inputs, exit 3) and ``ComputeError`` (inputs that are well-formed but
unusable for the requested computation, exit 4).
"""


class AbxError(Exception):
    """Base class for all errors raised by this package."""


class DataError(AbxError):
    """Input files or byte streams that cannot be parsed or located."""


class ComputeError(AbxError):
    """Valid inputs that violate a precondition of the requested operation."""


# --- embedding file format ---------------------------------------------------

class EmbeddingFormatError(DataError):
    """A .abxe file or byte string violates the on-disk format."""


class BadMagic(EmbeddingFormatError):
    pass


class UnsupportedVersion(EmbeddingFormatError):
    pass


class SizeMismatch(EmbeddingFormatError):
    pass


class NonFiniteValue(EmbeddingFormatError):
    pass


class ZeroDim(EmbeddingFormatError):
    pass


class BadFrameRate(EmbeddingFormatError):
    # not part of the original error set; a frame rate <= 0 is otherwise
    # representable in the header and must still be rejected
    pass


class IoFailure(DataError):
    """An OS-level read or write failed."""


# --- manifest ----------------------------------------------------------------

class ManifestError(DataError):
    pass


class ParseError(ManifestError):
    pass


class DuplicateRecordingId(ManifestError):
    pass


class MissingEmbeddingFile(ManifestError):
    pass


class ScoreFileError(DataError):
    """A score-matrix JSON file is malformed or missing required fields."""


# --- WAV audio ---------------------------------------------------------------

class WavFormatError(DataError):
    pass


class CorruptHeader(WavFormatError):
    pass


class UnsupportedEncoding(WavFormatError):
    pass


class UnsupportedChannelCount(WavFormatError):
    pass


class EmptyAudio(ComputeError):
    pass


# --- snippet pooling ---------------------------------------------------------

class SnippetLongerThanFrame(ComputeError):
    """Requested snippet duration is shorter than a single frame."""


class SnippetLongerThanRecording(ComputeError):
    """The recording does not contain a single full snippet window."""


class ZeroNormVector(ComputeError):
    """A pooled snippet vector has zero Euclidean norm."""


# --- scoring -----------------------------------------------------------------

class DimMismatch(ComputeError):
    pass


class ZeroNorm(ComputeError):
    pass


class TooFewSnippets(ComputeError):
    pass


class TooFewRecordings(ComputeError):
    pass


class UnknownKey(ComputeError):
    pass


class SingleValue(ComputeError):
    pass


class EmptyGroup(ComputeError):
    pass
