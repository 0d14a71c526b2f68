"""Error taxonomy for the extraction pipeline.

InputError covers problems with the audio or sidecar files handed in;
EnvironmentError_ covers the model/runtime side. The CLI maps them to exit
codes 3 and 4 respectively.
"""


class ExtractError(Exception):
    """Base class for everything raised on purpose by this package."""


class InputError(ExtractError):
    pass


class BadAudio(InputError):
    """An audio file is missing, unreadable, or unusable (too short, bad encoding)."""


class NoInputAudio(InputError):
    """An input directory contains no WAV files."""


class MissingSidecarColumn(InputError):
    """The sidecar CSV lacks the required 'id' column."""


class EnvironmentError_(ExtractError):
    pass


class ModelUnavailable(EnvironmentError_):
    """The requested encoder checkpoint could not be loaded."""


class LayerOutOfRange(EnvironmentError_):
    """layer_index does not exist in the loaded encoder."""
