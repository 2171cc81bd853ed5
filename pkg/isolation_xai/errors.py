"""Exception types raised by the library.

Every error carries a short ``kind`` tag. The CLI prints it on the single
error line it emits, so scripts can branch on it without parsing messages.
"""


class IsoXaiError(ValueError):
    kind = "error"

    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message


class DatasetError(IsoXaiError):
    kind = "dataset"


class ConfigError(IsoXaiError):
    kind = "config"


class ForestError(IsoXaiError):
    kind = "forest"


class ModelFileError(IsoXaiError):
    kind = "model_file"


class ExplainError(IsoXaiError):
    kind = "explain"


class MetricError(IsoXaiError):
    kind = "metric"


class OutputError(IsoXaiError):
    kind = "output"
