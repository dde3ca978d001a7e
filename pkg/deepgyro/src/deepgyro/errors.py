class DeepGyroError(Exception):
    """Base class for deepgyro errors."""


class InvalidConfigError(DeepGyroError):
    """Network or training configuration out of range."""


class ManifestNotFoundError(DeepGyroError):
    """Dataset manifest path does not exist."""


class ShapeMismatchError(DeepGyroError):
    """Blur-field raster does not match the image raster."""


class CheckpointMismatchError(DeepGyroError):
    """Checkpoint was trained with an incompatible configuration."""


class MissingFieldError(DeepGyroError):
    """Gyro-conditioned model invoked without a blur field."""


class BlfFormatError(DeepGyroError):
    """Blur-field file has a bad magic, header or payload size."""
