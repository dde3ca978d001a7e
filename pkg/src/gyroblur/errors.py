"""Exception hierarchy shared by all gyroblur modules.

Every malformed input or domain violation maps to one of these classes so
callers (and the CLI exit-code table) can dispatch on category instead of
parsing messages.
"""


class GyroBlurError(Exception):
    """Base class for all errors raised by this package."""


# --- input format errors -----------------------------------------------------

class FormatError(GyroBlurError):
    """A byte stream or document does not match its declared format."""


class MalformedLineError(FormatError):
    """A gyro CSV data line has the wrong column count or non-numeric fields."""


class NonMonotonicTimestampsError(FormatError):
    """Gyro CSV timestamps are not strictly increasing."""


class EmptyTrackError(FormatError):
    """A gyro log contained no data lines."""


class MissingFieldError(FormatError):
    """A required key is absent from a JSON metadata document."""


class InvalidValueError(FormatError):
    """A metadata field is present but fails validation (e.g. t_e <= 0)."""


class BlfFormatError(FormatError):
    """A blur-field file has a bad magic, header or truncated payload."""


# --- domain / numeric errors -------------------------------------------------

class DomainError(GyroBlurError):
    """Inputs are well-formed but outside an operation's domain."""


class OutOfRangeError(DomainError):
    """A query time or window lies outside the gyro track span."""


class InvalidStepError(DomainError):
    """Integration step size is not positive."""


class RowOutOfRangeError(DomainError):
    """Row index outside [0, rows)."""


class SingularResultError(DomainError):
    """A computed homography is numerically singular."""


class PointAtInfinityError(DomainError):
    """Dehomogenization hit a vanishing third coordinate."""


class DimensionMismatchError(DomainError):
    """Image/field raster dimensions disagree."""


class InvalidItersError(DomainError):
    """Iteration count for the deconvolution solver is < 1."""


class TrackTooShortError(DomainError):
    """Gyro track cannot contain a randomly placed exposure window."""


class TooSmallError(DomainError):
    """Image smaller than the metric's minimum window size."""


class IoError(GyroBlurError):
    """File system level failure (missing path, unreadable image)."""


class NoImagesFoundError(IoError):
    """Dataset generation found no usable images in the input directory."""


class NoTracksFoundError(IoError):
    """Dataset generation found no usable gyro logs in the input directory."""
