"""Exception types raised across the toolkit."""


class StereoMiscalError(Exception):
    """Base class for all toolkit errors."""


class NotARotation(StereoMiscalError):
    """Matrix is too far from orthonormal to be treated as a rotation."""


class NoConvergence(StereoMiscalError):
    """Iterative undistortion failed to reach the required residual."""


class BehindCamera(StereoMiscalError):
    """Point has non-positive depth and cannot be projected."""


class BehindPlane(StereoMiscalError):
    """Rectified ray points away from the virtual image plane."""


class DegenerateBaseline(StereoMiscalError):
    """Baseline has no x-y component; the rectified basis is undefined."""


class SizeMismatch(StereoMiscalError):
    """Image dimensions do not match the expected size."""


class NoValidRect(StereoMiscalError):
    """No aspect-preserving rectangle of acceptable width fits the mask."""


class ZeroThreshold(StereoMiscalError):
    """Normalization constant is numerically zero."""


class EmptyMatches(StereoMiscalError):
    """Metric requires at least one correspondence."""


class LengthMismatch(StereoMiscalError):
    """Paired vectors have different lengths."""


class DegenerateInput(StereoMiscalError):
    """Statistic is undefined for the given input (e.g. a constant vector)."""


class MissingIds(StereoMiscalError):
    """Prediction ids do not line up with manifest ids."""


class ConfigError(StereoMiscalError):
    """Pipeline configuration failed validation."""


class IoError(StereoMiscalError):
    """File could not be read or written."""
