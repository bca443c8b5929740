"""Exception types raised by visionkit.

Every validation failure raises a subclass of VisionkitError that also
derives from the matching builtin (TypeError for scalar-kind problems,
ValueError for shape/content problems) so callers can catch either.
"""


class VisionkitError(Exception):
    pass


class KindMismatchError(VisionkitError, TypeError):
    """Scalar kind of an argument does not match what the operation needs."""


class ShapeMismatchError(VisionkitError, ValueError):
    """Two arrays that must share a shape do not."""


class NotContiguousError(VisionkitError, ValueError):
    """An `out` argument must be C-contiguous and is not."""


class EmptyStructuringElementError(VisionkitError, ValueError):
    """Structuring element has no active cells."""


class NoMarkersError(VisionkitError, ValueError):
    """Watershed marker image has no nonzero pixel."""


class AllForegroundError(VisionkitError, ValueError):
    """Distance transform input has no background pixel."""


class EvenKernelError(VisionkitError, ValueError):
    """Convolution kernel must have odd dimensions."""


class NonPositiveSigmaError(VisionkitError, ValueError):
    """Gaussian sigma must be > 0."""


class DegenerateImageError(VisionkitError, ValueError):
    """Image too small for the requested feature (e.g. single pixel)."""


class EmptyDiskError(VisionkitError, ValueError):
    """No pixel falls inside the Zernike unit disk."""


class ZeroImageError(VisionkitError, ValueError):
    """Image has zero total intensity where a normalizer is required."""


class NoForegroundError(VisionkitError, ValueError):
    """Operation needs at least one foreground (nonzero) pixel."""


class OddDimensionsError(VisionkitError, ValueError):
    """Wavelet transforms need even image dimensions."""


class ImageTooSmallError(VisionkitError, ValueError):
    """Image smaller than the smallest detector filter."""


class PointOutOfBoundsError(VisionkitError, ValueError):
    """Interest point lies outside the image."""


class LengthMismatchError(VisionkitError, ValueError):
    """Parallel sequences have different lengths."""


class TooFewVerticesError(VisionkitError, ValueError):
    """Polygon fill needs at least three vertices."""


class TooFewVectorsError(VisionkitError, ValueError):
    """k-means needs at least k vectors."""


class MalformedFileError(VisionkitError, ValueError):
    """Netpbm file violates the format; carries the byte offset."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class UnsupportedMaxvalError(VisionkitError, ValueError):
    """Netpbm maxval outside the supported range."""
