"""Core conventions shared by every operation.

Images are plain 2D numpy arrays of one of five supported scalar kinds
(uint8, uint16, int32, float32, float64).  Operations never keep global
state; anything writable is passed in explicitly through an `out`
argument, which must be a contiguous array of the right shape and kind.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (
    EmptyStructuringElementError,
    KindMismatchError,
    NotContiguousError,
    ShapeMismatchError,
)

#: Scalar kinds every operation accepts, in canonical order.
SUPPORTED_KINDS = (
    np.dtype(np.uint8),
    np.dtype(np.uint16),
    np.dtype(np.int32),
    np.dtype(np.float32),
    np.dtype(np.float64),
)

_KIND_NAMES = {
    np.dtype(np.uint8): "U8",
    np.dtype(np.uint16): "U16",
    np.dtype(np.int32): "I32",
    np.dtype(np.float32): "F32",
    np.dtype(np.float64): "F64",
}


class BorderMode(Enum):
    """How neighborhood accesses outside the image are resolved."""

    EXTEND_NEAREST = "nearest"


def kind_name(dtype):
    return _KIND_NAMES.get(np.dtype(dtype), str(np.dtype(dtype)))


def kind_bounds(dtype):
    """(min, max) representable value of a scalar kind, as floats.

    Floats get infinities: saturating arithmetic degenerates to ordinary
    arithmetic for floating point kinds.
    """
    dtype = np.dtype(dtype)
    if dtype.kind in "ui":
        info = np.iinfo(dtype)
        return float(info.min), float(info.max)
    return -np.inf, np.inf


def check_image(img, name="image"):
    """Validate that `img` is a supported 2D image; returns it unchanged."""
    if not isinstance(img, np.ndarray):
        raise KindMismatchError(f"{name}: expected a numpy array, got {type(img).__name__}")
    if img.ndim != 2:
        raise ShapeMismatchError(f"{name}: expected a 2D array, got {img.ndim}D")
    if img.dtype not in SUPPORTED_KINDS:
        raise KindMismatchError(
            f"{name}: unsupported scalar kind {img.dtype}; "
            f"supported: {', '.join(kind_name(k) for k in SUPPORTED_KINDS)}"
        )
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise ShapeMismatchError(f"{name}: image must be at least 1x1, got {img.shape}")
    return img


def convert(img, kind):
    """Convert an image to another scalar kind.

    Float to integer truncates toward zero, then clamps to the target
    range, so the conversion is total.  Widening integer conversions are
    exact; narrowing ones clamp.
    """
    check_image(img)
    kind = np.dtype(kind)
    if kind not in SUPPORTED_KINDS:
        raise KindMismatchError(f"target kind {kind} not supported")
    if img.dtype == kind:
        return img.copy()
    if kind.kind == "f":
        return img.astype(kind)
    info = np.iinfo(kind)
    vals = np.trunc(img.astype(np.float64))
    np.clip(vals, info.min, info.max, out=vals)
    return vals.astype(kind)


@dataclass(frozen=True)
class StructuringElement:
    """A small 2D mask defining a pixel neighborhood.

    `weights` (grayscale morphology) is defined wherever `mask` is true
    and ignored elsewhere.  `center` is the anchor cell; offsets are
    relative to it.  Even-sized masks anchor at floor(extent / 2).
    """

    mask: np.ndarray
    weights: np.ndarray = None
    center: tuple = None

    def __post_init__(self):
        mask = np.asarray(self.mask, dtype=bool)
        if mask.ndim != 2 or not mask.any():
            raise EmptyStructuringElementError(
                "structuring element must be a 2D mask with at least one true cell"
            )
        object.__setattr__(self, "mask", mask)
        weights = self.weights
        if weights is None:
            weights = np.zeros(mask.shape, dtype=np.float64)
        else:
            weights = np.asarray(weights, dtype=np.float64)
            if weights.shape != mask.shape:
                raise ShapeMismatchError(
                    f"weights shape {weights.shape} != mask shape {mask.shape}"
                )
        object.__setattr__(self, "weights", weights)
        center = self.center
        if center is None:
            center = (mask.shape[0] // 2, mask.shape[1] // 2)
        center = (int(center[0]), int(center[1]))
        if not (0 <= center[0] < mask.shape[0] and 0 <= center[1] < mask.shape[1]):
            raise ShapeMismatchError(f"center {center} outside mask bounds {mask.shape}")
        object.__setattr__(self, "center", center)

    def offsets(self):
        """(K, 2) int64 array of (dr, dc) offsets of the true cells."""
        rr, cc = np.nonzero(self.mask)
        out = np.empty((rr.size, 2), dtype=np.int64)
        out[:, 0] = rr - self.center[0]
        out[:, 1] = cc - self.center[1]
        return out

    def cell_weights(self):
        """Weights of the true cells, aligned with offsets()."""
        rr, cc = np.nonzero(self.mask)
        return self.weights[rr, cc].astype(np.float64)

    def reflected(self):
        """The element reflected about its center (offsets negated)."""
        mask = self.mask[::-1, ::-1].copy()
        weights = self.weights[::-1, ::-1].copy()
        h, w = mask.shape
        center = (h - 1 - self.center[0], w - 1 - self.center[1])
        return StructuringElement(mask, weights, center)

    @property
    def size(self):
        return int(self.mask.sum())


def make_cross_3x3():
    """The default neighborhood: a 3x3 cross (center plus its 4-neighbors)."""
    mask = np.array(
        [[False, True, False], [True, True, True], [False, True, False]]
    )
    return StructuringElement(mask)


def make_box(size=3):
    """A size x size all-true element, zero weights."""
    if size < 1:
        raise EmptyStructuringElementError("box size must be >= 1")
    return StructuringElement(np.ones((size, size), dtype=bool))


def validate_out(out, shape, kind, name="out"):
    """Check that an `out` array is contiguous, shape- and kind-matching."""
    if not isinstance(out, np.ndarray):
        raise KindMismatchError(f"{name}: expected a numpy array, got {type(out).__name__}")
    if not out.flags.c_contiguous:
        raise NotContiguousError(f"{name}: must be a contiguous array")
    if out.shape != tuple(shape):
        raise ShapeMismatchError(f"{name}: shape {out.shape} != required {tuple(shape)}")
    if out.dtype != np.dtype(kind):
        raise KindMismatchError(
            f"{name}: scalar kind {kind_name(out.dtype)} != required {kind_name(kind)}"
        )


def clamp_index(i, n):
    """Resolve a possibly out-of-bounds index to the nearest valid one."""
    if i < 0:
        return 0
    if i >= n:
        return n - 1
    return i


def neighborhood_iter(img, se, mode=BorderMode.EXTEND_NEAREST):
    """Iterate over every pixel in row-major order, yielding its neighborhood.

    Yields ((row, col), values) where `values` is a 1D float64 array of the
    neighbor values under the structuring element, border accesses resolved
    to the nearest in-bounds pixel.  This is the generic (slow) path; the
    specialized kernels reproduce it bit for bit.
    """
    check_image(img)
    if not isinstance(se, StructuringElement):
        raise EmptyStructuringElementError("se must be a StructuringElement")
    if mode is not BorderMode.EXTEND_NEAREST:
        raise ValueError(f"unsupported border mode {mode}")
    h, w = img.shape
    offs = se.offsets()
    values = np.empty(len(offs), dtype=np.float64)
    for r in range(h):
        for c in range(w):
            for k, (dr, dc) in enumerate(offs):
                values[k] = img[clamp_index(r + dr, h), clamp_index(c + dc, w)]
            yield (r, c), values
