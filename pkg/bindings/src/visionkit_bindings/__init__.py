"""Hand-written wrappers over the visionkit library.

Each wrapper checks its arguments before anything is computed and raises
a builtin TypeError or ValueError that names the offending argument, the
property it must satisfy, and what was actually passed.  Generated
interfaces cannot produce messages this precise, which is the reason the
wrappers are written one by one.

Contiguity policy: non-contiguous *input* arrays are copied to contiguous
temporaries (a silent performance cost, never an error); an `out` array
must already be C-contiguous, correctly shaped and typed, and must not
share memory with the input.

Every wrapped kernel releases the interpreter's global lock while it
computes, so the wrappers are safe and useful to call from worker
threads; there is no wrapper-level shared state.
"""

import numpy as np

import visionkit

__all__ = [
    "erode", "dilate", "median_filter", "gaussian_filter", "cwatershed",
    "distance_squared", "haralick", "lbp", "tas", "pftas",
    "zernike_moments", "wavelet_forward", "wavelet_inverse", "surf",
    "show_surf",
]

_KINDS = (np.uint8, np.uint16, np.int32, np.float32, np.float64)
_KIND_NAMES = "uint8, uint16, int32, float32, float64"


def _image(name, value, kinds=_KINDS, kind_names=_KIND_NAMES):
    """Validate one image argument; returns a C-contiguous view or copy."""
    if not isinstance(value, np.ndarray):
        raise TypeError(
            f"{name}: expected a numpy array, got {type(value).__name__}"
        )
    if value.ndim != 2:
        raise ValueError(f"{name}: expected a 2D array, got {value.ndim}D")
    if value.dtype not in kinds:
        raise TypeError(
            f"{name}: unsupported scalar kind {value.dtype}; "
            f"expected one of {kind_names}"
        )
    if value.shape[0] < 1 or value.shape[1] < 1:
        raise ValueError(f"{name}: image must be at least 1x1, got {value.shape}")
    if not value.flags.c_contiguous:
        # documented performance note: strided views are copied, not rejected
        return np.ascontiguousarray(value)
    return value


def _out(name, value, image):
    """Strictly validate an `out` argument (never copied, never coerced)."""
    if value is None:
        return None
    if not isinstance(value, np.ndarray):
        raise TypeError(
            f"{name}: expected a numpy array, got {type(value).__name__}"
        )
    if value.dtype != image.dtype:
        raise TypeError(
            f"{name}: scalar kind {value.dtype} does not match "
            f"input kind {image.dtype}"
        )
    if value.shape != image.shape:
        raise ValueError(
            f"{name}: shape {value.shape} does not match input shape {image.shape}"
        )
    if not value.flags.c_contiguous:
        raise ValueError(f"{name}: must be C-contiguous")
    if np.shares_memory(value, image):
        raise ValueError(f"{name}: must not share memory with the input image")
    return value


def _se(name, value):
    if value is None:
        return None
    if not isinstance(value, visionkit.StructuringElement):
        raise TypeError(
            f"{name}: expected a StructuringElement or None, "
            f"got {type(value).__name__}"
        )
    return value


def _number(name, value, minimum=None, strict=False):
    if isinstance(value, bool) or not isinstance(value, (int, float, np.integer,
                                                         np.floating)):
        raise TypeError(f"{name}: expected a number, got {type(value).__name__}")
    v = float(value)
    if minimum is not None:
        if strict and not v > minimum:
            raise ValueError(f"{name}: must be > {minimum}, got {value}")
        if not strict and not v >= minimum:
            raise ValueError(f"{name}: must be >= {minimum}, got {value}")
    return v


def _integer(name, value, minimum=None):
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise TypeError(f"{name}: expected an integer, got {type(value).__name__}")
    v = int(value)
    if minimum is not None and v < minimum:
        raise ValueError(f"{name}: must be >= {minimum}, got {value}")
    return v


def erode(image, se=None, out=None):
    """Grayscale erosion; see visionkit.erode."""
    image = _image("image", image)
    return visionkit.erode(image, _se("se", se), _out("out", out, image))


def dilate(image, se=None, out=None):
    """Grayscale dilation; see visionkit.dilate."""
    image = _image("image", image)
    return visionkit.dilate(image, _se("se", se), _out("out", out, image))


def median_filter(image, se=None, out=None):
    """Sliding-window median; see visionkit.median_filter."""
    image = _image("image", image)
    return visionkit.median_filter(image, _se("se", se), _out("out", out, image))


def gaussian_filter(image, sigma, out=None):
    """Separable Gaussian blur; see visionkit.gaussian_filter."""
    image = _image("image", image)
    sigma = _number("sigma", sigma, minimum=0.0, strict=True)
    return visionkit.gaussian_filter(image, sigma, _out("out", out, image))


def cwatershed(surface, markers, se=None):
    """Seeded watershed; see visionkit.cwatershed."""
    surface = _image("surface", surface)
    if not isinstance(markers, np.ndarray):
        raise TypeError(
            f"markers: expected a numpy array, got {type(markers).__name__}"
        )
    if markers.ndim != 2:
        raise ValueError(f"markers: expected a 2D array, got {markers.ndim}D")
    if markers.dtype.kind not in "iu":
        raise TypeError(
            f"markers: expected an integer label image, got kind {markers.dtype}"
        )
    if markers.shape != surface.shape:
        raise ValueError(
            f"markers: shape {markers.shape} does not match "
            f"surface shape {surface.shape}"
        )
    if not markers.flags.c_contiguous:
        markers = np.ascontiguousarray(markers)
    return visionkit.cwatershed(surface, markers, _se("se", se))


def distance_squared(binary):
    """Exact squared Euclidean distance transform; see visionkit."""
    return visionkit.distance_squared(_image("binary", binary))


def haralick(image):
    """52 texture statistics of a uint8 image; see visionkit.haralick."""
    return visionkit.haralick(_image("image", image, (np.uint8,), "uint8"))


def lbp(image, radius=1.0, points=8):
    """Local binary pattern histogram; see visionkit.lbp."""
    image = _image("image", image)
    radius = _number("radius", radius, minimum=1.0)
    points = _integer("points", points, minimum=4)
    return visionkit.lbp(image, radius, points)


def tas(image):
    """Threshold adjacency statistics of a uint8 image; see visionkit.tas."""
    return visionkit.tas(_image("image", image, (np.uint8,), "uint8"))


def pftas(image):
    """Parameter-free TAS of a uint8 image; see visionkit.pftas."""
    return visionkit.pftas(_image("image", image, (np.uint8,), "uint8"))


def zernike_moments(image, radius, degree=8):
    """Zernike moment magnitudes; see visionkit.zernike_moments."""
    image = _image("image", image)
    radius = _number("radius", radius, minimum=0.0, strict=True)
    degree = _integer("degree", degree, minimum=0)
    return visionkit.zernike_moments(image, radius, degree)


def wavelet_forward(image, kind="haar"):
    """Single-level 2D wavelet analysis of a float64 image."""
    image = _image("image", image, (np.float64,), "float64")
    if not isinstance(kind, str):
        raise TypeError(f"kind: expected a string, got {type(kind).__name__}")
    return visionkit.wavelet_forward(image, kind)


def wavelet_inverse(coeffs, kind="haar"):
    """Exact inverse of wavelet_forward."""
    coeffs = _image("coeffs", coeffs, (np.float64,), "float64")
    if not isinstance(kind, str):
        raise TypeError(f"kind: expected a string, got {type(kind).__name__}")
    return visionkit.wavelet_inverse(coeffs, kind)


def surf(image, nr_octaves=4, nr_scales=6, initial_step=2, threshold=None,
         upright=False):
    """SURF interest points with descriptors; see visionkit.surf."""
    image = _image("image", image)
    nr_octaves = _integer("nr_octaves", nr_octaves, minimum=1)
    nr_scales = _integer("nr_scales", nr_scales, minimum=3)
    initial_step = _integer("initial_step", initial_step, minimum=1)
    if threshold is None:
        return visionkit.surf(image, nr_octaves, nr_scales, initial_step,
                              upright=bool(upright))
    threshold = _number("threshold", threshold, minimum=0.0)
    return visionkit.surf(image, nr_octaves, nr_scales, initial_step,
                          threshold, upright=bool(upright))


def show_surf(image, points, cluster_ids=None, colors=None):
    """Render interest points as colored squares; see visionkit.show_surf."""
    image = _image("image", image)
    if not isinstance(points, (list, tuple)):
        raise TypeError(
            f"points: expected a list of interest points, "
            f"got {type(points).__name__}"
        )
    for p in points:
        if not isinstance(p, visionkit.InterestPoint):
            raise TypeError(
                f"points: expected InterestPoint entries, "
                f"got {type(p).__name__}"
            )
    if cluster_ids is not None:
        if not isinstance(cluster_ids, (list, tuple)):
            raise TypeError(
                f"cluster_ids: expected a list of integers or None, "
                f"got {type(cluster_ids).__name__}"
            )
        if len(cluster_ids) != len(points):
            raise ValueError(
                f"cluster_ids: length {len(cluster_ids)} does not match "
                f"{len(points)} points"
            )
    return visionkit.show_surf(image, points, cluster_ids, colors)
