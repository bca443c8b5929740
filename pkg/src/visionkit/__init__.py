"""visionkit: stateless 2D image processing and computer vision.

Images are plain 2D numpy arrays (uint8, uint16, int32, float32 or
float64).  Every operation is a pure function of its arguments; results
go into a freshly allocated array or a caller-provided contiguous `out`.
"""

from . import errors
from .core import (
    BorderMode,
    StructuringElement,
    convert,
    make_box,
    make_cross_3x3,
    neighborhood_iter,
    validate_out,
)
from .morphology import close, dilate, erode, open
from .watershed import cwatershed, distance_squared
from .filters import convolve, disc_se, gaussian_filter, median_filter, sobel
from .features import cooccurrence, haralick, lbp, pftas, tas, zernike_moments
from .wavelets import wavelet_forward, wavelet_inverse
from .surf import (
    InterestPoint,
    integral_image,
    points_to_array,
    show_surf,
    surf,
    surf_descriptors,
    surf_detect,
)
from .polygon import convex_hull, fill_polygon, hull_vertices
from .imageio import as_grey, read_pgm, read_ppm, write_pgm, write_ppm

__version__ = "0.1.0"
