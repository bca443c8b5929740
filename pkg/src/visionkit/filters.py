"""Convolution, Gaussian smoothing, Sobel edges, and median filtering."""

import math

import numba
import numpy as np

from . import core
from .core import StructuringElement
from .errors import EvenKernelError, NonPositiveSigmaError


def _edge_pad(img, rh, rw):
    return np.pad(img.astype(np.float64, copy=False), ((rh, rh), (rw, rw)), mode="edge")


def convolve(img, kernel, out=None):
    """True 2D convolution (kernel flipped) with nearest-extended borders.

    The kernel must be odd-sized; the result is always float64.
    """
    core.check_image(img)
    kernel = np.asarray(kernel, dtype=np.float64)
    if kernel.ndim != 2 or kernel.shape[0] % 2 == 0 or kernel.shape[1] % 2 == 0:
        raise EvenKernelError(f"kernel must be 2D with odd dimensions, got {kernel.shape}")
    if not np.all(np.isfinite(kernel)):
        raise ValueError("kernel: all values must be finite")
    if out is None:
        out = np.zeros(img.shape, dtype=np.float64)
    else:
        core.validate_out(out, img.shape, np.float64)
        out[:] = 0.0
    kh, kw = kernel.shape
    rh, rw = kh // 2, kw // 2
    h, w = img.shape
    padded = _edge_pad(img, rh, rw)
    # out[p] = sum_j kernel[j] * img[p - offset_j], offset of cell (i, j)
    # being (i - rh, j - rw); in padded coordinates that is a slice
    # starting at (2*rh - i, 2*rw - j).
    for i in range(kh):
        for j in range(kw):
            if kernel[i, j] == 0.0:
                continue
            r0 = 2 * rh - i
            c0 = 2 * rw - j
            out += kernel[i, j] * padded[r0:r0 + h, c0:c0 + w]
    return out


def gaussian_kernel_1d(sigma):
    """Normalized 1D Gaussian taps, truncated at radius ceil(4*sigma)."""
    if not sigma > 0:
        raise NonPositiveSigmaError(f"sigma must be > 0, got {sigma}")
    radius = int(math.ceil(4.0 * sigma))
    t = np.arange(-radius, radius + 1, dtype=np.float64)
    g = np.exp(-(t * t) / (2.0 * sigma * sigma))
    return g / g.sum()


def gaussian_filter(img, sigma, out=None):
    """Separable Gaussian smoothing; float64 output, nearest-extended borders."""
    g = gaussian_kernel_1d(sigma)
    rows = convolve(img, g[np.newaxis, :])
    return convolve(rows, g[:, np.newaxis], out=out)


_SOBEL_X = np.array([[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]]) / 8.0


@numba.njit(nogil=True, cache=True)
def _sobel_kernel(img, out):
    h, w = img.shape
    for r in range(h):
        rm = r - 1 if r > 0 else 0
        rp = r + 1 if r < h - 1 else h - 1
        for c in range(w):
            cm = c - 1 if c > 0 else 0
            cp = c + 1 if c < w - 1 else w - 1
            tl = np.float64(img[rm, cm])
            tc = np.float64(img[rm, c])
            tr = np.float64(img[rm, cp])
            ml = np.float64(img[r, cm])
            mr = np.float64(img[r, cp])
            bl = np.float64(img[rp, cm])
            bc = np.float64(img[rp, c])
            br = np.float64(img[rp, cp])
            gx = ((tr - tl) + 2.0 * (mr - ml) + (br - bl)) * 0.125
            gy = ((bl - tl) + 2.0 * (bc - tc) + (br - tr)) * 0.125
            out[r, c] = np.sqrt(gx * gx + gy * gy)


def sobel(img, just_filter=False):
    """Sobel edge magnitude; thresholded at its mean unless `just_filter`.

    Gradients use the standard 3x3 stencils scaled by 1/8, so a unit step
    produces a magnitude equal to the step height.  With `just_filter` the
    raw float64 magnitude is returned; otherwise a 0/1 uint8 edge map.
    """
    core.check_image(img)
    mag = np.empty(img.shape, dtype=np.float64)
    _sobel_kernel(np.ascontiguousarray(img), mag)
    if just_filter:
        return mag
    return (mag > mag.mean()).astype(np.uint8)


def disc_se(radius):
    """Disc structuring element: true where dr^2 + dc^2 <= radius^2."""
    radius = int(radius)
    if radius < 1:
        raise ValueError(f"radius must be >= 1, got {radius}")
    d = np.arange(-radius, radius + 1)
    mask = d[:, np.newaxis] ** 2 + d[np.newaxis, :] ** 2 <= radius * radius
    return StructuringElement(mask)


@numba.njit(nogil=True, cache=True)
def _median_hist_kernel(pad, out, drs, dcs, ent_drs, ent_dcs, lv_drs, lv_dcs,
                        nlevels, top, left):
    # Huang sliding-histogram median: rebuild per row, then slide along the
    # row removing/adding only the cells that leave/enter the neighborhood.
    # `pad` is the input extended by edge replication, so every offset
    # lands in bounds without per-access clamping.
    h, w = out.shape
    k = drs.shape[0]
    target = (k - 1) // 2  # lower median, 0-based rank
    hist = np.zeros(nlevels, dtype=np.int64)
    for r in range(h):
        hist[:] = 0
        # full build at column 0
        for j in range(k):
            hist[pad[top + r + drs[j], left + dcs[j]]] += 1
        m = 0
        below = 0  # count of window values strictly less than m
        while below + hist[m] <= target:
            below += hist[m]
            m += 1
        out[r, 0] = m
        for c in range(1, w):
            for j in range(lv_drs.shape[0]):
                v = pad[top + r + lv_drs[j], left + c - 1 + lv_dcs[j]]
                hist[v] -= 1
                if v < m:
                    below -= 1
            for j in range(ent_drs.shape[0]):
                v = pad[top + r + ent_drs[j], left + c + ent_dcs[j]]
                hist[v] += 1
                if v < m:
                    below += 1
            while below > target:
                m -= 1
                below -= hist[m]
            while below + hist[m] <= target:
                below += hist[m]
                m += 1
            out[r, c] = m


def _median_sorted(img, se, out):
    # Generic rank-filter path: gather every neighborhood, sort, pick the
    # median.  Row blocks bound the memory of the gathered stack.
    h, w = img.shape
    offs = se.offsets()
    k = len(offs)
    is_float = img.dtype.kind == "f"
    cols = np.arange(w)
    cc = np.clip(cols[np.newaxis, :] + offs[:, 1][:, np.newaxis], 0, w - 1)  # (k, w)
    block = max(1, (1 << 22) // max(1, k * w))
    for r0 in range(0, h, block):
        r1 = min(h, r0 + block)
        rows = np.arange(r0, r1)
        rr = np.clip(rows[np.newaxis, :] + offs[:, 0][:, np.newaxis], 0, h - 1)  # (k, b)
        vals = img[rr[:, :, np.newaxis], cc[:, np.newaxis, :]]  # (k, b, w)
        vals.sort(axis=0, kind="stable")
        if is_float and k % 2 == 0:
            med = (vals[k // 2 - 1].astype(np.float64) + vals[k // 2]) / 2.0
            out[r0:r1] = med.astype(img.dtype)
        else:
            out[r0:r1] = vals[(k - 1) // 2]
    return out


def _slide_lists(se):
    """Cells entering/leaving the window on a one-column step to the right."""
    offs = se.offsets()
    cells = {(int(dr), int(dc)) for dr, dc in offs}
    enter = np.array([o for o in sorted(cells) if (o[0], o[1] + 1) not in cells],
                     dtype=np.int64)
    leave = np.array([o for o in sorted(cells) if (o[0], o[1] - 1) not in cells],
                     dtype=np.int64)
    return enter.reshape(-1, 2), leave.reshape(-1, 2)


def median_filter(img, se=None, out=None):
    """Median of each neighborhood (lower median for even integer counts).

    uint8/uint16 images use an O(r)-per-pixel sliding-histogram kernel;
    other kinds fall back to a sort-based path.  Both agree exactly on
    integer inputs.
    """
    core.check_image(img)
    if se is None:
        se = core.make_cross_3x3()
    if out is None:
        out = np.empty(img.shape, dtype=img.dtype)
    else:
        core.validate_out(out, img.shape, img.dtype)
    if img.dtype == np.uint8 or img.dtype == np.uint16:
        offs = se.offsets()
        enter, leave = _slide_lists(se)
        nlevels = 256 if img.dtype == np.uint8 else 65536
        top = max(0, -int(offs[:, 0].min()))
        bot = max(0, int(offs[:, 0].max()))
        left = max(0, -int(offs[:, 1].min()))
        right = max(0, int(offs[:, 1].max()))
        pad = np.pad(img, ((top, bot), (left, right)), mode="edge")
        _median_hist_kernel(
            pad, out,
            offs[:, 0].copy(), offs[:, 1].copy(),
            enter[:, 0].copy(), enter[:, 1].copy(),
            leave[:, 0].copy(), leave[:, 1].copy(),
            nlevels, top, left,
        )
        return out
    return _median_sorted(img, se, out)


def median_filter_sorted(img, se=None, out=None):
    """Sort-based median, any kind; reference path for the histogram kernel."""
    core.check_image(img)
    if se is None:
        se = core.make_cross_3x3()
    if out is None:
        out = np.empty(img.shape, dtype=img.dtype)
    else:
        core.validate_out(out, img.shape, img.dtype)
    return _median_sorted(img, se, out)
