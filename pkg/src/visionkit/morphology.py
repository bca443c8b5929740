"""Binary and grayscale morphology: erode, dilate, open, close.

Grayscale erosion subtracts the element weight from each neighbor
(saturating at the scalar kind's minimum) and takes the minimum; dilation
is the adjoint: the element is reflected about its center and weights are
added, saturating at the kind's maximum.  With zero weights and 0/1
images this reduces to ordinary binary morphology.

Each operation has a fast compiled kernel for contiguous inputs and a
generic Python path for everything else; the two are bit-identical.
"""

import numba
import numpy as np

from . import core
from .core import BorderMode, StructuringElement, make_cross_3x3


@numba.njit(nogil=True, cache=True)
def _erode_kernel(img, out, drs, dcs, ws, lo, hi):
    h, w = img.shape
    k = drs.shape[0]
    for r in range(h):
        for c in range(w):
            best = hi
            for j in range(k):
                rr = r + drs[j]
                if rr < 0:
                    rr = 0
                elif rr >= h:
                    rr = h - 1
                cc = c + dcs[j]
                if cc < 0:
                    cc = 0
                elif cc >= w:
                    cc = w - 1
                v = img[rr, cc] - ws[j]
                if v < lo:
                    v = lo
                if v < best:
                    best = v
            out[r, c] = best


@numba.njit(nogil=True, cache=True)
def _dilate_kernel(img, out, drs, dcs, ws, lo, hi):
    h, w = img.shape
    k = drs.shape[0]
    for r in range(h):
        for c in range(w):
            best = lo
            for j in range(k):
                rr = r + drs[j]
                if rr < 0:
                    rr = 0
                elif rr >= h:
                    rr = h - 1
                cc = c + dcs[j]
                if cc < 0:
                    cc = 0
                elif cc >= w:
                    cc = w - 1
                v = img[rr, cc] + ws[j]
                if v > hi:
                    v = hi
                if v > best:
                    best = v
            out[r, c] = best


def _flat_reduce(img, offs, out, fn):
    # Unweighted elements reduce to a plain running min/max over shifted
    # views of an edge-padded copy, which vectorizes far better than the
    # per-pixel kernel.
    h, w = img.shape
    top = max(0, -int(offs[:, 0].min()))
    bot = max(0, int(offs[:, 0].max()))
    left = max(0, -int(offs[:, 1].min()))
    right = max(0, int(offs[:, 1].max()))
    pad = np.pad(img, ((top, bot), (left, right)), mode="edge")
    first = True
    for dr, dc in offs:
        view = pad[top + dr:top + dr + h, left + dc:left + dc + w]
        if first:
            np.copyto(out, view)
            first = False
        else:
            fn(out, view, out=out)
    return out


def _prepare(img, se, out):
    core.check_image(img)
    if se is None:
        se = make_cross_3x3()
    if out is None:
        out = np.empty(img.shape, dtype=img.dtype)
    else:
        core.validate_out(out, img.shape, img.dtype)
        if out is img:
            raise ValueError("out must not alias the input image")
    return se, out


def _generic_erode(img, se, out, reflect):
    lo, hi = core.kind_bounds(img.dtype)
    use = se.reflected() if reflect else se
    ws = use.cell_weights()
    for (r, c), values in core.neighborhood_iter(img, use, BorderMode.EXTEND_NEAREST):
        if reflect:
            out[r, c] = min(hi, np.max(np.minimum(values + ws, hi)))
        else:
            out[r, c] = max(lo, np.min(np.maximum(values - ws, lo)))
    return out


def erode(img, se=None, out=None):
    """Grayscale/binary erosion of `img` by structuring element `se`."""
    se, out = _prepare(img, se, out)
    offs = se.offsets()
    if img.flags.c_contiguous:
        ws = se.cell_weights()
        if not ws.any():
            return _flat_reduce(img, offs, out, np.minimum)
        lo, hi = core.kind_bounds(img.dtype)
        _erode_kernel(img, out, offs[:, 0].copy(), offs[:, 1].copy(),
                      ws, lo, hi)
        return out
    return _generic_erode(img, se, out, reflect=False)


def dilate(img, se=None, out=None):
    """Grayscale/binary dilation; the element is reflected about its center."""
    se, out = _prepare(img, se, out)
    refl = se.reflected()
    offs = refl.offsets()
    if img.flags.c_contiguous:
        ws = refl.cell_weights()
        if not ws.any():
            return _flat_reduce(img, offs, out, np.maximum)
        lo, hi = core.kind_bounds(img.dtype)
        _dilate_kernel(img, out, offs[:, 0].copy(), offs[:, 1].copy(),
                       ws, lo, hi)
        return out
    return _generic_erode(img, se, out, reflect=True)


def open(img, se=None, out=None):
    """Morphological opening: erosion followed by dilation."""
    se, out = _prepare(img, se, out)
    tmp = erode(img, se)
    return dilate(tmp, se, out=out)


def close(img, se=None, out=None):
    """Morphological closing: dilation followed by erosion."""
    se, out = _prepare(img, se, out)
    tmp = dilate(img, se)
    return erode(tmp, se, out=out)
