"""Netpbm (PGM/PPM) reading and writing, plus grayscale conversion.

Supports ASCII (P2/P3) and binary (P5/P6) variants.  Grayscale files with
maxval <= 255 load as uint8, larger maxvals as uint16 (big-endian raster,
per the format); color files load as an (H, W, 3) uint8 array.
"""

import numpy as np

from . import core
from .errors import (
    KindMismatchError,
    MalformedFileError,
    ShapeMismatchError,
    UnsupportedMaxvalError,
)

#: Luma weights used by as_grey (ITU-R BT.601).
GREY_WEIGHTS = (0.299, 0.587, 0.114)


class _Tokenizer:
    """Pulls whitespace-separated header tokens, skipping '#' comments."""

    def __init__(self, data):
        self.data = data
        self.pos = 0

    def token(self):
        data, n = self.data, len(self.data)
        while self.pos < n:
            b = data[self.pos]
            if b in b" \t\r\n":
                self.pos += 1
            elif b == ord("#"):
                while self.pos < n and data[self.pos] not in b"\r\n":
                    self.pos += 1
            else:
                break
        if self.pos >= n:
            raise MalformedFileError("unexpected end of header", offset=self.pos)
        start = self.pos
        while self.pos < n and data[self.pos] not in b" \t\r\n":
            self.pos += 1
        return data[start:self.pos]

    def integer(self, what):
        start = self.pos
        tok = self.token()
        try:
            return int(tok)
        except ValueError:
            raise MalformedFileError(f"bad {what} token {tok!r}", offset=start) from None


def _read_header(data, magics):
    tk = _Tokenizer(data)
    magic = tk.token().decode("ascii", "replace")
    if magic not in magics:
        raise MalformedFileError(f"bad magic {magic!r}, expected one of {magics}", offset=0)
    width = tk.integer("width")
    height = tk.integer("height")
    maxval = tk.integer("maxval")
    if width < 1 or height < 1:
        raise MalformedFileError(f"bad dimensions {width}x{height}", offset=tk.pos)
    if not 0 < maxval <= 65535:
        raise UnsupportedMaxvalError(f"maxval {maxval} outside 1..65535")
    if magic in ("P5", "P6"):
        # exactly one whitespace byte separates header from raster
        if tk.pos >= len(data) or data[tk.pos] not in b" \t\r\n":
            raise MalformedFileError("missing whitespace before raster", offset=tk.pos)
        tk.pos += 1
    return magic, width, height, maxval, tk


def _read_binary_raster(data, tk, count, maxval):
    itemsize = 1 if maxval <= 255 else 2
    need = count * itemsize
    raster = data[tk.pos:tk.pos + need]
    if len(raster) < need:
        raise MalformedFileError(
            f"raster truncated: need {need} bytes, have {len(raster)}", offset=tk.pos
        )
    dt = np.uint8 if itemsize == 1 else np.dtype(">u2")
    return np.frombuffer(raster, dtype=dt, count=count)


def _read_ascii_raster(data, tk, count):
    vals = np.empty(count, dtype=np.int64)
    for i in range(count):
        vals[i] = tk.integer("sample")
    return vals


def read_pgm(path):
    """Read a P2/P5 grayscale file; uint8 for maxval <= 255, else uint16."""
    with open(path, "rb") as fh:
        data = fh.read()
    magic, width, height, maxval, tk = _read_header(data, ("P2", "P5"))
    count = width * height
    if magic == "P5":
        flat = _read_binary_raster(data, tk, count, maxval)
    else:
        flat = _read_ascii_raster(data, tk, count)
    if flat.max(initial=0) > maxval:
        raise MalformedFileError(f"sample exceeds maxval {maxval}", offset=tk.pos)
    dtype = np.uint8 if maxval <= 255 else np.uint16
    return flat.astype(dtype).reshape(height, width)


def write_pgm(img, path):
    """Write a uint8/uint16 image as binary PGM (P5)."""
    core.check_image(img)
    if img.dtype == np.uint8:
        maxval, raster = 255, img
    elif img.dtype == np.uint16:
        maxval, raster = 65535, img.astype(">u2")
    else:
        raise KindMismatchError(
            f"image: PGM requires U8 or U16, got {core.kind_name(img.dtype)}"
        )
    with open(path, "wb") as fh:
        fh.write(f"P5\n{img.shape[1]} {img.shape[0]}\n{maxval}\n".encode("ascii"))
        fh.write(np.ascontiguousarray(raster).tobytes())


def read_ppm(path):
    """Read a P3/P6 color file as an (H, W, 3) uint8 array."""
    with open(path, "rb") as fh:
        data = fh.read()
    magic, width, height, maxval, tk = _read_header(data, ("P3", "P6"))
    if maxval > 255:
        raise UnsupportedMaxvalError(f"color maxval {maxval} > 255 not supported")
    count = width * height * 3
    if magic == "P6":
        flat = _read_binary_raster(data, tk, count, maxval)
    else:
        flat = _read_ascii_raster(data, tk, count)
    if flat.max(initial=0) > maxval:
        raise MalformedFileError(f"sample exceeds maxval {maxval}", offset=tk.pos)
    return flat.astype(np.uint8).reshape(height, width, 3)


def write_ppm(rgb, path):
    """Write an (H, W, 3) uint8 array as binary PPM (P6)."""
    rgb = np.asarray(rgb)
    if rgb.ndim != 3 or rgb.shape[2] != 3:
        raise ShapeMismatchError(f"rgb: expected shape (H, W, 3), got {rgb.shape}")
    if rgb.dtype != np.uint8:
        raise KindMismatchError("rgb: expected U8 samples")
    with open(path, "wb") as fh:
        fh.write(f"P6\n{rgb.shape[1]} {rgb.shape[0]}\n255\n".encode("ascii"))
        fh.write(np.ascontiguousarray(rgb).tobytes())


def as_grey(rgb):
    """Luma grayscale of an (H, W, 3) array, float64."""
    rgb = np.asarray(rgb)
    if rgb.ndim != 3 or rgb.shape[2] != 3:
        raise ShapeMismatchError(f"rgb: expected shape (H, W, 3), got {rgb.shape}")
    r, g, b = GREY_WEIGHTS
    return (r * rgb[:, :, 0] + g * rgb[:, :, 1] + b * rgb[:, :, 2]).astype(np.float64)


def read_grey(path):
    """Read any supported Netpbm file as a grayscale image.

    PGM files return their native integer kind; PPM files are converted
    with as_grey (float64).
    """
    with open(path, "rb") as fh:
        magic = fh.read(2).decode("ascii", "replace")
    if magic in ("P2", "P5"):
        return read_pgm(path)
    if magic in ("P3", "P6"):
        return as_grey(read_ppm(path))
    raise MalformedFileError(f"unrecognized magic {magic!r}", offset=0)
