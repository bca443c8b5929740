"""Single-level 2D wavelet transforms, Haar and Daubechies D4/D6/D8.

Both transforms are orthonormal with periodic boundary extension, so
inverse(forward(x)) == x up to rounding and energy is conserved.  Output
is arranged in quadrants with the approximation (LL) in the top-left.
"""

import math

import numpy as np

from . import core
from .errors import KindMismatchError, OddDimensionsError

_SQRT2 = math.sqrt(2.0)

#: Orthonormal analysis low-pass coefficients (sum = sqrt(2), norm = 1).
LOWPASS = {
    "haar": np.array([1.0 / _SQRT2, 1.0 / _SQRT2]),
    # (1 +/- sqrt(3)) / (4 sqrt(2)) family, written out to full precision
    "d4": np.array([
        0.48296291314469025, 0.8365163037378079,
        0.22414386804185735, -0.12940952255092145,
    ]),
    "d6": np.array([
        0.33267055295008285, 0.8068915093110931, 0.4598775021184915,
        -0.13501102001025503, -0.08544127388202687, 0.03522629188570955,
    ]),
    "d8": np.array([
        0.23037781330889612, 0.7148465705529147, 0.6308807679298586,
        -0.02798376941685873, -0.18703481171909234, 0.030841381835560698,
        0.03288301166688511, -0.010597401785069,
    ]),
}

for _name, _h in LOWPASS.items():
    assert abs(_h.sum() - _SQRT2) < 1e-12, _name
    assert abs((_h * _h).sum() - 1.0) < 1e-12, _name


def highpass(h):
    """Quadrature-mirror high-pass: g[k] = (-1)^k h[L-1-k]."""
    g = h[::-1].copy()
    g[1::2] = -g[1::2]
    return g


def _resolve(kind):
    key = str(kind).lower()
    if key not in LOWPASS:
        raise ValueError(f"unknown wavelet kind {kind!r}; known: {sorted(LOWPASS)}")
    return LOWPASS[key]


def _analyze_rows(x, h, g):
    # a[i] = sum_k h[k] x[2i+k], periodic; detail likewise with g.
    n = x.shape[1]
    half = n // 2
    ext = x[:, np.arange(n + len(h)) % n]
    a = np.zeros((x.shape[0], half))
    d = np.zeros((x.shape[0], half))
    for k in range(len(h)):
        seg = ext[:, k:k + n:2][:, :half]
        a += h[k] * seg
        d += g[k] * seg
    return np.concatenate([a, d], axis=1)


def _synthesize_rows(y, h, g):
    n = y.shape[1]
    half = n // 2
    a = y[:, :half]
    d = y[:, half:]
    x = np.zeros_like(y)
    idx = 2 * np.arange(half)
    for k in range(len(h)):
        x[:, (idx + k) % n] += h[k] * a + g[k] * d
    return x


def _check(img):
    core.check_image(img)
    if img.dtype != np.float64:
        raise KindMismatchError(
            f"image: wavelets require F64 input, got {core.kind_name(img.dtype)}"
        )
    if img.shape[0] % 2 or img.shape[1] % 2:
        raise OddDimensionsError(f"dimensions must be even, got {img.shape}")
    return img


def wavelet_forward(img, kind="haar"):
    """Forward single-level 2D transform; quadrants [LL | HL ; LH | HH]."""
    x = _check(img)
    h = _resolve(kind)
    g = highpass(h)
    x = _analyze_rows(x, h, g)
    x = _analyze_rows(np.ascontiguousarray(x.T), h, g).T
    return np.ascontiguousarray(x)


def wavelet_inverse(coeffs, kind="haar"):
    """Exact inverse of wavelet_forward (synthesis bank, periodic)."""
    y = _check(coeffs)
    h = _resolve(kind)
    g = highpass(h)
    y = _synthesize_rows(np.ascontiguousarray(y.T), h, g).T
    y = _synthesize_rows(np.ascontiguousarray(y), h, g)
    return y
