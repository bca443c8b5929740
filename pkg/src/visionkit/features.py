"""Global image descriptors: Haralick texture statistics over gray-level
cooccurrence matrices, Zernike moment magnitudes, rotation-invariant
uniform local binary patterns, and threshold adjacency statistics (fixed
margin and parameter-free variants)."""

import math

import numpy as np

from . import core
from .errors import (
    DegenerateImageError,
    EmptyDiskError,
    KindMismatchError,
    NoForegroundError,
    ZeroImageError,
)

#: The four canonical 2D cooccurrence directions.
DIRECTIONS = {
    "E": (0, 1),
    "SE": (1, 1),
    "S": (1, 0),
    "SW": (1, -1),
}


def _check_u8(img, name="image"):
    core.check_image(img, name)
    if img.dtype != np.uint8:
        raise KindMismatchError(f"{name}: requires U8, got {core.kind_name(img.dtype)}")
    return img


def cooccurrence(img, direction, levels=None):
    """Symmetric, normalized gray-level cooccurrence matrix for one direction.

    Counts each in-bounds pixel pair (p, p + direction), symmetrizes by
    adding the transpose, and normalizes to probabilities.
    """
    _check_u8(img)
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {sorted(DIRECTIONS)}, got {direction!r}")
    dr, dc = DIRECTIONS[direction]
    if levels is None:
        levels = int(img.max()) + 1
    h, w = img.shape
    r0, r1 = max(0, -dr), h - max(0, dr)
    c0, c1 = max(0, -dc), w - max(0, dc)
    if r1 <= r0 or c1 <= c0:
        raise DegenerateImageError(f"no pixel pairs along direction {direction}")
    a = img[r0:r1, c0:c1].astype(np.int64)
    b = img[r0 + dr:r1 + dr, c0 + dc:c1 + dc].astype(np.int64)
    counts = np.bincount((a * levels + b).ravel(), minlength=levels * levels)
    counts = counts.reshape(levels, levels).astype(np.float64)
    counts += counts.T
    return counts / counts.sum()


def _entropy2(p):
    nz = p[p > 0]
    return float(-(nz * np.log2(nz)).sum())


def haralick_from_matrix(p):
    """The 13 classical texture statistics of one normalized matrix."""
    g = p.shape[0]
    i = np.arange(g, dtype=np.float64)
    ii = i[:, np.newaxis]
    jj = i[np.newaxis, :]
    px = p.sum(axis=1)
    py = p.sum(axis=0)
    mux = float((i * px).sum())
    muy = float((i * py).sum())
    sx = math.sqrt(float(((i - mux) ** 2 * px).sum()))
    sy = math.sqrt(float(((i - muy) ** 2 * py).sum()))

    ks = np.arange(2 * g - 1, dtype=np.float64)
    psum = np.bincount((ii + jj).astype(np.int64).ravel(), weights=p.ravel(),
                       minlength=2 * g - 1)
    kd = np.arange(g, dtype=np.float64)
    pdiff = np.bincount(np.abs(ii - jj).astype(np.int64).ravel(), weights=p.ravel(),
                        minlength=g)

    asm = float((p * p).sum())
    contrast = float((((ii - jj) ** 2) * p).sum())
    if sx > 0 and sy > 0:
        corr = (float((ii * jj * p).sum()) - mux * muy) / (sx * sy)
    else:
        corr = 0.0  # zero marginal variance: correlation defined as 0
    variance = float((((ii - mux) ** 2) * p).sum())
    idm = float((p / (1.0 + (ii - jj) ** 2)).sum())
    sum_avg = float((ks * psum).sum())
    sum_var = float((((ks - sum_avg) ** 2) * psum).sum())
    sum_ent = _entropy2(psum)
    ent = _entropy2(p)
    diff_avg = float((kd * pdiff).sum())
    diff_var = float((((kd - diff_avg) ** 2) * pdiff).sum())
    diff_ent = _entropy2(pdiff)

    # information measures of correlation
    pxpy = px[:, np.newaxis] * py[np.newaxis, :]
    sel = p > 0
    hxy1 = float(-(p[sel] * np.log2(pxpy[sel])).sum())
    selm = pxpy > 0
    hxy2 = float(-(pxpy[selm] * np.log2(pxpy[selm])).sum())
    hx = _entropy2(px)
    hy = _entropy2(py)
    denom = max(hx, hy)
    imc1 = (ent - hxy1) / denom if denom > 0 else 0.0
    imc2 = math.sqrt(max(0.0, 1.0 - math.exp(-2.0 * (hxy2 - ent))))

    return np.array([
        asm, contrast, corr, variance, idm, sum_avg, sum_var,
        sum_ent, ent, diff_var, diff_ent, imc1, imc2,
    ])


def haralick(img):
    """13 Haralick statistics per direction, concatenated (4 x 13 = 52).

    Directions without any pixel pair (degenerate geometry) contribute a
    zero block; a single-pixel image is rejected outright.
    """
    _check_u8(img)
    if img.size < 2:
        raise DegenerateImageError("haralick needs at least 2 pixels")
    levels = int(img.max()) + 1
    out = []
    for name in ("E", "SE", "S", "SW"):
        try:
            p = cooccurrence(img, name, levels=levels)
        except DegenerateImageError:
            out.append(np.zeros(13))
            continue
        out.append(haralick_from_matrix(p))
    return np.concatenate(out)


def _radial_poly(n, m, rho):
    r = np.zeros_like(rho)
    for s in range((n - m) // 2 + 1):
        coef = (
            (-1.0) ** s * math.factorial(n - s)
            / (math.factorial(s)
               * math.factorial((n + m) // 2 - s)
               * math.factorial((n - m) // 2 - s))
        )
        r += coef * rho ** (n - 2 * s)
    return r


def zernike_moments(img, radius, degree=8):
    """Zernike moment magnitudes |A_nm|, n <= degree, n - m even.

    Pixel coordinates are centered on the intensity centroid and scaled by
    `radius`; only pixels inside the unit disk contribute, normalized by
    their total intensity.  Magnitudes are invariant to rotation.
    """
    core.check_image(img)
    if not radius > 0:
        raise ValueError(f"radius must be > 0, got {radius}")
    if degree < 0:
        raise ValueError(f"degree must be >= 0, got {degree}")
    f = img.astype(np.float64)
    total = f.sum()
    if total == 0:
        raise ZeroImageError("zernike: image has zero total intensity")
    h, w = img.shape
    rows = np.arange(h, dtype=np.float64)[:, np.newaxis]
    cols = np.arange(w, dtype=np.float64)[np.newaxis, :]
    cr = float((rows * f).sum() / total)
    cc = float((cols * f).sum() / total)
    y = (rows - cr) / radius + np.zeros_like(f)
    x = (cols - cc) / radius + np.zeros_like(f)
    rho = np.hypot(x, y)
    inside = rho <= 1.0
    if not inside.any():
        raise EmptyDiskError("zernike: no pixel falls inside the unit disk")
    fm = f[inside]
    norm = fm.sum()
    if norm == 0:
        raise ZeroImageError("zernike: zero intensity inside the disk")
    fm = fm / norm
    rho_in = rho[inside]
    theta = np.arctan2(y[inside], x[inside])
    vals = []
    for n in range(degree + 1):
        for m in range(n % 2, n + 1, 2):
            rp = _radial_poly(n, m, rho_in)
            a = (n + 1) / math.pi * (fm * rp * np.exp(-1j * m * theta)).sum()
            vals.append(abs(a))
    return np.array(vals)


def zernike_indices(degree):
    """(n, m) pairs in the order zernike_moments emits them."""
    return [(n, m) for n in range(degree + 1) for m in range(n % 2, n + 1, 2)]


def _uniform_table(points):
    codes = np.arange(1 << points, dtype=np.int64)
    rot = ((codes >> 1) | (codes << (points - 1))) & ((1 << points) - 1)
    transitions = np.bitwise_count(codes ^ rot)
    table = np.where(transitions <= 2, np.bitwise_count(codes), points + 1)
    return table.astype(np.int64)


def _bilinear(f, sr, sc):
    h, w = f.shape
    sr = np.clip(sr, 0, h - 1)
    sc = np.clip(sc, 0, w - 1)
    r0 = np.floor(sr).astype(np.int64)
    c0 = np.floor(sc).astype(np.int64)
    r1 = np.minimum(r0 + 1, h - 1)
    c1 = np.minimum(c0 + 1, w - 1)
    fr = sr - r0
    fc = sc - c0
    return (
        f[r0, c0] * (1 - fr) * (1 - fc)
        + f[r0, c1] * (1 - fr) * fc
        + f[r1, c0] * fr * (1 - fc)
        + f[r1, c1] * fr * fc
    )


def lbp(img, radius=1.0, points=8):
    """Rotation-invariant uniform LBP histogram (points + 2 bins, sums to 1).

    Each pixel samples `points` positions on a circle of `radius`
    (bilinear interpolation, nearest-extended at borders) and thresholds
    them at the center value, ties counting as 1.  Uniform codes map to
    their popcount, everything else to one overflow bin.
    """
    core.check_image(img)
    points = int(points)
    if points < 4 or points > 24:
        raise ValueError(f"points must be in 4..24, got {points}")
    if radius < 1:
        raise ValueError(f"radius must be >= 1, got {radius}")
    f = img.astype(np.float64)
    h, w = f.shape
    rows = np.arange(h, dtype=np.float64)[:, np.newaxis] + np.zeros((1, w))
    cols = np.arange(w, dtype=np.float64)[np.newaxis, :] + np.zeros((h, 1))
    codes = np.zeros((h, w), dtype=np.int64)
    for k in range(points):
        ang = 2.0 * math.pi * k / points
        dy = radius * math.sin(ang)
        dx = radius * math.cos(ang)
        if abs(dy) < 1e-9:
            dy = 0.0
        if abs(dx) < 1e-9:
            dx = 0.0
        sample = _bilinear(f, rows + dy, cols + dx)
        codes |= (sample >= f).astype(np.int64) << k
    table = _uniform_table(points)
    hist = np.bincount(table[codes.ravel()], minlength=points + 2)
    return hist.astype(np.float64) / codes.size


_NEIGHBOR_OFFSETS = [(dr, dc) for dr in (-1, 0, 1) for dc in (-1, 0, 1)
                     if (dr, dc) != (0, 0)]


def _adjacency_vector(mask):
    """9-vector: fraction of white pixels having exactly k white 8-neighbors."""
    total = int(mask.sum())
    if total == 0:
        return np.zeros(9)
    m = mask.astype(np.int64)
    padded = np.pad(m, 1)  # outside the image counts as non-white
    neigh = np.zeros_like(m)
    for dr, dc in _NEIGHBOR_OFFSETS:
        neigh += padded[1 + dr:1 + dr + m.shape[0], 1 + dc:1 + dc + m.shape[1]]
    hist = np.bincount(neigh[mask], minlength=9)[:9]
    return hist.astype(np.float64) / total


def _tas_core(img, margin):
    f = img.astype(np.float64)
    nz = f[f > 0]
    if nz.size == 0:
        raise NoForegroundError("tas: image has no nonzero pixel")
    mu = float(nz.mean())
    ranges = ((mu - margin, mu + margin), (mu - margin, 255.0), (mu, 255.0))
    masks = [(f >= lo) & (f <= hi) for lo, hi in ranges]
    vecs = [_adjacency_vector(m) for m in masks]
    vecs += [_adjacency_vector(~m) for m in masks]
    return np.concatenate(vecs)


def tas(img):
    """Threshold adjacency statistics with the fixed +/-30 margin (54 values)."""
    _check_u8(img)
    return _tas_core(img, 30.0)


def pftas(img):
    """Parameter-free variant: margin is the std dev of the nonzero pixels."""
    _check_u8(img)
    f = img.astype(np.float64)
    nz = f[f > 0]
    if nz.size == 0:
        raise NoForegroundError("pftas: image has no nonzero pixel")
    return _tas_core(img, float(nz.std()))
