"""SURF interest points: box-filter Hessian detection over an integral
image, orientation assignment and 64-value descriptors from Haar-wavelet
responses, plus a square-overlay renderer for visualizing detections.

The detector uses the usual constants: filter-size ladder 9, 15, 21, ...
(doubling increments per octave), Dxy weight 0.9, and responses
normalized by the squared filter area.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import core
from .errors import ImageTooSmallError, LengthMismatchError, PointOutOfBoundsError

#: Default threshold on normalized Hessian responses.
DEFAULT_THRESHOLD = 0.0004


@dataclass
class InterestPoint:
    y: float
    x: float
    scale: float
    score: float
    laplacian_sign: int
    angle: float = 0.0
    descriptor: np.ndarray = field(default_factory=lambda: np.zeros(64))

    def to_row(self):
        """Row form: 6 meta values followed by the 64 descriptor values."""
        row = np.empty(70)
        row[0] = self.y
        row[1] = self.x
        row[2] = self.scale
        row[3] = self.score
        row[4] = self.laplacian_sign
        row[5] = self.angle
        row[6:] = self.descriptor
        return row


def points_to_array(points):
    """(N, 70) matrix of rows; descriptors start at column 6."""
    if not points:
        return np.zeros((0, 70))
    return np.stack([p.to_row() for p in points])


def integral_image(img):
    """(H+1, W+1) cumulative sum table; first row and column are zero."""
    core.check_image(img)
    ii = np.zeros((img.shape[0] + 1, img.shape[1] + 1), dtype=np.float64)
    np.cumsum(np.cumsum(img, axis=0, dtype=np.float64), axis=1, out=ii[1:, 1:])
    return ii


def box_sum(ii, r0, c0, r1, c1):
    """Sum of img over rows [r0, r1), cols [c0, c1), clamped to the image."""
    h, w = ii.shape[0] - 1, ii.shape[1] - 1
    r0 = min(max(r0, 0), h)
    r1 = min(max(r1, 0), h)
    c0 = min(max(c0, 0), w)
    c1 = min(max(c1, 0), w)
    if r1 <= r0 or c1 <= c0:
        return 0.0
    return ii[r1, c1] - ii[r0, c1] - ii[r1, c0] + ii[r0, c0]


def _box_grid(ii, rs, cs, dr, dc, nrows, ncols):
    # unclamped box sums on a sample grid; callers guarantee bounds
    r0 = rs + dr
    r1 = r0 + nrows
    c0 = cs + dc
    c1 = c0 + ncols
    return (ii[np.ix_(r1, c1)] - ii[np.ix_(r0, c1)]
            - ii[np.ix_(r1, c0)] + ii[np.ix_(r0, c0)])


def _filter_size(octave, scale):
    # octave 1: 9, 15, 21, ...; each octave doubles the increment and
    # starts from the second size of the previous one
    return 3 * ((1 << octave) * (scale + 1) + 1)


def _hessian_layer(ii, rs, cs, size):
    """Normalized Hessian response and trace at sample positions rs x cs."""
    lobe = size // 3
    border = size // 2
    half = (lobe - 1) // 2
    dxx = (_box_grid(ii, rs, cs, -lobe + 1, -border, 2 * lobe - 1, size)
           - 3.0 * _box_grid(ii, rs, cs, -lobe + 1, -half, 2 * lobe - 1, lobe))
    dyy = (_box_grid(ii, rs, cs, -border, -lobe + 1, size, 2 * lobe - 1)
           - 3.0 * _box_grid(ii, rs, cs, -half, -lobe + 1, lobe, 2 * lobe - 1))
    dxy = (_box_grid(ii, rs, cs, -lobe, 1, lobe, lobe)
           + _box_grid(ii, rs, cs, 1, -lobe, lobe, lobe)
           - _box_grid(ii, rs, cs, -lobe, -lobe, lobe, lobe)
           - _box_grid(ii, rs, cs, 1, 1, lobe, lobe))
    inv = 1.0 / (size * size)
    dxx *= inv
    dyy *= inv
    dxy *= inv
    return dxx * dyy - 0.81 * dxy * dxy, dxx + dyy


def surf_detect(img, nr_octaves=4, nr_scales=6, initial_step=2,
                threshold=DEFAULT_THRESHOLD):
    """Detect interest points (descriptors and angles left unfilled).

    Strict 3x3x3 scale-space maxima of the box-filter Hessian response
    above `threshold`, refined by 3D quadratic interpolation; candidates
    whose refinement offset exceeds half a step in any axis are dropped.
    Results are sorted by descending score.
    """
    core.check_image(img)
    if nr_octaves < 1:
        raise ValueError(f"nr_octaves must be >= 1, got {nr_octaves}")
    if nr_scales < 3:
        raise ValueError(f"nr_scales must be >= 3, got {nr_scales}")
    if initial_step < 1:
        raise ValueError(f"initial_step must be >= 1, got {initial_step}")
    h, w = img.shape
    largest_first_octave = _filter_size(1, nr_scales - 1)
    if min(h, w) < largest_first_octave:
        raise ImageTooSmallError(
            f"image {img.shape} smaller than the largest first-octave filter "
            f"({largest_first_octave})"
        )
    ii = integral_image(img)
    points = []
    for octave in range(1, nr_octaves + 1):
        step = initial_step * (1 << (octave - 1))
        sizes = [_filter_size(octave, s) for s in range(nr_scales)]
        if min(h, w) < sizes[0]:
            break
        grid_r = np.arange(0, h, step)
        grid_c = np.arange(0, w, step)
        resp = np.zeros((nr_scales, grid_r.size, grid_c.size))
        trace = np.zeros_like(resp)
        for s, size in enumerate(sizes):
            border = size // 2
            vr = (grid_r >= border) & (grid_r <= h - 1 - border)
            vc = (grid_c >= border) & (grid_c <= w - 1 - border)
            if not vr.any() or not vc.any():
                continue
            det, tr = _hessian_layer(ii, grid_r[vr], grid_c[vc], size)
            resp[s][np.ix_(vr, vc)] = det
            trace[s][np.ix_(vr, vc)] = tr
        points.extend(
            _extract_maxima(resp, trace, sizes, grid_r, grid_c, step, threshold)
        )
    points.sort(key=lambda p: -p.score)
    return points


def _extract_maxima(resp, trace, sizes, grid_r, grid_c, step, threshold):
    ns, nr, nc = resp.shape
    out = []
    size_step = sizes[1] - sizes[0]
    for s in range(1, ns - 1):
        block = resp[s - 1:s + 2]
        center = resp[s, 1:nr - 1, 1:nc - 1]
        above = center > threshold
        if not above.any():
            continue
        is_max = above.copy()
        for ds in range(3):
            for dr in range(3):
                for dc in range(3):
                    if ds == 1 and dr == 1 and dc == 1:
                        continue
                    nb = block[ds, dr:dr + nr - 2, dc:dc + nc - 2]
                    is_max &= center > nb
                    if not is_max.any():
                        break
        for ri, ci in zip(*np.nonzero(is_max)):
            r, c = ri + 1, ci + 1
            off = _interpolate_extremum(resp, s, r, c)
            if off is None:
                continue
            do, dr_, dc_ = off
            y = (r + dr_) * step
            x = (c + dc_) * step
            size = sizes[s] + do * size_step
            out.append(InterestPoint(
                y=float(y), x=float(x),
                scale=float(1.2 * size / 9.0),
                score=float(resp[s, r, c]),
                laplacian_sign=1 if trace[s, r, c] >= 0 else -1,
            ))
    return out


def _interpolate_extremum(resp, s, r, c):
    # 3D quadratic refinement by finite differences; reject offsets > 0.5
    v = resp[s, r, c]
    gs = 0.5 * (resp[s + 1, r, c] - resp[s - 1, r, c])
    gr = 0.5 * (resp[s, r + 1, c] - resp[s, r - 1, c])
    gc = 0.5 * (resp[s, r, c + 1] - resp[s, r, c - 1])
    hss = resp[s + 1, r, c] + resp[s - 1, r, c] - 2 * v
    hrr = resp[s, r + 1, c] + resp[s, r - 1, c] - 2 * v
    hcc = resp[s, r, c + 1] + resp[s, r, c - 1] - 2 * v
    hsr = 0.25 * (resp[s + 1, r + 1, c] - resp[s + 1, r - 1, c]
                  - resp[s - 1, r + 1, c] + resp[s - 1, r - 1, c])
    hsc = 0.25 * (resp[s + 1, r, c + 1] - resp[s + 1, r, c - 1]
                  - resp[s - 1, r, c + 1] + resp[s - 1, r, c - 1])
    hrc = 0.25 * (resp[s, r + 1, c + 1] - resp[s, r + 1, c - 1]
                  - resp[s, r - 1, c + 1] + resp[s, r - 1, c - 1])
    hess = np.array([[hss, hsr, hsc], [hsr, hrr, hrc], [hsc, hrc, hcc]])
    grad = np.array([gs, gr, gc])
    try:
        off = np.linalg.solve(hess, -grad)
    except np.linalg.LinAlgError:
        return None
    if np.max(np.abs(off)) > 0.5:
        return None
    return float(off[0]), float(off[1]), float(off[2])


def _haar_x(ii, r, c, size):
    """Horizontal Haar response of a size x size window centered at (r, c)."""
    half = size // 2
    return (box_sum(ii, r - half, c, r + half, c + half)
            - box_sum(ii, r - half, c - half, r + half, c))


def _haar_y(ii, r, c, size):
    half = size // 2
    return (box_sum(ii, r, c - half, r + half, c + half)
            - box_sum(ii, r - half, c - half, r, c + half))


def _orientation(ii, p):
    s = max(1, int(round(p.scale)))
    r0 = int(round(p.y))
    c0 = int(round(p.x))
    angles, xs, ys = [], [], []
    for i in range(-6, 7):
        for j in range(-6, 7):
            if i * i + j * j >= 36:
                continue
            g = math.exp(-(i * i + j * j) / (2.0 * 2.5 * 2.5))
            rx = g * _haar_x(ii, r0 + j * s, c0 + i * s, 4 * s)
            ry = g * _haar_y(ii, r0 + j * s, c0 + i * s, 4 * s)
            if rx == 0.0 and ry == 0.0:
                continue
            angles.append(math.atan2(ry, rx) % (2.0 * math.pi))
            xs.append(rx)
            ys.append(ry)
    if not angles:
        return 0.0
    angles = np.array(angles)
    xs = np.array(xs)
    ys = np.array(ys)
    best = 0.0
    best_angle = 0.0
    window = math.pi / 3.0
    for start in np.arange(0.0, 2.0 * math.pi, math.pi / 32.0):
        d = (angles - start) % (2.0 * math.pi)
        sel = d < window
        sx = xs[sel].sum()
        sy = ys[sel].sum()
        mag = sx * sx + sy * sy
        if mag > best:
            best = mag
            best_angle = math.atan2(sy, sx) % (2.0 * math.pi)
    return best_angle


def _descriptor(ii, p, angle):
    s = max(1.0, p.scale)
    cos_t = math.cos(angle)
    sin_t = math.sin(angle)
    desc = np.zeros(64)
    idx = 0
    for sub_i in range(4):      # subregion along the rotated x axis
        for sub_j in range(4):  # and along the rotated y axis
            dx = dy = adx = ady = 0.0
            for k in range(5):
                for l in range(5):
                    # sample offsets in units of the scale, point frame
                    sx = -10.0 + 5.0 * sub_i + k + 0.5
                    sy = -10.0 + 5.0 * sub_j + l + 0.5
                    gw = math.exp(-(sx * sx + sy * sy) / (2.0 * 3.3 * 3.3))
                    # rotate into image frame
                    px = p.x + (sx * cos_t - sy * sin_t) * s
                    py = p.y + (sx * sin_t + sy * cos_t) * s
                    r = int(round(py))
                    c = int(round(px))
                    size = 2 * max(1, int(round(s)))
                    gx = _haar_x(ii, r, c, size)
                    gy = _haar_y(ii, r, c, size)
                    # rotate responses back into the point frame
                    rdx = gw * (gx * cos_t + gy * sin_t)
                    rdy = gw * (-gx * sin_t + gy * cos_t)
                    dx += rdx
                    dy += rdy
                    adx += abs(rdx)
                    ady += abs(rdy)
            desc[idx:idx + 4] = (dx, adx, dy, ady)
            idx += 4
    norm = math.sqrt(float(desc @ desc))
    if norm > 0:
        desc /= norm
    return desc


def surf_descriptors(img, points, upright=False):
    """Fill in orientation and descriptor for each detected point.

    Points must lie inside the image; the sampling windows themselves are
    clamped at the borders.  Flat patches produce the zero descriptor.
    """
    core.check_image(img)
    h, w = img.shape
    ii = integral_image(img)
    out = []
    for p in points:
        if not (0 <= p.y <= h - 1 and 0 <= p.x <= w - 1):
            raise PointOutOfBoundsError(
                f"point ({p.y}, {p.x}) outside image of shape {img.shape}"
            )
        angle = 0.0 if upright else _orientation(ii, p)
        desc = _descriptor(ii, p, angle)
        out.append(InterestPoint(p.y, p.x, p.scale, p.score,
                                 p.laplacian_sign, angle, desc))
    return out


def surf(img, nr_octaves=4, nr_scales=6, initial_step=2,
         threshold=DEFAULT_THRESHOLD, upright=False):
    """Detect interest points and compute their descriptors."""
    points = surf_detect(img, nr_octaves, nr_scales, initial_step, threshold)
    return surf_descriptors(img, points, upright=upright)


def show_surf(img, points, cluster_ids=None, colors=None):
    """Render detections as colored square outlines over the image.

    Returns an (H, W, 3) uint8 image; each point draws an axis-aligned
    square of side 2 * scale, clipped to the image, in
    colors[cluster_ids[i] % len(colors)].
    """
    core.check_image(img)
    if cluster_ids is None:
        cluster_ids = [0] * len(points)
    if len(cluster_ids) != len(points):
        raise LengthMismatchError(
            f"{len(cluster_ids)} cluster ids for {len(points)} points"
        )
    if colors is None:
        colors = ((255, 0, 0),)
    if len(colors) == 0:
        raise LengthMismatchError("colors must be a nonempty list of RGB triples")
    base = core.convert(img, np.uint8)
    canvas = np.repeat(base[:, :, np.newaxis], 3, axis=2)
    h, w = base.shape
    for p, cid in zip(points, cluster_ids):
        color = np.asarray(colors[int(cid) % len(colors)], dtype=np.uint8)
        r0 = max(0, int(round(p.y - p.scale)))
        r1 = min(h - 1, int(round(p.y + p.scale)))
        c0 = max(0, int(round(p.x - p.scale)))
        c1 = min(w - 1, int(round(p.x + p.scale)))
        canvas[r0, c0:c1 + 1] = color
        canvas[r1, c0:c1 + 1] = color
        canvas[r0:r1 + 1, c0] = color
        canvas[r0:r1 + 1, c1] = color
    return canvas
