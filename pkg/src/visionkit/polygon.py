"""Convex hull of binary images and boundary-inclusive polygon fill."""

import numpy as np

from . import core
from .errors import NoForegroundError, TooFewVerticesError


def hull_vertices(points):
    """Monotone-chain convex hull of integer (row, col) points.

    Returns vertices in counterclockwise order (in (row, col) axes) with
    collinear points dropped, so no three consecutive vertices are
    collinear.  Degenerate inputs yield 1 (single point) or 2 (collinear
    set) vertices.
    """
    pts = sorted({(int(r), int(c)) for r, c in points})
    if not pts:
        raise NoForegroundError("need at least one point")
    if len(pts) == 1:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        return hull[:1]
    return hull


def _rasterize(vertices, shape):
    """Boolean mask of lattice points inside or on the polygon (even-odd).

    All tests use exact integer arithmetic: a point is filled when its
    rightward ray crosses an odd number of edges, or when it lies exactly
    on an edge segment.
    """
    h, w = shape
    rows = np.arange(h, dtype=np.int64)[:, np.newaxis]
    cols = np.arange(w, dtype=np.int64)[np.newaxis, :]
    crossings = np.zeros((h, w), dtype=np.int64)
    on_edge = np.zeros((h, w), dtype=bool)
    n = len(vertices)
    for i in range(n):
        r0, c0 = vertices[i]
        r1, c1 = vertices[(i + 1) % n]
        # exact on-segment test
        colin = (r1 - r0) * (cols - c0) == (c1 - c0) * (rows - r0)
        inbox = (
            (rows >= min(r0, r1)) & (rows <= max(r0, r1))
            & (cols >= min(c0, c1)) & (cols <= max(c0, c1))
        )
        on_edge |= colin & inbox
        if r0 == r1:
            continue
        spans = (r0 > rows) != (r1 > rows)
        # col < c0 + (row - r0) * (c1 - c0) / (r1 - r0), kept in integers
        lhs = (cols - c0) * (r1 - r0)
        rhs = (rows - r0) * (c1 - c0)
        if r1 > r0:
            crossings += spans & (lhs < rhs)
        else:
            crossings += spans & (lhs > rhs)
    return (crossings % 2 == 1) | on_edge


def fill_polygon(vertices, canvas, value=1):
    """Scanline-style fill of a polygon onto `canvas`, in place.

    Boundary lattice points are included; self-intersecting polygons fill
    by the even-odd rule.
    """
    core.check_image(canvas)
    verts = [(int(r), int(c)) for r, c in vertices]
    if len(verts) < 3:
        raise TooFewVerticesError(f"need at least 3 vertices, got {len(verts)}")
    mask = _rasterize(verts, canvas.shape)
    canvas[mask] = value
    return canvas


def convex_hull(binary):
    """Filled convex hull of the foreground (nonzero) pixels, as uint8 0/1."""
    core.check_image(binary)
    rr, cc = np.nonzero(binary)
    if rr.size == 0:
        raise NoForegroundError("convex hull needs at least one foreground pixel")
    verts = hull_vertices(zip(rr.tolist(), cc.tolist()))
    out = np.zeros(binary.shape, dtype=np.uint8)
    if len(verts) == 1:
        out[verts[0]] = 1
    elif len(verts) == 2:
        out[_rasterize(verts, binary.shape)] = 1
    else:
        fill_polygon(verts, out, 1)
    return out
