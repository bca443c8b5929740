"""Seeded watershed and the exact squared Euclidean distance transform."""

import numba
import numpy as np

from . import core
from .errors import AllForegroundError, NoMarkersError, ShapeMismatchError


@numba.njit(nogil=True, cache=True)
def _flood(surface, markers, drs, dcs):
    # Priority flood: pop pixels in (surface value, insertion order), give
    # each unlabeled popped pixel the label of the neighbor that queued it.
    # The heap is a manual binary heap over parallel arrays so insertion
    # order can act as the tie-break.
    h, w = surface.shape
    out = markers.copy()
    k = drs.shape[0]

    cap = 1024
    hp = np.empty(cap, dtype=np.float64)   # priority: surface value
    hs = np.empty(cap, dtype=np.int64)     # insertion sequence
    hx = np.empty(cap, dtype=np.int64)     # raveled pixel index
    hl = np.empty(cap, dtype=np.int32)     # label carried in
    n = 0
    seq = 0

    for r in range(h):
        for c in range(w):
            lab = out[r, c]
            if lab == 0:
                continue
            for j in range(k):
                rr = r + drs[j]
                cc = c + dcs[j]
                if rr < 0 or rr >= h or cc < 0 or cc >= w:
                    continue
                if out[rr, cc] != 0:
                    continue
                if n == cap:
                    cap *= 2
                    hp2 = np.empty(cap, dtype=np.float64); hp2[:n] = hp[:n]; hp = hp2
                    hs2 = np.empty(cap, dtype=np.int64); hs2[:n] = hs[:n]; hs = hs2
                    hx2 = np.empty(cap, dtype=np.int64); hx2[:n] = hx[:n]; hx = hx2
                    hl2 = np.empty(cap, dtype=np.int32); hl2[:n] = hl[:n]; hl = hl2
                i = n
                n += 1
                hp[i] = surface[rr, cc]
                hs[i] = seq
                hx[i] = rr * w + cc
                hl[i] = lab
                seq += 1
                while i > 0:
                    p = (i - 1) >> 1
                    if hp[p] > hp[i] or (hp[p] == hp[i] and hs[p] > hs[i]):
                        hp[p], hp[i] = hp[i], hp[p]
                        hs[p], hs[i] = hs[i], hs[p]
                        hx[p], hx[i] = hx[i], hx[p]
                        hl[p], hl[i] = hl[i], hl[p]
                        i = p
                    else:
                        break

    while n > 0:
        pos = hx[0]
        lab = hl[0]
        n -= 1
        hp[0] = hp[n]; hs[0] = hs[n]; hx[0] = hx[n]; hl[0] = hl[n]
        i = 0
        while True:
            l, rgt = 2 * i + 1, 2 * i + 2
            sm = i
            if l < n and (hp[l] < hp[sm] or (hp[l] == hp[sm] and hs[l] < hs[sm])):
                sm = l
            if rgt < n and (hp[rgt] < hp[sm] or (hp[rgt] == hp[sm] and hs[rgt] < hs[sm])):
                sm = rgt
            if sm == i:
                break
            hp[sm], hp[i] = hp[i], hp[sm]
            hs[sm], hs[i] = hs[i], hs[sm]
            hx[sm], hx[i] = hx[i], hx[sm]
            hl[sm], hl[i] = hl[i], hl[sm]
            i = sm

        r = pos // w
        c = pos % w
        if out[r, c] != 0:
            continue
        out[r, c] = lab
        for j in range(k):
            rr = r + drs[j]
            cc = c + dcs[j]
            if rr < 0 or rr >= h or cc < 0 or cc >= w:
                continue
            if out[rr, cc] != 0:
                continue
            if n == cap:
                cap *= 2
                hp2 = np.empty(cap, dtype=np.float64); hp2[:n] = hp[:n]; hp = hp2
                hs2 = np.empty(cap, dtype=np.int64); hs2[:n] = hs[:n]; hs = hs2
                hx2 = np.empty(cap, dtype=np.int64); hx2[:n] = hx[:n]; hx = hx2
                hl2 = np.empty(cap, dtype=np.int32); hl2[:n] = hl[:n]; hl = hl2
            i = n
            n += 1
            hp[i] = surface[rr, cc]
            hs[i] = seq
            hx[i] = rr * w + cc
            hl[i] = lab
            seq += 1
            while i > 0:
                p = (i - 1) >> 1
                if hp[p] > hp[i] or (hp[p] == hp[i] and hs[p] > hs[i]):
                    hp[p], hp[i] = hp[i], hp[p]
                    hs[p], hs[i] = hs[i], hs[p]
                    hx[p], hx[i] = hx[i], hx[p]
                    hl[p], hl[i] = hl[i], hl[p]
                    i = p
                else:
                    break
    return out


@numba.njit(nogil=True, cache=True, inline="always")
def _ctz64(x):
    n = 0
    if x & np.uint64(0xFFFFFFFF) == np.uint64(0):
        n += 32
        x >>= np.uint64(32)
    if x & np.uint64(0xFFFF) == np.uint64(0):
        n += 16
        x >>= np.uint64(16)
    if x & np.uint64(0xFF) == np.uint64(0):
        n += 8
        x >>= np.uint64(8)
    if x & np.uint64(0xF) == np.uint64(0):
        n += 4
        x >>= np.uint64(4)
    if x & np.uint64(0x3) == np.uint64(0):
        n += 2
        x >>= np.uint64(2)
    if x & np.uint64(0x1) == np.uint64(0):
        n += 1
    return n


@numba.njit(nogil=True, cache=True)
def _flood_bucket_cross(cells, wp, npix, qflag):
    # Cross-connectivity specialization of _flood_bucket for U8 surfaces.
    # `cells` is the flattened padded image with the whole flood state
    # packed into one small integer per pixel (int16 when labels fit in
    # 6 bits, int32 otherwise; numba specializes this source for both):
    #   free        surface value (0..255)
    #   marker      label << 8 | surface
    #   queued      qflag | label << 8 | surface
    #   border ring qflag
    # A pixel's label is fixed at push time (first push wins; exact because
    # the priority, the surface value at the pixel itself, is the same for
    # every potential pusher and ties break first-in-first-out), so a pop
    # never writes its own cell, only inspects neighbors.  The per-level
    # FIFOs live in chunked index arrays: consecutive pops read the pool
    # sequentially and their random cell loads are mutually independent, so
    # the out-of-order core overlaps the cache misses instead of waiting on
    # them one at a time.  The flood is memory-latency-bound, hence the
    # narrowest element type that fits.
    QFLAG = qflag
    CH = 1024
    nchunks = 257 + npix // CH
    pool = np.empty(nchunks * CH, dtype=np.int32)
    chunk_next = np.full(nchunks, -1, dtype=np.int32)
    head_chunk = np.arange(256).astype(np.int32)
    tail_chunk = np.arange(256).astype(np.int32)
    read_pos = np.zeros(256, dtype=np.int32)
    write_pos = np.zeros(256, dtype=np.int32)
    count = np.zeros(256, dtype=np.int32)
    occ = np.zeros(4, dtype=np.uint64)
    nalloc = 256
    size = 0
    wmin = 0
    n = cells.shape[0]

    for idx in range(wp + 1, n - wp - 1):
        v = cells[idx]
        if v < 256 or v >= QFLAG:
            continue
        lab = v >> 8
        for j in range(4):
            if j == 0:
                q = idx - wp
            elif j == 1:
                q = idx - 1
            elif j == 2:
                q = idx + 1
            else:
                q = idx + wp
            s = cells[q]
            if s >= 256:
                continue
            cells[q] = QFLAG | (lab << 8) | s
            if write_pos[s] == CH:
                nc = nalloc
                nalloc += 1
                chunk_next[tail_chunk[s]] = nc
                tail_chunk[s] = nc
                write_pos[s] = 0
            pool[tail_chunk[s] * CH + write_pos[s]] = q
            write_pos[s] += 1
            if count[s] == 0:
                occ[s >> 6] |= np.uint64(1) << np.uint64(s & 63)
                if (s >> 6) < wmin:
                    wmin = s >> 6
            count[s] += 1
            size += 1

    while size > 0:
        wi = wmin
        while occ[wi] == np.uint64(0):
            wi += 1
        wmin = wi
        cur = (wi << 6) + _ctz64(occ[wi])
        if read_pos[cur] == CH:
            hc = chunk_next[head_chunk[cur]]
            head_chunk[cur] = hc
            read_pos[cur] = 0
        else:
            hc = head_chunk[cur]
        rp = read_pos[cur]
        idx = pool[hc * CH + rp]
        read_pos[cur] = rp + 1
        count[cur] -= 1
        if count[cur] == 0:
            occ[wi] &= ~(np.uint64(1) << np.uint64(cur & 63))
        size -= 1
        lab = (cells[idx] & (QFLAG - 1)) >> 8
        for j in range(4):
            if j == 0:
                q = idx - wp
            elif j == 1:
                q = idx - 1
            elif j == 2:
                q = idx + 1
            else:
                q = idx + wp
            s = cells[q]
            if s >= 256:
                continue
            cells[q] = QFLAG | (lab << 8) | s
            if write_pos[s] == CH:
                nc = nalloc
                nalloc += 1
                chunk_next[tail_chunk[s]] = nc
                tail_chunk[s] = nc
                write_pos[s] = 0
            pool[tail_chunk[s] * CH + write_pos[s]] = q
            write_pos[s] += 1
            if count[s] == 0:
                occ[s >> 6] |= np.uint64(1) << np.uint64(s & 63)
                if (s >> 6) < wmin:
                    wmin = s >> 6
            count[s] += 1
            size += 1


@numba.njit(nogil=True, cache=True)
def _flood_bucket(surface, markers, drs, dcs, nlevels):
    # Same flood order as _flood, specialized for small integer surfaces:
    # one FIFO per gray level replaces the heap.  An entry's priority is
    # the surface value at its target pixel, so all queued entries for one
    # pixel share a priority and the earliest wins the tie-break; keeping
    # only the first push per pixel is therefore exact, and bounds the
    # queue at one entry per pixel.  A bitset over levels locates the
    # lowest nonempty bucket without scanning them one by one.
    h, w = surface.shape
    out = markers.copy()
    k = drs.shape[0]
    npix = h * w
    rr_arr = np.empty(npix, dtype=np.int32)
    cc_arr = np.empty(npix, dtype=np.int32)
    lab_arr = np.empty(npix, dtype=np.int32)
    nxt = np.empty(npix, dtype=np.int32)
    head = np.full(nlevels, -1, dtype=np.int32)
    tail = np.empty(nlevels, dtype=np.int32)
    occ = np.zeros((nlevels + 63) // 64, dtype=np.uint64)
    queued = np.zeros((h, w), dtype=np.uint8)
    cnt = 0
    size = 0

    for r in range(h):
        for c in range(w):
            if out[r, c] != 0:
                queued[r, c] = 1

    for r in range(h):
        for c in range(w):
            lab = out[r, c]
            if lab == 0:
                continue
            for j in range(k):
                rr = r + drs[j]
                cc = c + dcs[j]
                if rr < 0 or rr >= h or cc < 0 or cc >= w:
                    continue
                if queued[rr, cc] != 0:
                    continue
                queued[rr, cc] = 1
                i = cnt
                cnt += 1
                rr_arr[i] = rr
                cc_arr[i] = cc
                lab_arr[i] = lab
                nxt[i] = -1
                p = surface[rr, cc]
                if head[p] == -1:
                    head[p] = i
                    occ[p >> 6] |= np.uint64(1) << np.uint64(p & 63)
                else:
                    nxt[tail[p]] = i
                tail[p] = i
                size += 1

    while size > 0:
        wi = 0
        while occ[wi] == np.uint64(0):
            wi += 1
        cur = (wi << 6) + _ctz64(occ[wi])
        i = head[cur]
        nx = nxt[i]
        head[cur] = nx
        if nx == -1:
            occ[wi] &= ~(np.uint64(1) << np.uint64(cur & 63))
        size -= 1
        r = rr_arr[i]
        c = cc_arr[i]
        lab = lab_arr[i]
        out[r, c] = lab
        for j in range(k):
            rr = r + drs[j]
            cc = c + dcs[j]
            if rr < 0 or rr >= h or cc < 0 or cc >= w:
                continue
            if queued[rr, cc] != 0:
                continue
            queued[rr, cc] = 1
            i2 = cnt
            cnt += 1
            rr_arr[i2] = rr
            cc_arr[i2] = cc
            lab_arr[i2] = lab
            nxt[i2] = -1
            p = surface[rr, cc]
            if head[p] == -1:
                head[p] = i2
                occ[p >> 6] |= np.uint64(1) << np.uint64(p & 63)
            else:
                nxt[tail[p]] = i2
            tail[p] = i2
            size += 1
    return out


def cwatershed(surface, markers, se=None):
    """Seeded watershed: flood labeled markers over a height surface.

    Pixels are claimed in order of increasing surface value; ties break
    first-in-first-out, so the result is deterministic.  Every pixel ends
    up labeled; no watershed-line pixels are left unassigned.
    """
    core.check_image(surface)
    markers = np.asarray(markers)
    if markers.shape != surface.shape:
        raise ShapeMismatchError(
            f"markers shape {markers.shape} != surface shape {surface.shape}"
        )
    if markers.min() < 0:
        raise ValueError("markers: labels must be >= 0")
    if not markers.any():
        raise NoMarkersError("markers: need at least one nonzero pixel")
    if surface.dtype.kind == "f" and np.isnan(surface).any():
        raise ValueError("surface: NaN values are not orderable")
    if se is None:
        se = core.make_cross_3x3()
    offs = se.offsets()
    keep = (offs[:, 0] != 0) | (offs[:, 1] != 0)
    offs = offs[keep]
    markers32 = np.ascontiguousarray(markers, dtype=np.int32)
    if surface.dtype == np.uint8 or surface.dtype == np.uint16:
        nlevels = 256 if surface.dtype == np.uint8 else 65536
        h, w = surface.shape
        is_cross = (len(offs) == 4
                    and [tuple(o) for o in offs] == [(-1, 0), (0, -1), (0, 1), (1, 0)])
        maxlab = int(markers32.max())
        if is_cross and surface.dtype == np.uint8 and maxlab < (1 << 21):
            dt, qflag = (np.int16, 1 << 14) if maxlab < 64 else (np.int32, 1 << 29)
            cells = np.full((h + 2, w + 2), qflag, dtype=dt)
            cells[1:-1, 1:-1] = surface
            cells[1:-1, 1:-1] |= markers32.astype(dt) << 8
            _flood_bucket_cross(cells.ravel(), w + 2, h * w, dt(qflag))
            inner = (cells[1:-1, 1:-1] & (qflag - 1)) >> 8
            return np.ascontiguousarray(inner.astype(np.int32))
        return _flood_bucket(
            np.ascontiguousarray(surface, dtype=np.int32), markers32,
            offs[:, 0].copy(), offs[:, 1].copy(), nlevels,
        )
    return _flood(
        np.ascontiguousarray(surface, dtype=np.float64),
        markers32,
        offs[:, 0].copy(), offs[:, 1].copy(),
    )


_BIG = 1e15


@numba.njit(nogil=True, cache=True)
def _dt_rows(f):
    # Exact 1D squared-distance transform of every row: lower envelope of
    # the parabolas q -> f[q] + (p - q)^2.
    h, w = f.shape
    out = np.empty_like(f)
    v = np.empty(w, dtype=np.int64)
    z = np.empty(w + 1, dtype=np.float64)
    for r in range(h):
        kk = 0
        v[0] = 0
        z[0] = -np.inf
        z[1] = np.inf
        for q in range(1, w):
            s = ((f[r, q] + q * q) - (f[r, v[kk]] + v[kk] * v[kk])) / (2 * q - 2 * v[kk])
            while s <= z[kk]:
                kk -= 1
                s = ((f[r, q] + q * q) - (f[r, v[kk]] + v[kk] * v[kk])) / (2 * q - 2 * v[kk])
            kk += 1
            v[kk] = q
            z[kk] = s
            z[kk + 1] = np.inf
        kk = 0
        for p in range(w):
            while z[kk + 1] < p:
                kk += 1
            d = p - v[kk]
            out[r, p] = d * d + f[r, v[kk]]
    return out


def distance_squared(binary):
    """Exact squared Euclidean distance to the nearest background (zero) pixel.

    Uses the separable lower-envelope-of-parabolas method: a 1D transform
    along columns, then along rows.  int32 output for images addressable
    in 15 bits per axis, float64 otherwise.
    """
    core.check_image(binary)
    bg = binary == 0
    if not bg.any():
        raise AllForegroundError("distance transform needs at least one background pixel")
    h, w = binary.shape
    f = np.where(bg, 0.0, _BIG)
    f = _dt_rows(np.ascontiguousarray(f.T)).T
    d = _dt_rows(np.ascontiguousarray(f))
    if max(h, w) <= 1 << 15:
        return d.astype(np.int32)
    return d
