"""Command-line front end.

Three subcommands:

* ``visionkit apply <op> [flags] <in> [<out>]`` runs a single operation on
  a Netpbm image.  Feature operations print their vector to stdout, one
  value per line; everything else writes an image.
* ``visionkit bench [--reps N] <in>`` times a fixed set of operations and
  reports each as a multiple of the time one full maximum-pixel scan of
  the same image takes.  Machine-readable ``name<TAB>multiple`` lines go
  to stdout, the human-readable table to stderr.
* ``visionkit surf-demo [--k K] [--seed S] [--max-points M] <in> <out>``
  detects SURF points, clusters the descriptors with a small built-in
  k-means (demo plumbing only; the library itself has no learning code),
  and writes the detections as colored squares over the image.

Exit codes: 0 success, 1 operation error, 2 usage error.
"""

import argparse
import sys
import time

import numpy as np

from . import (
    core,
    errors,
    features,
    filters,
    imageio,
    morphology,
    polygon,
    watershed,
    wavelets,
)
from .surf import points_to_array, show_surf, surf as run_surf

#: Demo overlay palette (5 colors).
PALETTE = ((255, 25, 1), (203, 77, 37), (151, 129, 56), (99, 181, 52), (47, 233, 5))

IMAGE_OPS = (
    "erode", "dilate", "open", "close", "median", "gaussian", "sobel",
    "convolve", "cwatershed", "distance", "haar", "daubechies", "convexhull",
)
FEATURE_OPS = ("haralick", "zernike", "lbp", "tas", "pftas")


def format_feature_value(v):
    """Canonical text form of one feature value (shortest round-trip repr)."""
    return repr(float(v))


def _load(path):
    img = imageio.read_grey(path)
    if img.dtype == np.float64:
        img = core.convert(img, np.uint8)
    return img


def _write_result(img, path):
    if img.dtype in (np.dtype(np.uint8), np.dtype(np.uint16)):
        imageio.write_pgm(img, path)
    elif img.dtype == np.int32:
        imageio.write_pgm(core.convert(img, np.uint16), path)
    else:
        imageio.write_pgm(core.convert(img, np.uint8), path)


def _structuring_element(args):
    if args.se == "box":
        return core.make_box(args.size)
    if args.se == "disc" or (args.radius is not None and args.op in ("median",)):
        return filters.disc_se(args.radius if args.radius is not None else 1)
    return core.make_cross_3x3()


def _read_kernel(path):
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                rows.append([float(t) for t in line.split()])
    return np.array(rows, dtype=np.float64)


def cmd_apply(args):
    img = _load(args.input)
    op = args.op
    if op in FEATURE_OPS:
        if op == "haralick":
            vec = features.haralick(img)
        elif op == "zernike":
            vec = features.zernike_moments(img, args.radius or min(img.shape) / 2.0,
                                           args.degree)
        elif op == "lbp":
            vec = features.lbp(img, args.radius or 1.0, args.points)
        elif op == "tas":
            vec = features.tas(img)
        else:
            vec = features.pftas(img)
        for v in vec:
            print(format_feature_value(v))
        return 0

    if args.output is None:
        raise errors.VisionkitError(f"operation {op!r} needs an output path")

    if op in ("erode", "dilate", "open", "close", "median"):
        se = _structuring_element(args)
        fn = {"erode": morphology.erode, "dilate": morphology.dilate,
              "open": morphology.open, "close": morphology.close,
              "median": filters.median_filter}[op]
        result = fn(img, se)
    elif op == "gaussian":
        result = filters.gaussian_filter(img, args.sigma)
    elif op == "sobel":
        if args.just_filter:
            result = filters.sobel(img, just_filter=True)
        else:
            result = filters.sobel(img) * np.uint8(255)
    elif op == "convolve":
        if not args.kernel:
            raise errors.VisionkitError("convolve needs --kernel FILE")
        result = filters.convolve(img, _read_kernel(args.kernel))
    elif op == "cwatershed":
        if not args.markers:
            raise errors.VisionkitError("cwatershed needs --markers FILE")
        markers = imageio.read_pgm(args.markers).astype(np.int32)
        result = watershed.cwatershed(img, markers)
    elif op == "distance":
        result = watershed.distance_squared(img)
    elif op in ("haar", "daubechies"):
        kind = "haar" if op == "haar" else f"d{args.order}"
        result = wavelets.wavelet_forward(img.astype(np.float64), kind)
    else:  # convexhull
        result = polygon.convex_hull(img) * np.uint8(255)
    _write_result(result, args.output)
    return 0


# ---------------------------------------------------------------------------
# bench

def _bench_markers(shape):
    markers = np.zeros(shape, dtype=np.int32)
    label = 1
    for i in range(4):
        for j in range(4):
            r = (2 * i + 1) * shape[0] // 8
            c = (2 * j + 1) * shape[1] // 8
            markers[r, c] = label
            label += 1
    return markers


def _median_time(fn, reps):
    times = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return float(np.median(times))


def cmd_bench(args):
    img = _load(args.input)
    if img.dtype != np.uint8:
        img = core.convert(img, np.uint8)
    reps = args.reps
    h, w = img.shape
    even = img[: h - h % 2, : w - w % 2]
    f64 = even.astype(np.float64)
    cross = core.make_cross_3x3()
    disc2 = filters.disc_se(2)
    disc10 = filters.disc_se(10)
    out = np.empty_like(img)
    markers = _bench_markers(img.shape)

    ops = [
        ("erode", lambda: morphology.erode(img, cross, out=out)),
        ("dilate", lambda: morphology.dilate(img, cross, out=out)),
        ("open", lambda: morphology.open(img, cross, out=out)),
        ("median(2)", lambda: filters.median_filter(img, disc2, out=out)),
        ("median(10)", lambda: filters.median_filter(img, disc10, out=out)),
        ("sobel", lambda: filters.sobel(img, just_filter=True)),
        ("cwatershed", lambda: watershed.cwatershed(img, markers)),
        ("daubechies", lambda: wavelets.wavelet_forward(f64, "d4")),
        ("haralick", lambda: features.haralick(img)),
    ]

    img.max()  # warm the page cache before the baseline measurement
    baseline = _median_time(lambda: img.max(), reps)
    print(f"baseline max-scan on {h}x{w} {core.kind_name(img.dtype)}: "
          f"{baseline * 1e3:.4f} ms (median of {reps})", file=sys.stderr)
    print("sobel row measures the raw filter (no thresholding)", file=sys.stderr)
    rows = []
    for name, fn in ops:
        fn()  # warmup (JIT compilation, allocator)
        multiple = _median_time(fn, reps) / baseline
        rows.append((name, multiple))
    width = max(len(n) for n, _ in rows)
    for name, multiple in rows:
        print(f"{name:<{width}}  {multiple:10.1f}x", file=sys.stderr)
        print(f"{name}\t{multiple}")
    return 0


# ---------------------------------------------------------------------------
# surf demo

def demo_kmeans(vectors, k, seed=0):
    """Lloyd's k-means with k-means++ seeding (demo-only plumbing).

    Runs at most 100 iterations, stopping once the relative inertia change
    drops below 1e-6.  Returns (assignments, centers).
    """
    vectors = np.asarray(vectors, dtype=np.float64)
    n = len(vectors)
    if k < 1 or k > n:
        raise errors.TooFewVectorsError(f"need 1 <= k <= {n} vectors, got k={k}")
    rng = np.random.default_rng(seed)
    centers = np.empty((k, vectors.shape[1]))
    centers[0] = vectors[rng.integers(n)]
    d2 = ((vectors - centers[0]) ** 2).sum(axis=1)
    for i in range(1, k):
        total = d2.sum()
        if total > 0:
            idx = rng.choice(n, p=d2 / total)
        else:
            idx = rng.integers(n)
        centers[i] = vectors[idx]
        d2 = np.minimum(d2, ((vectors - centers[i]) ** 2).sum(axis=1))

    prev_inertia = np.inf
    assignments = np.zeros(n, dtype=np.int64)
    for _ in range(100):
        dists = ((vectors[:, np.newaxis, :] - centers[np.newaxis, :, :]) ** 2).sum(axis=2)
        assignments = dists.argmin(axis=1)
        inertia = float(dists[np.arange(n), assignments].sum())
        for i in range(k):
            sel = assignments == i
            if sel.any():
                centers[i] = vectors[sel].mean(axis=0)
        if prev_inertia - inertia <= 1e-6 * max(prev_inertia, 1e-300):
            break
        prev_inertia = inertia
    return assignments, centers


def cmd_surf_demo(args):
    img = _load(args.input)
    if img.dtype != np.uint8:
        img = core.convert(img, np.uint8)
    points = run_surf(img, 4, 6, 2)
    if not points:
        raise errors.VisionkitError("no interest points detected")
    rows = points_to_array(points)
    descrs = rows[:, 6:]
    k = min(args.k, len(points))
    values, _ = demo_kmeans(descrs, k, seed=args.seed)
    n = min(args.max_points, len(points))
    overlay = show_surf(img, points[:n], values[:n].tolist(), PALETTE)
    imageio.write_ppm(overlay, args.output)
    print(f"{len(points)} interest points, drew {n}", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="visionkit",
        description="2D image processing toolkit (Netpbm images in and out)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("apply", help="run one operation on an image")
    p.add_argument("op", choices=IMAGE_OPS + FEATURE_OPS)
    p.add_argument("input")
    p.add_argument("output", nargs="?")
    p.add_argument("--se", choices=("cross", "box", "disc"), default="cross",
                   help="structuring element (default: 3x3 cross)")
    p.add_argument("--size", type=int, default=3, help="box SE side length")
    p.add_argument("--radius", type=float, default=None,
                   help="disc SE / zernike / lbp radius")
    p.add_argument("--sigma", type=float, default=1.0, help="gaussian sigma")
    p.add_argument("--kernel", help="text file of kernel rows for convolve")
    p.add_argument("--markers", help="PGM label image for cwatershed")
    p.add_argument("--order", type=int, choices=(4, 6, 8), default=4,
                   help="daubechies order")
    p.add_argument("--degree", type=int, default=8, help="zernike degree")
    p.add_argument("--points", type=int, default=8, help="lbp circle points")
    p.add_argument("--just-filter", action="store_true",
                   help="sobel: raw magnitude instead of thresholded edges")

    p = sub.add_parser("bench", help="normalized timing table")
    p.add_argument("input")
    p.add_argument("--reps", type=int, default=5,
                   help="repetitions per op; the median is reported")

    p = sub.add_parser("surf-demo", help="SURF detection overlay demo")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--k", type=int, default=5, help="descriptor clusters")
    p.add_argument("--seed", type=int, default=0, help="clustering seed")
    p.add_argument("--max-points", type=int, default=64,
                   help="points drawn, strongest first")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "apply" and args.op == "median" and args.radius is not None:
        args.se = "disc"
    handlers = {"apply": cmd_apply, "bench": cmd_bench, "surf-demo": cmd_surf_demo}
    try:
        return handlers[args.command](args)
    except (errors.VisionkitError, OSError) as exc:
        print(f"visionkit: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
