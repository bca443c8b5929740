import numpy as np
import pytest

import oracles
from visionkit import core
from visionkit.errors import (
    AllForegroundError,
    NoMarkersError,
    ShapeMismatchError,
)
from visionkit.watershed import cwatershed, distance_squared


def test_single_marker_floods_everything():
    rng = np.random.default_rng(0)
    surface = rng.integers(0, 256, (10, 10)).astype(np.uint8)
    markers = np.zeros((10, 10), dtype=np.int32)
    markers[3, 3] = 7
    out = cwatershed(surface, markers)
    assert out.dtype == np.int32
    assert np.all(out == 7)


def test_two_basins_1d():
    surface = np.array([[0, 1, 2, 3, 2, 1, 0]], dtype=np.uint8)
    markers = np.zeros((1, 7), dtype=np.int32)
    markers[0, 0] = 1
    markers[0, 6] = 2
    out = cwatershed(surface, markers)
    assert out.tolist() == [[1, 1, 1, 1, 2, 2, 2]]


def test_markers_everywhere_preserved():
    rng = np.random.default_rng(1)
    surface = rng.integers(0, 256, (8, 8)).astype(np.uint8)
    markers = rng.integers(1, 5, (8, 8)).astype(np.int32)
    out = cwatershed(surface, markers)
    assert np.array_equal(out, markers)


def test_partition_and_marker_preservation():
    rng = np.random.default_rng(2)
    for _ in range(20):
        surface = rng.integers(0, 64, (16, 16)).astype(np.uint8)
        markers = np.zeros((16, 16), dtype=np.int32)
        for label in (1, 2, 3):
            r, c = rng.integers(0, 16, 2)
            markers[r, c] = label
        out = cwatershed(surface, markers)
        present = set(np.unique(markers)) - {0}
        assert set(np.unique(out)) <= present
        assert np.all(out > 0)
        keep = markers > 0
        assert np.array_equal(out[keep], markers[keep])


def test_regions_connected():
    rng = np.random.default_rng(3)
    surface = rng.integers(0, 64, (16, 16)).astype(np.uint8)
    markers = np.zeros((16, 16), dtype=np.int32)
    markers[2, 2] = 1
    markers[13, 13] = 2
    out = cwatershed(surface, markers)
    for label in (1, 2):
        region = out == label
        seen = np.zeros_like(region)
        seed = tuple(np.argwhere(markers == label)[0])
        stack = [seed]
        seen[seed] = True
        while stack:
            r, c = stack.pop()
            for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
                rr, cc = r + dr, c + dc
                if 0 <= rr < 16 and 0 <= cc < 16 and region[rr, cc] and not seen[rr, cc]:
                    seen[rr, cc] = True
                    stack.append((rr, cc))
        assert np.array_equal(seen, region)


def test_matches_fifo_oracle():
    rng = np.random.default_rng(4)
    for _ in range(30):
        surface = rng.integers(0, 16, (16, 16)).astype(np.uint8)
        markers = np.zeros((16, 16), dtype=np.int32)
        n = rng.integers(2, 6)
        for label in range(1, n + 1):
            r, c = rng.integers(0, 16, 2)
            markers[r, c] = label
        got = cwatershed(surface, markers)
        want = oracles.watershed_oracle(surface, markers, core.make_cross_3x3())
        assert np.array_equal(got, want)


def test_matches_oracle_box_se():
    rng = np.random.default_rng(5)
    se = core.make_box(3)
    for _ in range(10):
        surface = rng.integers(0, 16, (12, 12)).astype(np.uint8)
        markers = np.zeros((12, 12), dtype=np.int32)
        markers[1, 1] = 1
        markers[10, 10] = 2
        markers[1, 10] = 3
        got = cwatershed(surface, markers, se)
        want = oracles.watershed_oracle(surface, markers, se)
        assert np.array_equal(got, want)


def test_matches_oracle_float_surface():
    # float surfaces take the heap path rather than the bucket queue
    rng = np.random.default_rng(8)
    for _ in range(10):
        surface = np.round(rng.random((12, 12)) * 8.0)
        markers = np.zeros((12, 12), dtype=np.int32)
        markers[2, 2] = 1
        markers[9, 9] = 2
        got = cwatershed(surface, markers)
        want = oracles.watershed_oracle(surface, markers, core.make_cross_3x3())
        assert np.array_equal(got, want)


def test_bucket_and_heap_paths_agree():
    rng = np.random.default_rng(9)
    for _ in range(10):
        surface = rng.integers(0, 256, (16, 16)).astype(np.uint8)
        markers = np.zeros((16, 16), dtype=np.int32)
        markers[1, 1] = 1
        markers[14, 14] = 2
        markers[1, 14] = 3
        a = cwatershed(surface, markers)
        b = cwatershed(surface.astype(np.float64), markers)
        assert np.array_equal(a, b)


def test_watershed_errors():
    surface = np.zeros((4, 4), dtype=np.uint8)
    with pytest.raises(NoMarkersError):
        cwatershed(surface, np.zeros((4, 4), dtype=np.int32))
    with pytest.raises(ShapeMismatchError):
        cwatershed(surface, np.ones((4, 5), dtype=np.int32))
    markers = np.zeros((4, 4), dtype=np.int32)
    markers[0, 0] = -1
    with pytest.raises(ValueError):
        cwatershed(surface, markers)


def test_distance_all_background():
    img = np.zeros((6, 6), dtype=np.uint8)
    out = distance_squared(img)
    assert np.all(out == 0)


def test_distance_single_background_pixel():
    img = np.ones((5, 5), dtype=np.uint8)
    img[2, 2] = 0
    out = distance_squared(img)
    for r in range(5):
        for c in range(5):
            assert out[r, c] == (r - 2) ** 2 + (c - 2) ** 2


def test_distance_matches_oracle():
    rng = np.random.default_rng(6)
    for _ in range(30):
        img = (rng.random((32, 32)) < 0.9).astype(np.uint8)
        if not np.any(img == 0):
            img[0, 0] = 0
        got = distance_squared(img)
        want = oracles.distance_squared_oracle(img)
        assert got.dtype == np.int32
        assert np.array_equal(got, want.astype(np.int32))


def test_distance_all_foreground_rejected():
    with pytest.raises(AllForegroundError):
        distance_squared(np.ones((4, 4), dtype=np.uint8))


def test_distance_zero_on_background_positive_on_foreground():
    rng = np.random.default_rng(7)
    img = (rng.random((20, 20)) < 0.5).astype(np.uint8)
    img[0, 0] = 0
    out = distance_squared(img)
    assert np.all(out[img == 0] == 0)
    assert np.all(out[img != 0] > 0)


def test_matches_oracle_wide_labels():
    # labels above 63 select the wider cell encoding on the fast path
    rng = np.random.default_rng(11)
    for _ in range(10):
        surface = rng.integers(0, 32, (12, 12)).astype(np.uint8)
        markers = np.zeros((12, 12), dtype=np.int32)
        for label in (70, 500, 100000):
            markers[rng.integers(0, 12), rng.integers(0, 12)] = label
        if not markers.any():
            continue
        got = cwatershed(surface, markers)
        want = oracles.watershed_oracle(surface, markers, core.make_cross_3x3())
        assert np.array_equal(got, want)
