import numpy as np
import pytest

import oracles
from visionkit import core
from visionkit.errors import KindMismatchError, ShapeMismatchError
from visionkit.filters import disc_se
from visionkit.morphology import close, dilate, erode, open as open_


def random_images(n, shape=(16, 16), seed=0, dtype=np.uint8, hi=256):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        yield rng.integers(0, hi, shape).astype(dtype)


SES = [core.make_cross_3x3(), core.make_box(3), disc_se(2)]


def test_identity_se():
    se = core.StructuringElement(np.ones((1, 1), dtype=bool))
    img = np.arange(64, dtype=np.uint8).reshape(8, 8)
    assert np.array_equal(erode(img, se), img)
    assert np.array_equal(dilate(img, se), img)


def test_block_erosion():
    img = np.zeros((7, 7), dtype=np.uint8)
    img[1:6, 1:6] = 255
    out = erode(img, core.make_box(3))
    expected = np.zeros((7, 7), dtype=np.uint8)
    expected[2:5, 2:5] = 255
    assert np.array_equal(out, expected)


def test_erode_saturates_at_zero():
    img = np.full((3, 3), 3, dtype=np.uint8)
    weights = np.full((3, 3), 5.0)
    se = core.StructuringElement(np.ones((3, 3), dtype=bool), weights)
    assert np.all(erode(img, se) == 0)


def test_dilate_saturates_at_max():
    img = np.full((3, 3), 250, dtype=np.uint8)
    weights = np.full((3, 3), 50.0)
    se = core.StructuringElement(np.ones((3, 3), dtype=bool), weights)
    assert np.all(dilate(img, se) == 255)


def test_dilate_single_pixel_paints_se():
    img = np.zeros((5, 5), dtype=np.uint8)
    img[2, 2] = 9
    out = dilate(img, core.make_cross_3x3())
    expected = np.zeros((5, 5), dtype=np.uint8)
    for dr, dc in ((0, 0), (-1, 0), (1, 0), (0, -1), (0, 1)):
        expected[2 + dr, 2 + dc] = 9
    assert np.array_equal(out, expected)


@pytest.mark.parametrize("se", SES)
def test_erode_dilate_match_oracle(se):
    for img in random_images(20, seed=1):
        assert np.array_equal(erode(img, se), oracles.erode_oracle(img, se))
        assert np.array_equal(dilate(img, se), oracles.dilate_oracle(img, se))


@pytest.mark.parametrize("dtype,hi", [(np.uint16, 4096), (np.int32, 100000)])
def test_oracle_match_other_kinds(dtype, hi):
    se = core.make_box(3)
    for img in random_images(5, seed=2, dtype=dtype, hi=hi):
        assert np.array_equal(erode(img, se), oracles.erode_oracle(img, se))
        assert np.array_equal(dilate(img, se), oracles.dilate_oracle(img, se))


def test_oracle_match_float():
    rng = np.random.default_rng(3)
    se = disc_se(2)
    for _ in range(5):
        img = rng.normal(0, 10, (16, 16))
        assert np.array_equal(erode(img, se), oracles.erode_oracle(img, se))
        assert np.array_equal(dilate(img, se), oracles.dilate_oracle(img, se))


def test_fast_and_generic_paths_identical():
    # a non-contiguous input takes the pure python path
    se = core.StructuringElement(
        np.ones((3, 3), dtype=bool),
        np.linspace(-2.0, 2.0, 9).reshape(3, 3),
    )
    for img in random_images(10, seed=4):
        wide = np.zeros((16, 32), dtype=np.uint8)
        wide[:, ::2] = img
        view = wide[:, ::2]
        assert not view.flags.c_contiguous
        assert np.array_equal(erode(img, se), erode(view, se))
        assert np.array_equal(dilate(img, se), dilate(view, se))


def test_duality_under_complement():
    se = core.make_cross_3x3()
    for img in random_images(100, seed=5, hi=2):
        img *= 255
        lhs = dilate(img, se)
        rhs = 255 - erode(255 - img, se)
        assert np.array_equal(lhs, rhs)


def test_open_anti_extensive_close_extensive():
    se = core.make_box(3)
    for img in random_images(10, seed=6):
        assert np.all(open_(img, se) <= img)
        assert np.all(close(img, se) >= img)


def test_open_close_idempotent():
    se = core.make_cross_3x3()
    for img in random_images(10, seed=7):
        once = open_(img, se)
        assert np.array_equal(open_(once, se), once)
        once = close(img, se)
        assert np.array_equal(close(once, se), once)


def test_erode_monotone():
    se = disc_se(2)
    rng = np.random.default_rng(8)
    for _ in range(10):
        a = rng.integers(0, 200, (16, 16)).astype(np.uint8)
        b = a + rng.integers(0, 55, (16, 16)).astype(np.uint8)
        assert np.all(erode(a, se) <= erode(b, se))
        assert np.all(dilate(a, se) <= dilate(b, se))


def test_open_close_match_composition():
    se = core.make_cross_3x3()
    for img in random_images(5, seed=9):
        assert np.array_equal(open_(img, se), dilate(erode(img, se), se))
        assert np.array_equal(close(img, se), erode(dilate(img, se), se))


def test_out_parameter():
    img = next(random_images(1, seed=10))
    out = np.empty_like(img)
    ret = erode(img, core.make_cross_3x3(), out=out)
    assert ret is out
    assert np.array_equal(out, erode(img, core.make_cross_3x3()))
    with pytest.raises(KindMismatchError):
        erode(img, core.make_cross_3x3(), out=np.empty((16, 16), dtype=np.int32))
    with pytest.raises(ShapeMismatchError):
        erode(img, core.make_cross_3x3(), out=np.empty((8, 16), dtype=np.uint8))


def test_out_must_not_alias_input():
    img = next(random_images(1, seed=11))
    with pytest.raises(ValueError):
        erode(img, core.make_cross_3x3(), out=img)
