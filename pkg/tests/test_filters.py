import numpy as np
import pytest

import oracles
from visionkit import core
from visionkit.errors import EvenKernelError, NonPositiveSigmaError
from visionkit.filters import (
    convolve,
    disc_se,
    gaussian_filter,
    gaussian_kernel_1d,
    median_filter,
    median_filter_sorted,
    sobel,
)


rng = np.random.default_rng(42)


def test_convolve_identity():
    k = np.zeros((3, 3))
    k[1, 1] = 1.0
    img = rng.normal(0, 1, (12, 12))
    assert np.allclose(convolve(img, k), img, atol=1e-15)


def test_convolve_constant_sums_kernel():
    k = rng.normal(0, 1, (5, 3))
    img = np.full((10, 10), 2.5)
    assert np.allclose(convolve(img, k), 2.5 * k.sum(), atol=1e-12)


def test_convolve_matches_oracle():
    for _ in range(10):
        img = rng.normal(0, 1, (11, 13))
        k = rng.normal(0, 1, (3, 5))
        got = convolve(img, k)
        want = oracles.convolve_oracle(img, k)
        assert np.max(np.abs(got - want)) < 1e-12


def test_convolve_impulse_response():
    # true convolution: the impulse response is the kernel itself,
    # whereas correlation would produce the flipped kernel
    img = np.zeros((5, 5))
    img[2, 2] = 1.0
    k = np.arange(9, dtype=np.float64).reshape(3, 3)
    out = convolve(img, k)
    assert np.allclose(out[1:4, 1:4], k)


def test_convolve_linearity():
    a = rng.normal(0, 1, (9, 9))
    b = rng.normal(0, 1, (9, 9))
    k = rng.normal(0, 1, (3, 3))
    lhs = convolve(2.0 * a + 3.0 * b, k)
    rhs = 2.0 * convolve(a, k) + 3.0 * convolve(b, k)
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_convolve_even_kernel_rejected():
    img = np.zeros((8, 8))
    with pytest.raises(EvenKernelError):
        convolve(img, np.ones((2, 3)))
    with pytest.raises(EvenKernelError):
        convolve(img, np.ones((3, 4)))


def test_gaussian_kernel_normalized():
    for sigma in (0.5, 1.0, 2.0, 4.0):
        k = gaussian_kernel_1d(sigma)
        assert k.ndim == 1 and k.size % 2 == 1
        assert abs(k.sum() - 1.0) < 1e-12
        assert np.array_equal(k, k[::-1])


def test_gaussian_constant_preserved():
    img = np.full((32, 32), 7.0)
    out = gaussian_filter(img, 2.0)
    assert np.max(np.abs(out - 7.0)) < 1e-10


def test_gaussian_separable_equals_dense():
    img = rng.normal(0, 1, (32, 32))
    sigma = 1.7
    k1 = gaussian_kernel_1d(sigma)
    dense = np.outer(k1, k1)
    want = convolve(img, dense)
    got = gaussian_filter(img, sigma)
    assert np.max(np.abs(got - want)) < 1e-10


def test_gaussian_semigroup():
    # blur(s1) then blur(s2) ~ blur(sqrt(s1^2+s2^2)), approximately
    img = rng.normal(0, 1, (64, 64))
    a = gaussian_filter(gaussian_filter(img, 2.0), 1.5)
    b = gaussian_filter(img, np.hypot(2.0, 1.5))
    interior = (slice(16, 48), slice(16, 48))
    assert np.max(np.abs(a[interior] - b[interior])) < 1e-3


def test_gaussian_rejects_bad_sigma():
    with pytest.raises(NonPositiveSigmaError):
        gaussian_filter(np.zeros((4, 4)), 0.0)
    with pytest.raises(NonPositiveSigmaError):
        gaussian_filter(np.zeros((4, 4)), -1.0)


def test_sobel_constant_is_zero():
    img = np.full((16, 16), 93, dtype=np.uint8)
    assert np.all(sobel(img) == 0)
    assert np.all(sobel(img, just_filter=True) == 0.0)


def test_sobel_vertical_step():
    img = np.zeros((8, 8), dtype=np.uint8)
    img[:, 4:] = 255
    mag = sobel(img, just_filter=True)
    assert mag.dtype == np.float64
    # gradient magnitude at the step edge: |dx| = 255 * 4/8
    assert np.allclose(mag[2:6, 3:5], 127.5)
    assert np.all(mag[:, :2] == 0.0)


def test_sobel_transpose_symmetry():
    img = rng.integers(0, 256, (16, 16)).astype(np.uint8)
    a = sobel(img, just_filter=True)
    b = sobel(np.ascontiguousarray(img.T), just_filter=True)
    assert np.max(np.abs(a - b.T)) < 1e-10


def test_sobel_binary_output():
    img = rng.integers(0, 256, (16, 16)).astype(np.uint8)
    out = sobel(img)
    assert out.dtype == np.uint8
    assert set(np.unique(out)) <= {0, 1}
    mag = sobel(img, just_filter=True)
    assert np.array_equal(out, (mag > mag.mean()).astype(np.uint8))


def test_disc_se_shapes():
    cross = disc_se(1)
    assert np.array_equal(cross.mask, core.make_cross_3x3().mask)
    d2 = disc_se(2)
    assert d2.mask.shape == (5, 5)
    assert int(d2.mask.sum()) == 13
    assert np.array_equal(d2.mask, d2.mask[::-1, ::-1])


def test_median_constant():
    img = np.full((10, 10), 40, dtype=np.uint8)
    assert np.all(median_filter(img, disc_se(2)) == 40)


def test_median_removes_outlier():
    img = np.full((9, 9), 10, dtype=np.uint8)
    img[4, 4] = 255
    out = median_filter(img, disc_se(2))
    assert np.all(out == 10)


@pytest.mark.parametrize("dtype,hi", [(np.uint8, 256), (np.uint16, 1024)])
def test_median_matches_oracle(dtype, hi):
    se = disc_se(2)
    r = np.random.default_rng(5)
    for _ in range(10):
        img = r.integers(0, hi, (16, 16)).astype(dtype)
        assert np.array_equal(median_filter(img, se), oracles.median_oracle(img, se))


def test_median_float_matches_oracle():
    se = core.make_box(3)
    r = np.random.default_rng(6)
    for _ in range(5):
        img = r.normal(0, 1, (12, 12))
        got = median_filter(img, se)
        assert np.array_equal(got, oracles.median_oracle(img, se))


def test_median_histogram_and_sorted_agree():
    se = disc_se(3)
    r = np.random.default_rng(7)
    for _ in range(10):
        img = r.integers(0, 256, (20, 20)).astype(np.uint8)
        assert np.array_equal(median_filter(img, se), median_filter_sorted(img, se))


def test_median_output_is_member_of_window():
    se = core.make_cross_3x3()
    r = np.random.default_rng(8)
    img = r.integers(0, 256, (12, 12)).astype(np.uint8)
    out = median_filter(img, se)
    offs = se.offsets()
    for rr in range(12):
        for cc in range(12):
            window = {img[core.clamp_index(rr + dr, 12), core.clamp_index(cc + dc, 12)]
                      for dr, dc in offs}
            assert out[rr, cc] in window
