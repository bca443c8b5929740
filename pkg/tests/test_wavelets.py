import numpy as np
import pytest

import oracles
from visionkit.errors import KindMismatchError, OddDimensionsError
from visionkit.wavelets import (
    LOWPASS,
    highpass,
    wavelet_forward,
    wavelet_inverse,
)


rng = np.random.default_rng(0)


def test_filter_invariants():
    for name, h in LOWPASS.items():
        h = np.asarray(h)
        assert abs(h.sum() - np.sqrt(2.0)) < 1e-12, name
        assert abs((h * h).sum() - 1.0) < 1e-12, name
        g = highpass(h)
        assert abs(g.sum()) < 1e-12, name
        assert abs((g * h).sum()) < 1e-12, name  # orthogonal pair


def test_haar_constant():
    img = np.full((8, 8), 5.0)
    out = wavelet_forward(img, "haar")
    assert np.allclose(out[:4, :4], 10.0, atol=1e-12)  # LL gains a factor 2
    assert np.allclose(out[:4, 4:], 0.0, atol=1e-12)
    assert np.allclose(out[4:, :], 0.0, atol=1e-12)


def test_haar_two_by_two():
    img = np.array([[1.0, 2.0], [3.0, 4.0]])
    out = wavelet_forward(img, "haar")
    assert abs(out[0, 0] - (1 + 2 + 3 + 4) / 2.0) < 1e-12


def test_haar_blockwise_constant_kills_details():
    blocks = rng.normal(0, 1, (4, 4))
    img = np.kron(blocks, np.ones((2, 2)))
    out = wavelet_forward(img, "haar")
    assert np.max(np.abs(out[:4, 4:])) < 1e-12
    assert np.max(np.abs(out[4:, :])) < 1e-12
    assert np.allclose(out[:4, :4], 2.0 * blocks, atol=1e-12)


@pytest.mark.parametrize("name", ["haar", "d4", "d6", "d8"])
def test_roundtrip(name):
    img = rng.normal(0, 1, (32, 32))
    back = wavelet_inverse(wavelet_forward(img, name), name)
    assert np.max(np.abs(back - img)) < 1e-10


@pytest.mark.parametrize("name", ["haar", "d4", "d6", "d8"])
def test_energy_conserved(name):
    img = rng.normal(0, 1, (64, 64))
    out = wavelet_forward(img, name)
    e0 = (img * img).sum()
    e1 = (out * out).sum()
    assert abs(e1 - e0) / e0 < 1e-9


def test_forward_is_linear():
    a = rng.normal(0, 1, (16, 16))
    b = rng.normal(0, 1, (16, 16))
    lhs = wavelet_forward(2.0 * a - 0.5 * b, "d4")
    rhs = 2.0 * wavelet_forward(a, "d4") - 0.5 * wavelet_forward(b, "d4")
    assert np.max(np.abs(lhs - rhs)) < 1e-10


@pytest.mark.parametrize("name", ["haar", "d4", "d6", "d8"])
def test_rows_match_1d_oracle(name):
    h = np.asarray(LOWPASS[name])
    g = highpass(h)
    img = rng.normal(0, 1, (2, 16))
    out = wavelet_forward(img, name)
    # apply the separable transform by hand: rows, then columns
    rows = np.empty_like(img)
    for r in range(2):
        rows[r] = oracles.wavelet_1d_oracle(img[r], h, g)
    want = np.empty_like(img)
    for c in range(16):
        want[:, c] = oracles.wavelet_1d_oracle(rows[:, c], h, g)
    assert np.max(np.abs(out - want)) < 1e-12


def test_rejects_odd_dims_and_wrong_kind():
    with pytest.raises(OddDimensionsError):
        wavelet_forward(np.zeros((7, 8)), "haar")
    with pytest.raises(OddDimensionsError):
        wavelet_forward(np.zeros((8, 9)), "haar")
    with pytest.raises(KindMismatchError):
        wavelet_forward(np.zeros((8, 8), dtype=np.float32), "haar")
    with pytest.raises(ValueError):
        wavelet_forward(np.zeros((8, 8)), "d5")


def test_out_of_place():
    img = rng.normal(0, 1, (8, 8))
    keep = img.copy()
    wavelet_forward(img, "d4")
    assert np.array_equal(img, keep)
