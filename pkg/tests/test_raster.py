import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cgvs.errors import InvalidParameterError
from cgvs.raster import (
    ColorImage,
    box_mean,
    gaussian_kernel1d,
    gaussian_smooth,
    median_filter,
    normalize01,
    resize_bilinear,
)
from oracles import naive_box_mean, naive_median

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
small_rasters = arrays(np.float64, st.tuples(st.integers(1, 12), st.integers(1, 12)), elements=finite)

# peak of the normalized 13-tap sigma=2 kernel, squared (evaluated separately)
IMPULSE_PEAK_SIGMA2 = 0.03987035621668855


class TestNormalize:
    def test_constant_is_zero(self):
        assert np.array_equal(normalize01(np.full((4, 5), 5.0)), np.zeros((4, 5)))

    def test_affine(self):
        np.testing.assert_allclose(normalize01(np.array([[0.0, 2.0, 4.0]])), [[0.0, 0.5, 1.0]])

    @given(small_rasters)
    def test_range_and_idempotence(self, x):
        y = normalize01(x)
        assert y.min() >= 0.0 and y.max() <= 1.0
        np.testing.assert_allclose(normalize01(y), y, atol=1e-12)
        if np.ptp(x) > 1e-6 * max(1.0, np.abs(x).max()):
            assert y.min() == 0.0 and y.max() == 1.0


class TestGaussian:
    def test_kernel_radius_and_sum(self):
        k = gaussian_kernel1d(2.0)
        assert k.size == 13
        assert abs(k.sum() - 1.0) < 1e-15

    def test_constant_preserved(self):
        np.testing.assert_allclose(gaussian_smooth(np.full((9, 7), 3.5), 1.7), 3.5, rtol=1e-14)

    def test_impulse_peak(self):
        x = np.zeros((33, 33))
        x[16, 16] = 1.0
        y = gaussian_smooth(x, 2.0)
        assert y[16, 16] == pytest.approx(IMPULSE_PEAK_SIGMA2, abs=1e-15)
        assert abs(y.sum() - 1.0) < 1e-6

    @pytest.mark.parametrize("sigma", [0.0, -1.0])
    def test_bad_sigma(self, sigma):
        with pytest.raises(InvalidParameterError):
            gaussian_smooth(np.zeros((3, 3)), sigma)


class TestBoxMean:
    @pytest.mark.parametrize("k", [1, 3, 5, 11])
    def test_matches_naive(self, rng, k):
        for _ in range(5):
            x = rng.random((16, 16))
            np.testing.assert_allclose(box_mean(x, k), naive_box_mean(x, k), atol=1e-9, rtol=0)

    def test_identity_and_constant(self, rng):
        x = rng.random((6, 9))
        np.testing.assert_array_equal(box_mean(x, 1), x)
        np.testing.assert_allclose(box_mean(np.full((5, 5), 2.0), 3), 2.0)

    @pytest.mark.parametrize("k", [0, 2, -3])
    def test_bad_window(self, k):
        with pytest.raises(InvalidParameterError):
            box_mean(np.zeros((4, 4)), k)


class TestMedian:
    def test_matches_naive(self, rng):
        x = rng.random((16, 16))
        np.testing.assert_array_equal(median_filter(x, 5), naive_median(x, 5))

    def test_identity_and_singleton(self):
        x = np.zeros((7, 7))
        x[3, 3] = 1.0
        np.testing.assert_array_equal(median_filter(x, 1), x)
        np.testing.assert_array_equal(median_filter(x, 3), np.zeros((7, 7)))

    def test_monotone_relabel(self, rng):
        x = rng.random((10, 10))
        relabel = np.exp  # strictly increasing
        np.testing.assert_allclose(median_filter(relabel(x), 3), relabel(median_filter(x, 3)), rtol=1e-15)

    def test_bad_window(self):
        with pytest.raises(InvalidParameterError):
            median_filter(np.zeros((4, 4)), 4)


@settings(max_examples=30, deadline=None)
@given(
    st.integers(0, 2**31 - 1),
    st.floats(-3, 3, allow_nan=False),
    st.floats(-3, 3, allow_nan=False),
)
def test_linearity(seed, a, b):
    r = np.random.default_rng(seed)
    x, y = r.random((16, 16)), r.random((16, 16))
    for f in (lambda z: gaussian_smooth(z, 1.3), lambda z: box_mean(z, 5)):
        np.testing.assert_allclose(f(a * x + b * y), a * f(x) + b * f(y), atol=1e-9, rtol=0)


def test_filters_preserve_shape(rng):
    x = rng.random((7, 13))
    for y in (gaussian_smooth(x, 2.0), box_mean(x, 11), median_filter(x, 5)):
        assert y.shape == x.shape


class TestColorImage:
    def test_from_uint8(self):
        arr = np.zeros((2, 3, 3), dtype=np.uint8)
        arr[..., 0] = 255
        img = ColorImage.from_array(arr)
        assert img.shape == (2, 3)
        np.testing.assert_array_equal(img.r, 1.0)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            ColorImage(np.zeros((2, 2)), np.zeros((2, 3)), np.zeros((2, 2)))

    def test_resize_identity(self, rng):
        x = rng.random((8, 5))
        np.testing.assert_allclose(resize_bilinear(x, (8, 5)), x)
