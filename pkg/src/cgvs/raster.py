"""Raster containers and the filtering kernels shared by every stage.

Rasters are plain 2-D ``float64`` numpy arrays indexed ``[row, col]``, i.e.
``[y, x]``. Every filter uses edge replication at the border.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import InvalidParameterError

# Spreads below this (relative to the value scale) count as a constant raster.
_FLAT_RTOL = 1e-12


@dataclass(frozen=True)
class ColorImage:
    """RGB scene with each channel stored as its own raster."""

    r: np.ndarray
    g: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        for name in ("r", "g", "b"):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            if arr.ndim != 2 or arr.size == 0:
                raise InvalidParameterError(f"channel {name} must be a non-empty 2-D raster")
            object.__setattr__(self, name, arr)
        if not (self.r.shape == self.g.shape == self.b.shape):
            raise InvalidParameterError("r, g, b channels must share dimensions")

    @classmethod
    def from_array(cls, rgb) -> "ColorImage":
        """Build from an ``(H, W, 3)`` array; integer input is scaled from 0..255."""
        arr = np.asarray(rgb)
        if arr.ndim == 2:
            arr = np.stack([arr] * 3, axis=-1)
        if arr.ndim != 3 or arr.shape[2] < 3:
            raise InvalidParameterError(f"expected an (H, W, 3) array, got shape {arr.shape}")
        if np.issubdtype(arr.dtype, np.integer):
            arr = arr.astype(np.float64) / 255.0
        arr = arr.astype(np.float64)
        return cls(arr[..., 0], arr[..., 1], arr[..., 2])

    @property
    def shape(self) -> tuple[int, int]:
        return self.r.shape

    @property
    def height(self) -> int:
        return self.r.shape[0]

    @property
    def width(self) -> int:
        return self.r.shape[1]

    def to_array(self) -> np.ndarray:
        return np.stack([self.r, self.g, self.b], axis=-1)

    def scaled(self, k: float) -> "ColorImage":
        return ColorImage(self.r * k, self.g * k, self.b * k)

    def resized(self, shape: tuple[int, int]) -> "ColorImage":
        if tuple(shape) == self.shape:
            return self
        return ColorImage(*(resize_bilinear(c, shape) for c in (self.r, self.g, self.b)))


def as_color_image(img) -> ColorImage:
    if isinstance(img, ColorImage):
        return img
    return ColorImage.from_array(img)


def as_raster(x, name: str = "raster") -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise InvalidParameterError(f"{name} must be a non-empty 2-D raster, got shape {arr.shape}")
    return arr


def check_same_shape(*rasters: np.ndarray) -> None:
    shapes = {np.shape(r) for r in rasters}
    if len(shapes) != 1:
        raise InvalidParameterError(f"raster dimensions differ: {sorted(shapes)}")


def _check_window(k) -> int:
    if int(k) != k or k < 1 or k % 2 == 0:
        raise InvalidParameterError(f"window size must be a positive odd integer, got {k}")
    return int(k)


def normalize01(x) -> np.ndarray:
    """Linearly map ``x`` onto ``[0, 1]``; a constant raster maps to zeros."""
    x = as_raster(x)
    lo = float(x.min())
    hi = float(x.max())
    span = hi - lo
    if span <= _FLAT_RTOL * max(1.0, abs(lo), abs(hi)):
        return np.zeros_like(x)
    out = (x - lo) / span
    # guard the endpoints against rounding so the range contract is exact
    np.clip(out, 0.0, 1.0, out=out)
    return out


def gaussian_kernel1d(sigma: float) -> np.ndarray:
    """Sampled Gaussian truncated at ``ceil(3 sigma)`` and renormalized to sum 1."""
    if not sigma > 0:
        raise InvalidParameterError(f"sigma must be positive, got {sigma}")
    radius = max(1, math.ceil(3.0 * sigma))
    t = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(t * t) / (2.0 * sigma * sigma))
    return k / k.sum()


def gaussian_smooth(x, sigma: float) -> np.ndarray:
    """Separable Gaussian blur with edge replication."""
    x = as_raster(x)
    k = gaussian_kernel1d(sigma)
    out = ndimage.correlate1d(x, k, axis=0, mode="nearest")
    return ndimage.correlate1d(out, k, axis=1, mode="nearest")


def box_mean(x, k: int) -> np.ndarray:
    """Mean over a ``k x k`` window via an integral image (cost independent of ``k``)."""
    x = as_raster(x)
    k = _check_window(k)
    if k == 1:
        return x.copy()
    r = k // 2
    padded = np.pad(x, r, mode="edge")
    integral = np.zeros((padded.shape[0] + 1, padded.shape[1] + 1))
    np.cumsum(np.cumsum(padded, axis=0), axis=1, out=integral[1:, 1:])
    h, w = x.shape
    total = (
        integral[k : k + h, k : k + w]
        - integral[:h, k : k + w]
        - integral[k : k + h, :w]
        + integral[:h, :w]
    )
    return total / (k * k)


def median_filter(x, k: int) -> np.ndarray:
    """Windowed median over ``k x k`` with edge replication."""
    x = as_raster(x)
    k = _check_window(k)
    if k == 1:
        return x.copy()
    return ndimage.median_filter(x, size=k, mode="nearest")


def resize_bilinear(x, shape: tuple[int, int]) -> np.ndarray:
    """Bilinear resample onto ``shape`` with pixel centers aligned."""
    x = as_raster(x)
    h, w = int(shape[0]), int(shape[1])
    if (h, w) == x.shape:
        return x.copy()
    if h < 1 or w < 1:
        raise InvalidParameterError(f"target shape must be positive, got {shape}")
    ys = (np.arange(h) + 0.5) * (x.shape[0] / h) - 0.5
    xs = (np.arange(w) + 0.5) * (x.shape[1] / w) - 0.5
    yy, xx = np.meshgrid(ys, xs, indexing="ij")
    return ndimage.map_coordinates(x, [yy, xx], order=1, mode="nearest")


def gaussian_blob(shape: tuple[int, int], center_xy, sigma: float) -> np.ndarray:
    """Isotropic unnormalized Gaussian ``exp(-d^2 / 2 sigma^2)`` on the pixel grid."""
    if not sigma > 0:
        raise InvalidParameterError(f"sigma must be positive, got {sigma}")
    h, w = shape
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    d2 = (xx - center_xy[0]) ** 2 + (yy - center_xy[1]) ** 2
    return np.exp(-d2 / (2.0 * sigma * sigma))
