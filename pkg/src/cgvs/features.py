"""Local feature channels: luminance, two color-opponent channels, edge density."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .edges import DEFAULT_SIGMA, EdgeMap, opponent_channels
from .raster import as_color_image, box_mean, check_same_shape, gaussian_smooth, normalize01

CHANNELS = ("lum", "rg", "by", "ed")

EDGE_DENSITY_WINDOW = 11


@dataclass(frozen=True)
class FeatureStack:
    f_lum: np.ndarray
    f_rg: np.ndarray
    f_by: np.ndarray
    f_ed: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.f_lum.shape

    def channels(self) -> tuple[np.ndarray, ...]:
        """Channels in the fixed order ``CHANNELS``."""
        return (self.f_lum, self.f_rg, self.f_by, self.f_ed)

    def as_array(self) -> np.ndarray:
        """``(4, H, W)`` view of the stack."""
        return np.stack(self.channels())

    @classmethod
    def from_array(cls, arr) -> "FeatureStack":
        arr = np.asarray(arr, dtype=np.float64)
        return cls(*arr)


def build_feature_stack(img, edges: EdgeMap, sigma: float = DEFAULT_SIGMA) -> FeatureStack:
    img = as_color_image(img)
    check_same_shape(img.r, edges.magnitude)
    lum, rg, by = (normalize01(gaussian_smooth(c, sigma)) for c in opponent_channels(img))
    ed = normalize01(box_mean(edges.magnitude, EDGE_DENSITY_WINDOW))
    return FeatureStack(lum, rg, by, ed)
