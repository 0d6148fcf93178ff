"""Opponent-gradient edge detection and dominant-edge (ridge) extraction."""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidParameterError
from .raster import ColorImage, as_color_image, gaussian_smooth, normalize01

# smoothing scale at working resolution; larger values round off corners and
# shrink detected structures
DEFAULT_SIGMA = 0.75


@dataclass(frozen=True)
class EdgeMap:
    """Edge field of a scene.

    ``orientation`` holds the edge *tangent* angle in ``[0, pi)``, measured in
    image coordinates (x to the right, y down). ``ridges`` is empty until
    :func:`extract_ridges` fills it.
    """

    magnitude: np.ndarray
    orientation: np.ndarray
    ridges: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.magnitude.shape


def opponent_channels(img: ColorImage) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Luminance, red-green and blue-yellow channels, unsmoothed and unnormalized."""
    lum = (img.r + img.g + img.b) / 3.0
    rg = img.r - img.g
    by = img.b - (img.r + img.g) / 2.0
    return lum, rg, by


def central_gradients(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Central differences ``(gx, gy)`` with edge replication."""
    p = np.pad(x, 1, mode="edge")
    gx = (p[1:-1, 2:] - p[1:-1, :-2]) / 2.0
    gy = (p[2:, 1:-1] - p[:-2, 1:-1]) / 2.0
    return gx, gy


def detect_edges(img, sigma: float = DEFAULT_SIGMA) -> EdgeMap:
    """Per-pixel maximum gradient over the three opponent channels."""
    if not sigma > 0:
        raise InvalidParameterError(f"sigma must be positive, got {sigma}")
    img = as_color_image(img)
    best_mag = None
    best_gx = best_gy = None
    for channel in opponent_channels(img):
        gx, gy = central_gradients(gaussian_smooth(channel, sigma))
        mag = np.hypot(gx, gy)
        if best_mag is None:
            best_mag, best_gx, best_gy = mag, gx, gy
            continue
        # first channel wins ties so the result is order-stable
        win = mag > best_mag
        best_mag = np.where(win, mag, best_mag)
        best_gx = np.where(win, gx, best_gx)
        best_gy = np.where(win, gy, best_gy)

    magnitude = normalize01(best_mag)
    orientation = np.mod(np.arctan2(best_gy, best_gx) + np.pi / 2.0, np.pi)
    # mod can round up to exactly pi for tiny negative inputs
    orientation[orientation >= np.pi] = 0.0
    orientation[magnitude == 0] = 0.0
    return EdgeMap(magnitude, orientation, np.zeros(magnitude.shape, dtype=bool))


# Neighbor offsets (dy, dx) along the gradient normal for the four
# quantized gradient directions 0, 45, 90 and 135 degrees.
_NMS_OFFSETS = ((0, 1), (1, 1), (1, 0), (1, -1))


def non_max_suppression(magnitude: np.ndarray, orientation: np.ndarray) -> np.ndarray:
    """Keep pixels that are maxima across their edge (8-neighborhood, no interpolation).

    A pixel must be strictly above its forward neighbor and at least equal to
    its backward one, so a plateau two pixels wide yields a single-pixel line.
    """
    normal = np.mod(orientation - np.pi / 2.0, np.pi)
    sector = np.floor((normal + np.pi / 8.0) / (np.pi / 4.0)).astype(int) % 4
    p = np.pad(magnitude, 1, mode="constant", constant_values=0.0)
    h, w = magnitude.shape
    keep = np.zeros((h, w), dtype=bool)
    for s, (dy, dx) in enumerate(_NMS_OFFSETS):
        fwd = p[1 + dy : 1 + dy + h, 1 + dx : 1 + dx + w]
        bwd = p[1 - dy : 1 - dy + h, 1 - dx : 1 - dx + w]
        here = sector == s
        keep |= here & (magnitude > fwd) & (magnitude >= bwd)
    return keep & (magnitude > 0)


def extract_ridges(edges: EdgeMap, quantile: float = 0.8) -> EdgeMap:
    """Return a copy of ``edges`` whose ``ridges`` mask holds the dominant edges.

    Survivors of non-maximum suppression are kept when their magnitude is at
    least the ``quantile`` of all nonzero magnitudes.
    """
    if not 0.0 < quantile < 1.0:
        raise InvalidParameterError(f"ridge quantile must lie in (0, 1), got {quantile}")
    mag = edges.magnitude
    nonzero = mag[mag > 0]
    if nonzero.size == 0:
        return replace(edges, ridges=np.zeros(mag.shape, dtype=bool))
    level = np.quantile(nonzero, quantile)
    ridges = non_max_suppression(mag, edges.orientation) & (mag >= level)
    return replace(edges, ridges=ridges)
