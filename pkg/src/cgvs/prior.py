"""Context-based spatial prior: half-disk voting along ridges plus center bias."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .edges import EdgeMap
from .errors import InvalidParameterError
from .raster import as_raster, check_same_shape, gaussian_blob, normalize01

# |cross product| at or below this puts a pixel on the dividing line.
ON_LINE_TOL = 1e-9

# Ridge pixels processed per vectorized batch; bounds memory at ~chunk * disk area.
_VOTE_CHUNK = 64


@dataclass(frozen=True)
class PriorMap:
    s_e: np.ndarray
    s_c: np.ndarray
    s_w: np.ndarray
    d_r: int
    sigma_c: float


def disk_radius(shape: tuple[int, int], factor: float) -> int:
    """Disk radius ``factor * min(W, H)`` rounded to the nearest integer, at least 1."""
    return max(1, int(round(factor * min(shape))))


def _disk_offsets(d_r: int) -> tuple[np.ndarray, np.ndarray]:
    r = np.arange(-d_r, d_r + 1)
    dy, dx = np.meshgrid(r, r, indexing="ij")
    inside = dx * dx + dy * dy <= d_r * d_r
    return dy[inside], dx[inside]


def vote_counts(edges: EdgeMap, d_r: int) -> np.ndarray:
    """Integer vote count per pixel before normalization.

    Each ridge pixel splits its radius-``d_r`` disk by the line through it
    along its tangent. Every in-bounds pixel of the half with the strictly
    larger mean edge magnitude gets one vote.
    """
    if int(d_r) != d_r or d_r < 1:
        raise InvalidParameterError(f"disk radius must be an integer >= 1, got {d_r}")
    d_r = int(d_r)
    mag = as_raster(edges.magnitude, "magnitude")
    h, w = mag.shape
    counts = np.zeros(h * w, dtype=np.int64)
    ys, xs = np.nonzero(edges.ridges)
    if ys.size == 0:
        return counts.reshape(h, w)

    dy, dx = _disk_offsets(d_r)
    pw = w + 2 * d_r
    padded_mag = np.zeros((h + 2 * d_r, pw))
    padded_mag[d_r : d_r + h, d_r : d_r + w] = mag
    valid = np.zeros_like(padded_mag)
    valid[d_r : d_r + h, d_r : d_r + w] = 1.0
    flat_mag = padded_mag.ravel()
    flat_valid = valid.ravel()
    rel = dy * pw + dx
    # padded flat index -> unpadded flat index (only valid cells are ever used)
    pad_rows, pad_cols = np.divmod(np.arange(padded_mag.size), pw)
    to_inner = (pad_rows - d_r) * w + (pad_cols - d_r)

    theta = edges.orientation[ys, xs]
    tx, ty = np.cos(theta), np.sin(theta)
    centers = (ys + d_r) * pw + (xs + d_r)

    for start in range(0, ys.size, _VOTE_CHUNK):
        sl = slice(start, start + _VOTE_CHUNK)
        cross = tx[sl, None] * dy[None, :] - ty[sl, None] * dx[None, :]
        pos = cross > ON_LINE_TOL
        neg = cross < -ON_LINE_TOL
        idx = centers[sl, None] + rel[None, :]
        m = flat_mag[idx]
        v = flat_valid[idx]
        n_pos = (v * pos).sum(axis=1)
        n_neg = (v * neg).sum(axis=1)
        s_pos = (m * pos).sum(axis=1)
        s_neg = (m * neg).sum(axis=1)
        mean_pos = np.divide(s_pos, n_pos, out=np.zeros_like(s_pos), where=n_pos > 0)
        mean_neg = np.divide(s_neg, n_neg, out=np.zeros_like(s_neg), where=n_neg > 0)
        winner = np.where(
            (mean_pos > mean_neg)[:, None], pos, np.where((mean_neg > mean_pos)[:, None], neg, False)
        )
        hit = winner & (v > 0)
        counts += np.bincount(to_inner[idx[hit]], minlength=h * w)
    return counts.reshape(h, w)


def half_disk_vote(edges: EdgeMap, d_r: int) -> np.ndarray:
    """Vote map ``S_e``: :func:`vote_counts` scaled into ``[0, 1]``."""
    return normalize01(vote_counts(edges, d_r).astype(np.float64))


def center_bias(width: int, height: int, sigma_c: float, normalize: bool = True) -> np.ndarray:
    """Gaussian center-bias map ``S_c`` peaking at ``((W-1)/2, (H-1)/2)``.

    With ``normalize=False`` the raw ``exp(-d^2 / 2 sigma_c^2)`` values are returned.
    """
    if not sigma_c > 0:
        raise InvalidParameterError(f"sigma_c must be positive, got {sigma_c}")
    blob = gaussian_blob((height, width), ((width - 1) / 2.0, (height - 1) / 2.0), sigma_c)
    return normalize01(blob) if normalize else blob


def compose_prior(s_e, s_c) -> np.ndarray:
    s_e = as_raster(s_e, "s_e")
    s_c = as_raster(s_c, "s_c")
    check_same_shape(s_e, s_c)
    return normalize01(s_e + s_c)


def build_prior(edges: EdgeMap, d_r_factor: float = 1 / 3, sigma_c_factor: float = 1 / 3) -> PriorMap:
    """Full context prior for a ridge-annotated edge map."""
    if not sigma_c_factor > 0:
        raise InvalidParameterError(f"sigma_c factor must be positive, got {sigma_c_factor}")
    h, w = edges.shape
    d_r = disk_radius((h, w), d_r_factor)
    sigma_c = sigma_c_factor * min(w, h)
    s_e = half_disk_vote(edges, d_r)
    s_c = center_bias(w, h, sigma_c)
    return PriorMap(s_e=s_e, s_c=s_c, s_w=compose_prior(s_e, s_c), d_r=d_r, sigma_c=sigma_c)
