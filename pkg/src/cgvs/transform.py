"""Saliency-map-to-structure transform and sequential multi-object search."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .bayes import PosteriorMap, WeightVector, cgvs_iterate, inference_round
from .config import RunConfig
from .errors import InvalidParameterError
from .features import FeatureStack
from .pipeline import analyze
from .prior import center_bias, disk_radius
from .raster import (
    as_color_image,
    as_raster,
    check_same_shape,
    gaussian_blob,
    gaussian_smooth,
    normalize01,
    resize_bilinear,
)

# Smallest covariance eigenvalue (px^2) accepted as non-degenerate.
_MIN_EIGENVALUE = 1e-9


@dataclass(frozen=True)
class GaussianPrior:
    mean: tuple[float, float]  # (x, y)
    covariance: np.ndarray  # 2x2, ordered (x, y)
    raster: np.ndarray
    fallback: bool = False


def gaussian_density(shape, mean, covariance) -> np.ndarray:
    """Unnormalized 2-D Gaussian ``exp(-0.5 d^T C^-1 d)`` on the pixel grid."""
    h, w = shape
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    dx = xx - mean[0]
    dy = yy - mean[1]
    inv = np.linalg.inv(covariance)
    q = inv[0, 0] * dx * dx + 2.0 * inv[0, 1] * dx * dy + inv[1, 1] * dy * dy
    return np.exp(-0.5 * q)


def fit_gaussian_prior(sal, center) -> GaussianPrior:
    """Fit a Gaussian to ``sal * center`` by weighted moments.

    Zero total weight falls back to a centered isotropic Gaussian with
    ``sigma = min(W, H) / 3``. A singular covariance (e.g. a single support
    pixel) keeps the fitted mean but takes the fallback covariance.
    """
    sal = as_raster(sal, "saliency")
    center = as_raster(center, "center")
    check_same_shape(sal, center)
    h, w = sal.shape
    m = sal * center
    total = m.sum()
    fallback_cov = np.diag([(min(w, h) / 3.0) ** 2] * 2)
    fallback = False
    if not total > 0:
        mean = ((w - 1) / 2.0, (h - 1) / 2.0)
        cov = fallback_cov
        fallback = True
    else:
        yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
        mx = float((m * xx).sum() / total)
        my = float((m * yy).sum() / total)
        dx = xx - mx
        dy = yy - my
        cov = np.array(
            [
                [(m * dx * dx).sum(), (m * dx * dy).sum()],
                [(m * dx * dy).sum(), (m * dy * dy).sum()],
            ]
        ) / total
        cov = 0.5 * (cov + cov.T)
        mean = (mx, my)
        if np.linalg.eigvalsh(cov).min() <= _MIN_EIGENVALUE:
            cov = fallback_cov
            fallback = True
    raster = normalize01(gaussian_density((h, w), mean, cov))
    return GaussianPrior(mean=mean, covariance=cov, raster=raster, fallback=fallback)


def _prepare_saliency(sal, shape) -> tuple[np.ndarray, bool]:
    sal = as_raster(sal, "saliency")
    resampled = sal.shape != tuple(shape)
    if resampled:
        sal = resize_bilinear(sal, shape)
    return normalize01(sal), resampled


def transform_saliency(img, sal, t: int | None = None, cfg: RunConfig | None = None):
    """Turn an external saliency map into a structure map.

    Returns ``(posterior_map, gaussian_prior)``. The map is resampled to the
    image size when needed and rescaled to ``[0, 1]`` before fitting.
    """
    cfg = cfg or RunConfig()
    t = cfg.iterations if t is None else t
    img = as_color_image(img)
    sal, _ = _prepare_saliency(sal, img.shape)
    h, w = img.shape
    center = center_bias(w, h, cfg.sigma_c_factor * min(w, h))
    fitted = fit_gaussian_prior(sal, center)
    _, feats = analyze(img, cfg)
    result = cgvs_iterate(fitted.raster, feats, t, bins=cfg.histogram_bins, median_size=cfg.median_size)
    return result, fitted


def contrast_saliency(feats: FeatureStack, blur: float | None = None) -> np.ndarray:
    """Color-contrast map used to seed multi-object search when no map is given.

    Contrast is the distance of each pixel's (lum, rg, by) vector from the
    per-channel scene median, so the dominant background reads as zero. It is
    multiplied by a blurred copy of itself (``blur`` defaults to
    ``min(W, H) / 16``): the product keeps the object support sharp, so
    inhibition leaves no halo, while its maximum moves toward region middles.
    """
    stack = feats.as_array()[:3]
    dev = stack - np.median(stack, axis=(1, 2), keepdims=True)
    contrast = np.sqrt((dev * dev).sum(axis=0))
    if blur is None:
        blur = max(1.0, min(feats.shape) / 16.0)
    return normalize01(contrast * gaussian_smooth(contrast, blur))


@dataclass(frozen=True)
class SearchStep:
    point: tuple[int, int]  # (x, y)
    mask: np.ndarray
    weights: WeightVector
    residual: np.ndarray
    posterior: np.ndarray = field(repr=False, default=None)


@dataclass
class SearchTrace:
    steps: list[SearchStep] = field(default_factory=list)

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)


_CONNECTIVITY = np.ones((3, 3), dtype=bool)


def multi_object_search(img, init_sal=None, k_max: int = 3, cfg: RunConfig | None = None) -> SearchTrace:
    """Winner-take-all attention with inhibition of return.

    Each step attends the residual maximum, runs one inference round under a
    Gaussian prior centered there, keeps the connected posterior >= 0.5
    region around the attended pixel as the object, then zeroes that region
    (dilated) in the residual. Masks never overlap earlier ones.
    """
    if int(k_max) != k_max or k_max < 1:
        raise InvalidParameterError(f"k_max must be an integer >= 1, got {k_max}")
    cfg = cfg or RunConfig()
    img = as_color_image(img)
    _, feats = analyze(img, cfg)
    if init_sal is None:
        residual = contrast_saliency(feats)
    else:
        residual, _ = _prepare_saliency(init_sal, img.shape)
    h, w = img.shape
    sigma = cfg.local_prior_factor * disk_radius((h, w), cfg.d_r_factor)
    claimed = np.zeros((h, w), dtype=bool)
    trace = SearchTrace()
    for _ in range(int(k_max)):
        if residual.max() < cfg.stop_residual:
            break
        y, x = np.unravel_index(int(np.argmax(residual)), residual.shape)
        local = normalize01(gaussian_blob((h, w), (x, y), sigma))
        post, weights, _ = inference_round(local, feats, None, cfg.histogram_bins)
        candidate = (post >= 0.5) & ~claimed
        candidate[y, x] = True
        labels, _ = ndimage.label(candidate, structure=_CONNECTIVITY)
        mask = labels == labels[y, x]
        claimed |= mask
        footprint = mask
        if cfg.inhibition_dilation:
            footprint = ndimage.binary_dilation(mask, structure=_CONNECTIVITY, iterations=cfg.inhibition_dilation)
        residual = np.where(footprint, 0.0, residual)
        trace.steps.append(
            SearchStep(point=(int(x), int(y)), mask=mask, weights=weights, residual=residual, posterior=post)
        )
    return trace
