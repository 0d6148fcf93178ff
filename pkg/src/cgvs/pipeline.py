"""End-to-end structure detection on a color image."""
from __future__ import annotations

from dataclasses import replace

import numpy as np

from .bayes import PosteriorMap, cgvs_iterate
from .config import RunConfig
from .edges import EdgeMap, detect_edges, extract_ridges
from .features import FeatureStack, build_feature_stack
from .prior import PriorMap, build_prior
from .raster import ColorImage, as_color_image, resize_bilinear


def working_shape(shape: tuple[int, int], cap: int) -> tuple[int, int]:
    """Shape after downscaling so that ``max(W, H) <= cap``."""
    h, w = shape
    longest = max(h, w)
    if longest <= cap:
        return h, w
    scale = cap / longest
    return max(1, int(round(h * scale))), max(1, int(round(w * scale)))


def analyze(img: ColorImage, cfg: RunConfig) -> tuple[EdgeMap, FeatureStack]:
    edges = detect_edges(img, cfg.sigma_edge)
    edges = extract_ridges(edges, cfg.ridge_quantile)
    feats = build_feature_stack(img, edges, cfg.sigma_edge)
    return edges, feats


def context_prior(img, cfg: RunConfig | None = None) -> tuple[PriorMap, FeatureStack]:
    """Prior and features at the image's own resolution (no resampling)."""
    cfg = cfg or RunConfig()
    img = as_color_image(img)
    edges, feats = analyze(img, cfg)
    return build_prior(edges, cfg.d_r_factor, cfg.sigma_c_factor), feats


def _restore(result: PosteriorMap, shape) -> PosteriorMap:
    if result.p_sx.shape == tuple(shape):
        return result
    up = np.clip(resize_bilinear(result.p_sx, shape), 0.0, 1.0)
    return replace(result, p_sx=up)


def cgvs_detect(img, t: int | None = None, cfg: RunConfig | None = None) -> PosteriorMap:
    """Salient-structure map of ``img`` after ``t`` refinement rounds.

    Large images are processed at a working resolution capped by
    ``cfg.working_resolution_cap`` and the posterior is resampled back to the
    input size. ``t`` defaults to ``cfg.iterations``.
    """
    cfg = cfg or RunConfig()
    t = cfg.iterations if t is None else t
    img = as_color_image(img)
    work = img.resized(working_shape(img.shape, cfg.working_resolution_cap))
    prior, feats = context_prior(work, cfg)
    result = cgvs_iterate(prior.s_w, feats, t, bins=cfg.histogram_bins, median_size=cfg.median_size)
    return _restore(result, img.shape)
