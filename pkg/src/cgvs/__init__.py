"""Salient structure detection: an edge-layout prior guiding Bayesian cue integration."""

__version__ = "0.1.0"

from .bayes import (
    Partition,
    PosteriorMap,
    WeightVector,
    cgvs_iterate,
    compute_weights,
    likelihoods,
    posterior,
    search_threshold,
)
from .config import RunConfig, load_config
from .edges import EdgeMap, detect_edges, extract_ridges
from .errors import CGVSError, InvalidInputError, InvalidParameterError, InvalidPartitionError
from .features import FeatureStack, build_feature_stack
from .metrics import CurveReport, iou, mae, pr_fscore, roc_auc, weighted_fscore
from .pipeline import cgvs_detect
from .prior import PriorMap, center_bias, compose_prior, half_disk_vote, vote_counts
from .raster import ColorImage, box_mean, gaussian_smooth, median_filter, normalize01
from .transform import GaussianPrior, SearchTrace, fit_gaussian_prior, multi_object_search, transform_saliency

__all__ = [
    "CGVSError",
    "ColorImage",
    "CurveReport",
    "EdgeMap",
    "FeatureStack",
    "GaussianPrior",
    "InvalidInputError",
    "InvalidParameterError",
    "InvalidPartitionError",
    "Partition",
    "PosteriorMap",
    "PriorMap",
    "RunConfig",
    "SearchTrace",
    "WeightVector",
    "box_mean",
    "build_feature_stack",
    "center_bias",
    "cgvs_detect",
    "cgvs_iterate",
    "compose_prior",
    "compute_weights",
    "detect_edges",
    "extract_ridges",
    "fit_gaussian_prior",
    "gaussian_smooth",
    "half_disk_vote",
    "iou",
    "likelihoods",
    "load_config",
    "mae",
    "median_filter",
    "multi_object_search",
    "normalize01",
    "posterior",
    "pr_fscore",
    "roc_auc",
    "search_threshold",
    "transform_saliency",
    "vote_counts",
    "weighted_fscore",
]
