"""Layout-guided Bayesian integration of the feature channels.

One inference round binarizes the prior at the structure size that best
separates the channel means, weights each channel by that separation, builds
per-channel histogram likelihoods for structure and background, and applies
Bayes' rule per pixel. :func:`cgvs_iterate` repeats the round with the
median-smoothed posterior as the next prior.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameterError, InvalidPartitionError
from .features import CHANNELS, FeatureStack
from .raster import as_raster, check_same_shape, median_filter, normalize01

# Structure-size candidates, in percent of the image: 10, 12, ..., 50.
SIZE_GRID_PERCENT = tuple(range(10, 51, 2))
SIZE_GRID = tuple(p / 100.0 for p in SIZE_GRID_PERCENT)

HISTOGRAM_BINS = 32
PMF_FLOOR = 1e-12
PRIOR_EPS = 1e-6
REFINE_MEDIAN = 21
_OPEN_LO = np.nextafter(0.0, 1.0)
_OPEN_HI = np.nextafter(1.0, 0.0)


@dataclass(frozen=True)
class WeightVector:
    """Channel weights on the simplex, ordered as ``CHANNELS``."""

    w: np.ndarray
    w0: np.ndarray

    def as_dict(self) -> dict[str, float]:
        return {name: float(v) for name, v in zip(CHANNELS, self.w)}

    @classmethod
    def uniform(cls) -> "WeightVector":
        u = np.full(len(CHANNELS), 1.0 / len(CHANNELS))
        return cls(u, u.copy())


@dataclass(frozen=True)
class Partition:
    t_max: float
    structure: np.ndarray  # boolean raster; background is its complement
    mean_s: np.ndarray
    mean_b: np.ndarray
    score: float
    scores: tuple[float, ...] = ()

    @property
    def background(self) -> np.ndarray:
        return ~self.structure

    @property
    def fraction(self) -> float:
        return float(self.structure.mean())


@dataclass(frozen=True)
class PosteriorMap:
    p_sx: np.ndarray
    weights: WeightVector
    partition: Partition
    iteration: int
    prior: np.ndarray | None = None
    history: list = field(default_factory=list, repr=False)
    rounds: list = field(default_factory=list, repr=False)  # (WeightVector, Partition) per round


def _stack(feats) -> np.ndarray:
    if isinstance(feats, FeatureStack):
        return feats.as_array()
    arr = np.asarray(feats, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[0] != len(CHANNELS):
        raise InvalidParameterError(f"feature stack must have shape (4, H, W), got {arr.shape}")
    return arr


def structure_size(percent: int, n_pixels: int) -> int:
    """``ceil(percent / 100 * n_pixels)`` in exact integer arithmetic, capped at half the image.

    The cap only bites for the 50% candidate on odd pixel counts, where the
    ceiling would put the structure set just over half.
    """
    return min(-(-percent * n_pixels // 100), n_pixels // 2)


def _weight_array(w0) -> np.ndarray:
    if isinstance(w0, WeightVector):
        return w0.w
    return np.asarray(w0, dtype=np.float64)


def search_threshold(prior, feats, w0=None) -> Partition:
    """Pick the structure size whose top-prior pixel set best separates the channel means."""
    prior = as_raster(prior, "prior")
    stack = _stack(feats)
    check_same_shape(prior, stack[0])
    weights = WeightVector.uniform().w if w0 is None else _weight_array(w0)
    n = prior.size
    flat = stack.reshape(len(CHANNELS), n)
    # stable sort on the negated prior: larger prior first, ties by raster index
    order = np.argsort(-prior.ravel(), kind="stable")
    # shifting each channel by one of its own values leaves mean differences
    # unchanged and makes a constant channel contribute exactly zero
    ref = flat[:, :1]
    csum = np.cumsum(flat[:, order] - ref, axis=1)
    total = csum[:, -1]

    best = None
    scores = []
    for percent in SIZE_GRID_PERCENT:
        k = structure_size(percent, n)
        if k < 1 or k >= n:
            scores.append(float("-inf"))
            continue
        mean_s = csum[:, k - 1] / k
        mean_b = (total - csum[:, k - 1]) / (n - k)
        score = float(np.sqrt(np.sum((weights * (mean_s - mean_b)) ** 2)))
        mean_s, mean_b = mean_s + ref[:, 0], mean_b + ref[:, 0]
        scores.append(score)
        if best is None or score > best[0]:
            best = (score, percent, k, mean_s, mean_b)
    if best is None:
        raise InvalidPartitionError(f"image of {n} pixels is too small to split")

    score, percent, k, mean_s, mean_b = best
    structure = np.zeros(n, dtype=bool)
    structure[order[:k]] = True
    return Partition(
        t_max=percent / 100.0,
        structure=structure.reshape(prior.shape),
        mean_s=mean_s,
        mean_b=mean_b,
        score=score,
        scores=tuple(scores),
    )


def _set_means(part: Partition, stack: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    s = part.structure
    if not s.any() or s.all():
        raise InvalidPartitionError("structure and background sets must both be non-empty")
    return stack[:, s].mean(axis=1), stack[:, ~s].mean(axis=1)


def compute_weights(part: Partition, feats, w0=None) -> WeightVector:
    """Channel importance proportional to ``|mean_s - mean_b|``, summing to one."""
    stack = _stack(feats)
    mean_s, mean_b = _set_means(part, stack)
    diff = np.abs(mean_s - mean_b)
    mu = diff.sum()
    prev = WeightVector.uniform().w if w0 is None else _weight_array(w0)
    if mu == 0:
        return WeightVector(WeightVector.uniform().w, prev.copy())
    return WeightVector(diff / mu, prev.copy())


def bin_index(values: np.ndarray, bins: int = HISTOGRAM_BINS) -> np.ndarray:
    """Histogram bin of each value in ``[0, 1]``; the value 1 lands in the last bin."""
    idx = np.floor(np.asarray(values) * bins).astype(np.int64)
    return np.clip(idx, 0, bins - 1)


def channel_pmf(values: np.ndarray, bins: int = HISTOGRAM_BINS) -> np.ndarray:
    """Laplace-smoothed histogram (pseudo-count 1 per bin) as a probability mass function."""
    counts = np.bincount(bin_index(values, bins), minlength=bins).astype(np.float64) + 1.0
    return counts / counts.sum()


def likelihoods(part: Partition, feats, w, bins: int = HISTOGRAM_BINS) -> tuple[np.ndarray, np.ndarray]:
    """Weighted naive-Bayes likelihood rasters ``(p(x|s), p(x|b))``."""
    stack = _stack(feats)
    s = part.structure
    if s.shape != stack.shape[1:]:
        raise InvalidParameterError("partition and feature stack dimensions differ")
    if not s.any() or s.all():
        raise InvalidPartitionError("structure and background sets must both be non-empty")
    weights = _weight_array(w)
    log_s = np.zeros(s.shape)
    log_b = np.zeros(s.shape)
    for i, channel in enumerate(stack):
        if weights[i] == 0:
            continue
        idx = bin_index(channel, bins)
        pmf_s = np.maximum(channel_pmf(channel[s], bins), PMF_FLOOR)
        pmf_b = np.maximum(channel_pmf(channel[~s], bins), PMF_FLOOR)
        log_s += weights[i] * np.log(pmf_s)[idx]
        log_b += weights[i] * np.log(pmf_b)[idx]
    return np.exp(log_s), np.exp(log_b)


def posterior(prior, p_x_s, p_x_b) -> np.ndarray:
    prior = as_raster(prior, "prior")
    p_x_s = as_raster(p_x_s, "p_x_s")
    p_x_b = as_raster(p_x_b, "p_x_b")
    check_same_shape(prior, p_x_s, p_x_b)
    ps = np.clip(prior, PRIOR_EPS, 1.0 - PRIOR_EPS)
    num = ps * p_x_s
    out = num / (num + (1.0 - ps) * p_x_b)
    # odds beyond ~1e16 round to exactly 0 or 1 in float64; keep the open interval
    return np.clip(out, _OPEN_LO, _OPEN_HI)


def inference_round(prior, feats, w0=None, bins: int = HISTOGRAM_BINS):
    """One threshold search, weighting, likelihood and posterior pass."""
    part = search_threshold(prior, feats, w0)
    weights = compute_weights(part, feats, w0)
    p_x_s, p_x_b = likelihoods(part, feats, weights, bins)
    return posterior(prior, p_x_s, p_x_b), weights, part


def cgvs_iterate(
    prior0,
    feats,
    t: int = 2,
    bins: int = HISTOGRAM_BINS,
    median_size: int = REFINE_MEDIAN,
) -> PosteriorMap:
    """Run ``t + 1`` inference rounds; ``t = 0`` is the single unrefined pass.

    ``history`` collects the posterior of every round, so ``history[0]`` is
    the unrefined output and ``history[-1] is p_sx``; ``rounds`` holds the
    matching ``(weights, partition)`` pairs.
    """
    if int(t) != t or t < 0:
        raise InvalidParameterError(f"iteration count must be a non-negative integer, got {t}")
    prior = as_raster(prior0, "prior")
    w0 = WeightVector.uniform().w
    history = []
    rounds = []
    for round_no in range(int(t) + 1):
        if round_no > 0:
            prior = normalize01(median_filter(history[-1], median_size))
            w0 = weights.w
        p_sx, weights, part = inference_round(prior, feats, w0, bins)
        history.append(p_sx)
        rounds.append((weights, part))
    return PosteriorMap(
        p_sx=p_sx, weights=weights, partition=part, iteration=int(t), prior=prior, history=history,
        rounds=rounds,
    )
