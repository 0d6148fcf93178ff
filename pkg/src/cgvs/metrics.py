"""Evaluation measures for fixation prediction and salient-object maps."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import InvalidInputError
from .raster import as_raster, check_same_shape

DEFAULT_BETA2 = 0.3
PR_LEVELS = 256
MATLAB_EPS = np.finfo(np.float64).eps


@dataclass(frozen=True)
class CurveReport:
    """A swept curve plus its scalar summary.

    ``samples`` rows are ``(threshold, a, b)``: ``(threshold, fpr, tpr)`` for
    ROC, ``(threshold, precision, recall)`` for P-R. ``f_scores`` is filled
    for P-R reports only.
    """

    samples: np.ndarray
    summary: float
    f_scores: np.ndarray | None = None


def _fixation_mask(shape, fixations) -> np.ndarray:
    pts = np.asarray(list(fixations), dtype=np.int64).reshape(-1, 2)
    if pts.shape[0] == 0:
        raise InvalidInputError("fixation set is empty")
    h, w = shape
    xs, ys = pts[:, 0], pts[:, 1]
    if (xs < 0).any() or (xs >= w).any() or (ys < 0).any() or (ys >= h).any():
        raise InvalidInputError("fixation outside image bounds")
    mask = np.zeros(shape, dtype=bool)
    mask[ys, xs] = True
    return mask


def roc_auc(sal, fixations) -> CurveReport:
    """ROC of fixated pixels against all other pixels.

    Every distinct saliency value is a threshold; the trapezoid area equals
    the Mann-Whitney statistic with ties credited 0.5. Repeated fixations on
    one pixel count once.
    """
    sal = as_raster(sal, "saliency")
    fix = _fixation_mask(sal.shape, fixations)
    pos = sal[fix]
    neg = sal[~fix]
    if neg.size == 0:
        raise InvalidInputError("every pixel is fixated; no negatives")
    thresholds = np.unique(sal)[::-1]
    pos_sorted = np.sort(pos)
    neg_sorted = np.sort(neg)
    # counts of values >= each threshold
    tp = pos.size - np.searchsorted(pos_sorted, thresholds, side="left")
    fp = neg.size - np.searchsorted(neg_sorted, thresholds, side="left")
    tp = np.concatenate([[0], tp]).astype(np.int64)
    fp = np.concatenate([[0], fp]).astype(np.int64)
    # trapezoid area in integer units, so a single rounding at the division
    twice_area = int(np.sum((fp[1:] - fp[:-1]) * (tp[1:] + tp[:-1])))
    auc = twice_area / (2 * pos.size * neg.size)
    tpr = tp / pos.size
    fpr = fp / neg.size
    samples = np.column_stack([np.concatenate([[np.inf], thresholds]), fpr, tpr])
    return CurveReport(samples=samples, summary=auc)


def _gt_mask(gt) -> np.ndarray:
    gt = np.asarray(gt)
    if gt.dtype != bool:
        gt = gt > 0.5
    if not gt.any():
        raise InvalidInputError("ground-truth mask has no foreground pixels")
    return gt


def pr_fscore(sal, gt_mask, beta2: float = DEFAULT_BETA2, levels: int = PR_LEVELS) -> CurveReport:
    """Precision/recall at ``levels`` uniform thresholds in [0, 1]; summary is max F."""
    sal = as_raster(sal, "saliency")
    gt = _gt_mask(gt_mask)
    check_same_shape(sal, gt)
    thresholds = np.linspace(0.0, 1.0, levels)
    pos = np.sort(sal[gt])
    neg = np.sort(sal[~gt])
    tp = pos.size - np.searchsorted(pos, thresholds, side="left")
    fp = neg.size - np.searchsorted(neg, thresholds, side="left")
    predicted = tp + fp
    precision = np.divide(tp, predicted, out=np.zeros(levels), where=predicted > 0)
    recall = tp / pos.size
    denom = beta2 * precision + recall
    f = np.divide((1 + beta2) * precision * recall, denom, out=np.zeros(levels), where=denom > 0)
    samples = np.column_stack([thresholds, precision, recall])
    return CurveReport(samples=samples, summary=float(f.max()), f_scores=f)


def _gaussian_window(size: int = 7, sigma: float = 5.0) -> np.ndarray:
    r = (size - 1) / 2.0
    t = np.arange(size) - r
    k = np.exp(-(t[:, None] ** 2 + t[None, :] ** 2) / (2.0 * sigma * sigma))
    return k / k.sum()


def weighted_fscore(sal, gt_mask, beta2: float = 1.0, weighted: bool = True) -> float:
    """Weighted F-measure of a foreground map.

    Errors inside the foreground are relaxed toward a Gaussian-smoothed
    (7x7, sigma 5) error field built from the nearest-foreground distance
    transform; background errors grow with distance from the foreground.
    ``weighted=False`` disables both terms, giving the plain F-measure of the
    soft map.
    """
    sal = as_raster(sal, "saliency")
    gt = _gt_mask(gt_mask)
    check_same_shape(sal, gt)
    gtf = gt.astype(np.float64)
    err = np.abs(sal - gtf)
    if weighted:
        dist, (iy, ix) = ndimage.distance_transform_edt(~gt, return_indices=True)
        # background errors take the value at their nearest foreground pixel
        et = err.copy()
        et[~gt] = err[iy[~gt], ix[~gt]]
        ea = ndimage.correlate(et, _gaussian_window(), mode="constant", cval=0.0)
        min_e = err.copy()
        relax = gt & (ea < err)
        min_e[relax] = ea[relax]
        importance = np.ones_like(err)
        importance[~gt] = 2.0 - np.exp(np.log(0.5) / 5.0 * dist[~gt])
        ew = min_e * importance
    else:
        ew = err
    tpw = gtf.sum() - ew[gt].sum()
    fpw = ew[~gt].sum()
    recall = 1.0 - ew[gt].mean()
    precision = tpw / (MATLAB_EPS + tpw + fpw)
    return float((1 + beta2) * recall * precision / (MATLAB_EPS + recall + beta2 * precision))


def mae(sal, gt_mask) -> float:
    sal = as_raster(sal, "saliency")
    gt = np.asarray(gt_mask, dtype=np.float64)
    check_same_shape(sal, gt)
    return float(np.abs(sal - gt).mean())


def iou(pred_mask, gt_mask) -> float:
    pred = np.asarray(pred_mask, dtype=bool)
    gt = np.asarray(gt_mask, dtype=bool)
    check_same_shape(pred, gt)
    union = np.logical_or(pred, gt).sum()
    if union == 0:
        return 1.0
    return float(np.logical_and(pred, gt).sum() / union)
