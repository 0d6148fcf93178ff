"""Batch evaluation of prediction maps and the prior-parameter sweep."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .bayes import cgvs_iterate
from .config import RunConfig
from .errors import CGVSError
from .io import DatasetIndex, image_size, read_color_image, read_fixations, read_gray, read_mask
from .metrics import iou, mae, pr_fscore, roc_auc, weighted_fscore
from .pipeline import _restore, analyze, working_shape
from .prior import center_bias, compose_prior, disk_radius, half_disk_vote
from .raster import resize_bilinear

SWEEP_FACTORS = (1 / 2, 1 / 3, 1 / 4, 1 / 5, 1 / 6)
FIXATION_METRICS = ("auc",)
OBJECT_METRICS = ("max_f", "weighted_f", "mae", "coverage")


@dataclass
class EntryResult:
    name: str
    values: dict = field(default_factory=dict)
    error: str | None = None
    pr: np.ndarray | None = None  # (levels, 2) precision, recall


@dataclass
class EvalReport:
    task: str
    rows: list
    means: dict
    mean_pr: np.ndarray | None = None  # (levels, 4) threshold, P, R, F

    @property
    def failures(self) -> list:
        return [r for r in self.rows if r.error is not None]

    @property
    def metric_names(self) -> tuple:
        return FIXATION_METRICS if self.task == "fixation" else OBJECT_METRICS


def find_prediction(pred_dir: Path, stem: str) -> Path | None:
    """Prediction file whose stem matches exactly (case-sensitive); PNG preferred."""
    candidates = sorted(p for p in Path(pred_dir).iterdir() if p.is_file() and p.stem == stem)
    if not candidates:
        return None
    pngs = [p for p in candidates if p.suffix.lower() == ".png"]
    return (pngs or candidates)[0]


def _evaluate_entry(entry, pred_dir: Path, task: str) -> EntryResult:
    res = EntryResult(name=entry.stem)
    pred_path = find_prediction(pred_dir, entry.stem)
    if pred_path is None:
        res.error = "missing prediction"
        return res
    try:
        pred = read_gray(pred_path)
        if task == "fixation":
            shape = image_size(entry.image)
            if pred.shape != shape:
                pred = np.clip(resize_bilinear(pred, shape), 0.0, 1.0)
            res.values["auc"] = roc_auc(pred, read_fixations(entry.fixations)).summary
        else:
            gt = read_mask(entry.gt)
            if pred.shape != gt.shape:
                pred = np.clip(resize_bilinear(pred, gt.shape), 0.0, 1.0)
            report = pr_fscore(pred, gt)
            res.values["max_f"] = report.summary
            res.values["weighted_f"] = weighted_fscore(pred, gt)
            res.values["mae"] = mae(pred, gt)
            res.values["coverage"] = float(gt.mean())
            res.pr = report.samples[:, 1:3]
    except (CGVSError, OSError) as exc:
        res.values = {}
        res.error = str(exc)
    return res


def _fmean(values) -> float:
    values = sorted(values)
    return math.fsum(values) / len(values) if values else float("nan")


def evaluate_dataset(pred_dir, index: DatasetIndex, workers: int = 1) -> EvalReport:
    pred_dir = Path(pred_dir)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda e: _evaluate_entry(e, pred_dir, index.task), index.entries))
    else:
        rows = [_evaluate_entry(e, pred_dir, index.task) for e in index.entries]
    rows.sort(key=lambda r: r.name)
    good = [r for r in rows if r.error is None]
    names = FIXATION_METRICS if index.task == "fixation" else OBJECT_METRICS
    means = {k: _fmean(r.values[k] for r in good) for k in names}
    mean_pr = None
    if index.task == "object" and good:
        # sum in row order (already sorted by name) so the result is order-independent
        pr = np.mean(np.stack([r.pr for r in good]), axis=0)
        thresholds = np.linspace(0.0, 1.0, pr.shape[0])
        p, r = pr[:, 0], pr[:, 1]
        denom = 0.3 * p + r
        f = np.divide(1.3 * p * r, denom, out=np.zeros_like(p), where=denom > 0)
        mean_pr = np.column_stack([thresholds, p, r, f])
    return EvalReport(task=index.task, rows=rows, means=means, mean_pr=mean_pr)


def sweep_pairs(factors=SWEEP_FACTORS, grid: str = "cross", base: float = 1 / 3) -> list[tuple[float, float]]:
    """Factor pairs ``(d_r_factor, sigma_c_factor)``.

    ``cross`` varies one factor at a time with the other held at ``base``;
    ``full`` is the Cartesian product.
    """
    if grid == "full":
        return [(a, b) for a in factors for b in factors]
    pairs = [(f, base) for f in factors]
    pairs += [(base, f) for f in factors if not math.isclose(f, base)]
    return pairs


def sweep_parameters(index: DatasetIndex, cfg: RunConfig, pairs, t: int | None = None):
    """Score every factor pair on the dataset; returns one dict per pair.

    Edges and features are computed once per image, and vote maps once per
    distinct disk radius.
    """
    t = cfg.iterations if t is None else t
    totals = {pair: {"iou": [], "max_f": [], "weighted_f": [], "mae": []} for pair in pairs}
    for entry in sorted(index.entries, key=lambda e: e.stem):
        img = read_color_image(entry.image)
        gt = read_mask(entry.gt)
        if gt.shape != img.shape:
            raise CGVSError(f"{entry.stem}: ground truth and image sizes differ")
        work = img.resized(working_shape(img.shape, cfg.working_resolution_cap))
        edges, feats = analyze(work, cfg)
        h, w = work.shape
        votes = {}
        for d_f, c_f in pairs:
            d_r = disk_radius((h, w), d_f)
            if d_r not in votes:
                votes[d_r] = half_disk_vote(edges, d_r)
            prior = compose_prior(votes[d_r], center_bias(w, h, c_f * min(w, h)))
            result = _restore(
                cgvs_iterate(prior, feats, t, bins=cfg.histogram_bins, median_size=cfg.median_size),
                img.shape,
            )
            p = result.p_sx
            bucket = totals[(d_f, c_f)]
            bucket["iou"].append(iou(p >= 0.5, gt))
            bucket["max_f"].append(pr_fscore(p, gt).summary)
            bucket["weighted_f"].append(weighted_fscore(p, gt))
            bucket["mae"].append(mae(p, gt))
    rows = []
    for d_f, c_f in pairs:
        bucket = totals[(d_f, c_f)]
        row = {"d_r_factor": d_f, "sigma_c_factor": c_f}
        row.update({f"mean_{k}": _fmean(v) for k, v in bucket.items()})
        rows.append(row)
    return rows
