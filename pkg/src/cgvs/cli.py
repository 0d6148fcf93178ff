"""Command-line interface: ``cgvs detect | transform | search | eval | sweep``."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .config import load_config
from .errors import CGVSError
from .evaluation import SWEEP_FACTORS, evaluate_dataset, sweep_pairs, sweep_parameters
from .features import CHANNELS
from .io import read_color_image, read_gray, read_index, write_gray, write_mask
from .pipeline import cgvs_detect
from .transform import multi_object_search, transform_saliency

log = logging.getLogger("cgvs")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_PARTIAL = 2


def _fraction(text: str) -> float:
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number or fraction: {text!r}") from None


def _add_config_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("model parameters (override the config file)")
    g.add_argument("--config", type=Path, help="flat 'key = value' config file")
    g.add_argument("--iters", type=int, dest="iterations", help="refinement rounds t (0 = single pass)")
    g.add_argument("--sigma-edge", type=float, dest="sigma_edge")
    g.add_argument("--ridge-quantile", type=float, dest="ridge_quantile")
    g.add_argument("--d-r-factor", type=_fraction, dest="d_r_factor", help="disk radius as a fraction of min(W,H)")
    g.add_argument("--sigma-c-factor", type=_fraction, dest="sigma_c_factor")
    g.add_argument("--max-size", type=int, dest="working_resolution_cap", help="working resolution cap")
    g.add_argument("--bins", type=int, dest="histogram_bins")
    g.add_argument("--workers", type=int, dest="workers")


def _config(args):
    keys = (
        "iterations",
        "sigma_edge",
        "ridge_quantile",
        "d_r_factor",
        "sigma_c_factor",
        "working_resolution_cap",
        "histogram_bins",
        "workers",
    )
    return load_config(args.config, **{k: getattr(args, k, None) for k in keys})


def _clean(value):
    if isinstance(value, float) and value != value:
        return None
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


def _record(**fields) -> None:
    # NaN is not valid JSON; undefined means are emitted as null
    print(json.dumps(_clean(fields)))


def _weights(wv) -> dict:
    return {k: round(v, 6) for k, v in wv.as_dict().items()}


def _ensure_parent(path: Path) -> None:
    if not path.parent.exists():
        raise OSError(f"output directory {path.parent} does not exist")


def cmd_detect(args) -> int:
    cfg = _config(args)
    img = read_color_image(args.image)
    result = cgvs_detect(img, cfg=cfg)
    _ensure_parent(args.output)
    write_gray(args.output, result.p_sx)
    _record(
        command="detect",
        image=str(args.image),
        output=str(args.output),
        t_max=result.partition.t_max,
        weights=_weights(result.weights),
        iterations=result.iteration,
    )
    return EXIT_OK


def cmd_transform(args) -> int:
    cfg = _config(args)
    img = read_color_image(args.image)
    sal = read_gray(args.saliency)
    resampled = sal.shape != img.shape
    result, fitted = transform_saliency(img, sal, cfg=cfg)
    _ensure_parent(args.output)
    write_gray(args.output, result.p_sx)
    _record(
        command="transform",
        image=str(args.image),
        output=str(args.output),
        mean=[round(v, 4) for v in fitted.mean],
        covariance=[[round(float(v), 4) for v in row] for row in fitted.covariance],
        fallback_center=fitted.fallback,
        resampled=resampled,
        t_max=result.partition.t_max,
        weights=_weights(result.weights),
        iterations=result.iteration,
    )
    return EXIT_OK


def cmd_search(args) -> int:
    cfg = _config(args)
    img = read_color_image(args.image)
    init = read_gray(args.saliency) if args.saliency else None
    trace = multi_object_search(img, init, args.k, cfg)
    out = args.output
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "points.csv", "w", newline="") as fp, open(out / "weights.csv", "w", newline="") as fw:
        points = csv.writer(fp)
        weights = csv.writer(fw)
        points.writerow(["step", "x", "y", "mask"])
        weights.writerow(["step", *CHANNELS])
        for i, step in enumerate(trace, 1):
            name = f"mask_{i:02d}.png"
            write_mask(out / name, step.mask)
            points.writerow([i, step.point[0], step.point[1], name])
            weights.writerow([i, *(f"{v:.6f}" for v in step.weights.w)])
    _record(command="search", image=str(args.image), output=str(out), steps=len(trace),
            points=[list(s.point) for s in trace])
    return EXIT_OK


def _write_report(path: Path, report) -> list:
    names = report.metric_names
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["name", *names, "status"])
        for row in report.rows:
            if row.error is None:
                writer.writerow([row.name, *(f"{row.values[k]:.6f}" for k in names), "ok"])
            else:
                writer.writerow([row.name, *([""] * len(names)), f"error: {row.error}"])
        writer.writerow(["mean", *(f"{report.means[k]:.6f}" for k in names), f"n={len(report.rows) - len(report.failures)}"])
    written = [path]
    if report.mean_pr is not None:
        curve = path.with_name(path.stem + "_pr.csv")
        with open(curve, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["threshold", "precision", "recall", "f"])
            for t, p, r, f in report.mean_pr:
                writer.writerow([f"{t:.6f}", f"{p:.6f}", f"{r:.6f}", f"{f:.6f}"])
        written.append(curve)
    return written


def cmd_eval(args) -> int:
    index = read_index(args.index, args.task)
    if not index.entries:
        print("error: no entries in index", file=sys.stderr)
        return EXIT_INPUT
    report = evaluate_dataset(args.predictions, index, workers=args.workers or 1)
    _ensure_parent(args.output)
    written = _write_report(args.output, report)
    record = dict(command="eval", task=args.task, entries=len(report.rows), failed=len(report.failures),
                  means={k: round(v, 6) for k, v in report.means.items()}, outputs=[str(p) for p in written])
    if args.task == "object":
        record["mean_object_coverage"] = round(report.means["coverage"], 4)
    _record(**record)
    for row in report.failures:
        print(f"error: {row.name}: {row.error}", file=sys.stderr)
    return EXIT_PARTIAL if report.failures else EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _config(args)
    index = read_index(args.index, "object")
    if not index.entries:
        print("error: no entries in index", file=sys.stderr)
        return EXIT_INPUT
    factors = args.factors or list(SWEEP_FACTORS)
    rows = sweep_parameters(index, cfg, sweep_pairs(factors, args.grid))
    _ensure_parent(args.output)
    with open(args.output, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        for row in rows:
            writer.writerow({k: f"{v:.6f}" for k, v in row.items()})
    ious = [r["mean_iou"] for r in rows]
    _record(command="sweep", pairs=len(rows), images=len(index.entries), output=str(args.output),
            iou_range=round(max(ious) - min(ious), 6))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cgvs", description="Salient structure detection guided by scene layout.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="salient-structure map of an image")
    p.add_argument("image", type=Path)
    p.add_argument("-o", "--output", type=Path, required=True)
    _add_config_args(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("transform", help="turn an external saliency map into a structure map")
    p.add_argument("image", type=Path)
    p.add_argument("saliency", type=Path)
    p.add_argument("-o", "--output", type=Path, required=True)
    _add_config_args(p)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("search", help="sequential multi-object search")
    p.add_argument("image", type=Path)
    p.add_argument("-k", type=int, default=3, help="maximum number of objects")
    p.add_argument("-o", "--output", type=Path, required=True, help="output directory")
    p.add_argument("--saliency", type=Path, help="initial saliency map (default: color contrast)")
    _add_config_args(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("eval", help="score prediction maps against a dataset index")
    p.add_argument("predictions", type=Path, help="directory of prediction maps named by image stem")
    p.add_argument("index", type=Path, help="CSV index with columns image,gt,fixations")
    p.add_argument("--task", choices=("fixation", "object"), required=True)
    p.add_argument("-o", "--output", type=Path, required=True, help="report CSV")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="robustness sweep over d_r and sigma_c factors")
    p.add_argument("index", type=Path, help="object-task dataset index")
    p.add_argument("-o", "--output", type=Path, required=True)
    p.add_argument("--factors", type=_fraction, nargs="+", help="factors of min(W,H) (default 1/2 .. 1/6)")
    p.add_argument("--grid", choices=("cross", "full"), default="cross")
    _add_config_args(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (CGVSError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
