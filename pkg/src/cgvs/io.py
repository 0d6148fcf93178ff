"""File formats: PNG rasters, fixation CSVs and the dataset index."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import InvalidInputError
from .raster import ColorImage

TASKS = ("fixation", "object")


def read_color_image(path) -> ColorImage:
    try:
        with Image.open(path) as im:
            arr = np.asarray(im.convert("RGB"))
    except (OSError, ValueError) as exc:
        raise InvalidInputError(f"cannot read image {path}: {exc}") from None
    return ColorImage.from_array(arr)


def read_gray(path) -> np.ndarray:
    """8-bit (or 16-bit) grayscale file as floats in [0, 1]."""
    try:
        with Image.open(path) as im:
            if im.mode in ("I;16", "I;16B", "I"):
                arr = np.asarray(im, dtype=np.float64)
                return arr / (65535.0 if arr.max() > 255 else 255.0)
            arr = np.asarray(im.convert("L"), dtype=np.float64)
    except (OSError, ValueError) as exc:
        raise InvalidInputError(f"cannot read map {path}: {exc}") from None
    return arr / 255.0


def image_size(path) -> tuple[int, int]:
    """``(height, width)`` from the file header."""
    try:
        with Image.open(path) as im:
            w, h = im.size
    except (OSError, ValueError) as exc:
        raise InvalidInputError(f"cannot read image {path}: {exc}") from None
    return h, w


def read_mask(path) -> np.ndarray:
    """Ground-truth mask: gray value > 127 is foreground."""
    try:
        with Image.open(path) as im:
            arr = np.asarray(im.convert("L"))
    except (OSError, ValueError) as exc:
        raise InvalidInputError(f"cannot read mask {path}: {exc}") from None
    return arr > 127


def quantize(x) -> np.ndarray:
    return np.round(np.clip(np.asarray(x, dtype=np.float64), 0.0, 1.0) * 255.0).astype(np.uint8)


def write_gray(path, x) -> None:
    """Write a [0, 1] raster as 8-bit gray, value ``round(255 p)``."""
    Image.fromarray(quantize(x), mode="L").save(path)


def write_mask(path, mask) -> None:
    Image.fromarray(np.asarray(mask, dtype=np.uint8) * 255, mode="L").save(path)


def read_fixations(path) -> list[tuple[int, int]]:
    """``x,y`` integer pixel coordinates, one per line; an ``x,y`` header is tolerated."""
    points = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or not "".join(row).strip():
                continue
            if lineno == 1 and [c.strip().lower() for c in row[:2]] == ["x", "y"]:
                continue
            if len(row) < 2:
                raise InvalidInputError(f"{path}:{lineno}: expected 'x,y'")
            try:
                points.append((int(row[0]), int(row[1])))
            except ValueError:
                raise InvalidInputError(f"{path}:{lineno}: non-integer coordinate") from None
    return points


def write_fixations(path, points) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for x, y in points:
            writer.writerow([int(x), int(y)])


@dataclass(frozen=True)
class DatasetEntry:
    image: Path
    gt: Path | None = None
    fixations: Path | None = None

    @property
    def stem(self) -> str:
        return self.image.stem


@dataclass(frozen=True)
class DatasetIndex:
    entries: list
    task: str


def read_index(path, task: str) -> DatasetIndex:
    """Read a CSV index with header ``image,gt,fixations``.

    Relative paths resolve against the index file's directory. Empty cells
    mean "not provided". Entries must carry the ground truth their task needs.
    """
    if task not in TASKS:
        raise InvalidInputError(f"task must be one of {TASKS}, got {task!r}")
    path = Path(path)
    base = path.parent
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise InvalidInputError(f"cannot read index {path}: {exc}") from None
    entries = []
    with fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "image" not in reader.fieldnames:
            raise InvalidInputError(f"{path}: index needs an 'image' column")
        for row in reader:
            image = (row.get("image") or "").strip()
            if not image:
                continue

            def resolve(key):
                value = (row.get(key) or "").strip()
                return (base / value) if value else None

            entry = DatasetEntry(image=base / image, gt=resolve("gt"), fixations=resolve("fixations"))
            need = entry.fixations if task == "fixation" else entry.gt
            if need is None:
                kind = "fixations" if task == "fixation" else "gt"
                raise InvalidInputError(f"{path}: entry {image} lacks the '{kind}' column for task {task}")
            entries.append(entry)
    return DatasetIndex(entries=entries, task=task)


def write_index(path, entries) -> None:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["image", "gt", "fixations"])
        for e in entries:
            writer.writerow([e.image, e.gt or "", e.fixations or ""])
