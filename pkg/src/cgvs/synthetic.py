"""Synthetic scenes with known structure masks for testing and benchmarking."""
from __future__ import annotations

import numpy as np

from .raster import ColorImage, gaussian_smooth


def square_mask(shape, top_left, size) -> np.ndarray:
    mask = np.zeros(shape, dtype=bool)
    y, x = top_left
    mask[y : y + size, x : x + size] = True
    return mask


def square_scene(
    size: int = 128,
    square: int = 48,
    background: float = 0.2,
    foreground: float = 0.8,
    noise: float = 0.0,
    seed: int = 0,
) -> tuple[ColorImage, np.ndarray]:
    """Gray scene with a centered bright square; optional additive uniform noise."""
    off = (size - square) // 2
    mask = square_mask((size, size), (off, off), square)
    lum = np.where(mask, foreground, background).astype(np.float64)
    if noise:
        rng = np.random.default_rng(seed)
        lum = lum + rng.uniform(-noise, noise, lum.shape)
    lum = np.clip(lum, 0.0, 1.0)
    return ColorImage(lum, lum.copy(), lum.copy()), mask


def two_square_scene(
    size: int = 128,
    square: int = 44,
    background: float = 0.1,
    levels: tuple[float, float] = (0.9, 0.55),
    corners=((12, 72), (72, 12)),
) -> tuple[ColorImage, list[np.ndarray]]:
    """Two disjoint squares; the first listed has the higher contrast by default."""
    lum = np.full((size, size), background)
    masks = []
    for level, corner in zip(levels, corners):
        m = square_mask(lum.shape, corner, square)
        lum[m] = level
        masks.append(m)
    return ColorImage(lum, lum.copy(), lum.copy()), masks


def natural_scene(size: int = 64, seed: int = 0, width: int | None = None) -> ColorImage:
    """Random scene with 1/f-like spatial statistics and correlated color channels."""
    rng = np.random.default_rng(seed)
    h, w = size, width or size
    fy = np.fft.fftfreq(h)[:, None]
    fx = np.fft.fftfreq(w)[None, :]
    f = np.sqrt(fx * fx + fy * fy)
    f[0, 0] = 1.0
    channels = []
    base = None
    for _ in range(3):
        spectrum = (rng.normal(size=(h, w)) + 1j * rng.normal(size=(h, w))) / f
        field = np.real(np.fft.ifft2(spectrum))
        base = field if base is None else 0.6 * base + 0.4 * field
        channels.append(base)
    out = []
    for c in channels:
        c = (c - c.min()) / (np.ptp(c) or 1.0)
        out.append(c)
    return ColorImage(*out)


def object_suite(count: int = 20, size: int = 96, seed: int = 0) -> list[tuple[ColorImage, np.ndarray]]:
    """Scenes with one rectangle or disk of varying size, position and color on a textured field."""
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:size, 0:size]
    scenes = []
    for _ in range(count):
        frac = rng.uniform(0.10, 0.30)
        cx = size / 2 + rng.uniform(-0.12, 0.12) * size
        cy = size / 2 + rng.uniform(-0.12, 0.12) * size
        if rng.random() < 0.5:
            half = np.sqrt(frac * size * size) / 2
            aspect = rng.uniform(0.75, 1.33)
            mask = (np.abs(xx - cx) <= half * aspect) & (np.abs(yy - cy) <= half / aspect)
        else:
            radius = np.sqrt(frac * size * size / np.pi)
            mask = (xx - cx) ** 2 + (yy - cy) ** 2 <= radius * radius
        bg = rng.uniform(0.1, 0.4, 3)
        fg = np.clip(bg + rng.choice([-1, 1]) * rng.uniform(0.35, 0.55, 3), 0, 1)
        texture = gaussian_smooth(rng.normal(0, 0.04, (size, size)), 1.5)
        chans = [np.clip(np.where(mask, fg[i], bg[i]) + texture, 0, 1) for i in range(3)]
        scenes.append((ColorImage(*chans), mask))
    return scenes
