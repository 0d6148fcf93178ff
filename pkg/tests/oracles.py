"""Slow, obviously-correct reference implementations used only by the tests.

Nothing here imports the package's numeric kernels; each oracle is written
from the definition with plain loops.
"""
from __future__ import annotations

import math

import numpy as np


def _clamped(x, i, j):
    h, w = x.shape
    return x[min(max(i, 0), h - 1), min(max(j, 0), w - 1)]


def naive_window(x, i, j, k):
    r = k // 2
    return [_clamped(x, i + a, j + b) for a in range(-r, r + 1) for b in range(-r, r + 1)]


def naive_box_mean(x, k):
    h, w = x.shape
    out = np.empty_like(x, dtype=np.float64)
    for i in range(h):
        for j in range(w):
            out[i, j] = math.fsum(naive_window(x, i, j, k)) / (k * k)
    return out


def naive_median(x, k):
    h, w = x.shape
    out = np.empty_like(x, dtype=np.float64)
    for i in range(h):
        for j in range(w):
            vals = sorted(naive_window(x, i, j, k))
            out[i, j] = vals[len(vals) // 2]
    return out


def brute_force_votes(magnitude, orientation, ridges, d_r):
    """Integer vote counts, one ridge pixel at a time."""
    h, w = magnitude.shape
    votes = [[0] * w for _ in range(h)]
    for py in range(h):
        for px in range(w):
            if not ridges[py, px]:
                continue
            tx = math.cos(orientation[py, px])
            ty = math.sin(orientation[py, px])
            left, right = [], []
            for qy in range(py - d_r, py + d_r + 1):
                for qx in range(px - d_r, px + d_r + 1):
                    if (qx - px) ** 2 + (qy - py) ** 2 > d_r * d_r:
                        continue
                    if not (0 <= qx < w and 0 <= qy < h):
                        continue
                    cross = tx * (qy - py) - ty * (qx - px)
                    if cross > 1e-9:
                        left.append((qy, qx))
                    elif cross < -1e-9:
                        right.append((qy, qx))
            m_left = sum(magnitude[q] for q in left) / len(left) if left else 0.0
            m_right = sum(magnitude[q] for q in right) / len(right) if right else 0.0
            if m_left > m_right:
                winners = left
            elif m_right > m_left:
                winners = right
            else:
                winners = []
            for qy, qx in winners:
                votes[qy][qx] += 1
    return np.array(votes, dtype=np.int64)


def scalar_likelihood(stack, structure, weights, bins=32):
    """p(x|s), p(x|b) per pixel from Laplace-smoothed histograms, by hand."""
    c, h, w = stack.shape
    s_pix = [(i, j) for i in range(h) for j in range(w) if structure[i, j]]
    b_pix = [(i, j) for i in range(h) for j in range(w) if not structure[i, j]]

    def bin_of(v):
        return min(int(math.floor(v * bins)), bins - 1)

    def pmf(ch, pix):
        counts = [1] * bins
        for i, j in pix:
            counts[bin_of(stack[ch, i, j])] += 1
        total = sum(counts)
        return [n / total for n in counts]

    p_s = np.ones((h, w))
    p_b = np.ones((h, w))
    for ch in range(c):
        if weights[ch] == 0:
            continue
        ps, pb = pmf(ch, s_pix), pmf(ch, b_pix)
        for i in range(h):
            for j in range(w):
                k = bin_of(stack[ch, i, j])
                p_s[i, j] *= max(ps[k], 1e-12) ** weights[ch]
                p_b[i, j] *= max(pb[k], 1e-12) ** weights[ch]
    return p_s, p_b


def mann_whitney_auc(sal, fixations):
    fixed = {(y, x) for x, y in fixations}
    pos = [sal[y, x] for (y, x) in fixed]
    neg = [sal[i, j] for i in range(sal.shape[0]) for j in range(sal.shape[1]) if (i, j) not in fixed]
    score = 0.0
    for p in pos:
        for n in neg:
            score += 1.0 if p > n else 0.5 if p == n else 0.0
    return score / (len(pos) * len(neg))


def dense_weighted_fscore(sal, gt, beta2=1.0):
    """Weighted F-measure with a brute-force distance field and a dense window matrix."""
    h, w = gt.shape
    n = h * w
    coords = [(i, j) for i in range(h) for j in range(w)]
    fg = [c for c in coords if gt[c]]
    err = np.abs(sal - gt.astype(float)).ravel()

    dist = np.zeros(n)
    nearest = np.arange(n)
    for idx, (i, j) in enumerate(coords):
        if gt[i, j]:
            continue
        best = min(fg, key=lambda q: (q[0] - i) ** 2 + (q[1] - j) ** 2)
        dist[idx] = math.dist(best, (i, j))
        nearest[idx] = best[0] * w + best[1]
    et = err[nearest]

    g = np.array([[math.exp(-(a * a + b * b) / 50.0) for b in range(-3, 4)] for a in range(-3, 4)])
    g /= g.sum()
    K = np.zeros((n, n))
    for idx, (i, j) in enumerate(coords):
        for a in range(-3, 4):
            for b in range(-3, 4):
                if 0 <= i + a < h and 0 <= j + b < w:
                    K[idx, (i + a) * w + (j + b)] = g[a + 3, b + 3]
    ea = K @ et

    g_flat = gt.ravel()
    min_e = np.where(g_flat & (ea < err), ea, err)
    importance = np.where(g_flat, 1.0, 2.0 - np.exp(math.log(0.5) / 5.0 * dist))
    ew = min_e * importance
    eps = np.finfo(float).eps
    tpw = g_flat.sum() - ew[g_flat].sum()
    fpw = ew[~g_flat].sum()
    recall = 1.0 - ew[g_flat].mean()
    precision = tpw / (eps + tpw + fpw)
    return (1 + beta2) * recall * precision / (eps + recall + beta2 * precision)


def exhaustive_threshold(prior, stack, w0):
    """Score of every size-grid candidate, ties in order broken by raster index."""
    n = prior.size
    flat_prior = prior.ravel().tolist()
    order = sorted(range(n), key=lambda i: (-flat_prior[i], i))
    flat = stack.reshape(stack.shape[0], n)
    scores = {}
    for pct in range(10, 51, 2):
        k = min(math.ceil(pct * n / 100), n // 2)
        s_idx, b_idx = order[:k], order[k:]
        total = 0.0
        for c in range(stack.shape[0]):
            ms = math.fsum(flat[c, s_idx]) / k
            mb = math.fsum(flat[c, b_idx]) / (n - k)
            total += (w0[c] * (ms - mb)) ** 2
        scores[pct] = math.sqrt(total)
    return scores
