"""Synthetic test images with exact ground-truth label maps."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .penalty import ParameterError


@dataclass
class Phantom:
    image: np.ndarray
    ground_truth: np.ndarray
    description: str

    @property
    def n_classes(self):
        return int(self.ground_truth.max()) + 1


def _relabel_contiguous(labels):
    _, inverse = np.unique(labels, return_inverse=True)
    return inverse.reshape(labels.shape)


def junction_phantom(n_regions=5, size=128, disc_radius_fraction=0.35):
    """``n_regions - 1`` equal angular wedges around a central disc.

    Wedge gray levels are equispaced on [0, 1] in angular order; the disc
    takes the midpoint of the central gap between wedge levels, which is as
    far from every wedge level as possible. A disc too small to cover any
    pixel leaves ``n_regions - 1`` classes.
    """
    if n_regions < 3:
        raise ParameterError("a junction needs at least 3 regions")
    if size < 8:
        raise ParameterError(f"size {size} too small for a junction with a disc")
    if not 0 <= disc_radius_fraction < 1:
        raise ParameterError("disc_radius_fraction must lie in [0, 1)")
    n_wedges = n_regions - 1
    levels = np.linspace(0.0, 1.0, n_wedges)
    mid = (n_wedges - 1) // 2
    disc_level = 0.5 * (levels[mid] + levels[mid + 1])

    centre = (size - 1) / 2.0
    yy, xx = np.mgrid[0:size, 0:size] - centre
    angle = np.mod(np.arctan2(yy, xx), 2 * np.pi)
    wedge = np.minimum((angle / (2 * np.pi) * n_wedges).astype(int), n_wedges - 1)
    radius = disc_radius_fraction * size / 2.0
    disc = np.hypot(xx, yy) < radius

    truth = np.where(disc, n_wedges, wedge)
    image = np.where(disc, disc_level, levels[wedge])
    truth = _relabel_contiguous(truth)
    return Phantom(image=image, ground_truth=truth,
                   description=f"junction: {n_wedges} wedges + disc r={radius:.1f}px, {size}x{size}")


RECT_LEVELS = (0.85, 0.15, 0.4, 0.65)


def noisy_rectangles_phantom(size=128, noise_sigmas=(0.05, 0.1, 0.15, 0.2), seed=0,
                             levels=RECT_LEVELS):
    """Light background with three side-by-side rectangles of distinct levels.

    Zero-mean Gaussian noise with the given standard deviations is added to
    (background, left, middle, right) and the result is clamped to [0, 1].
    """
    sigmas = np.asarray(noise_sigmas, dtype=float)
    if sigmas.shape != (4,) or not np.all(np.isfinite(sigmas)) or np.any(sigmas < 0):
        raise ParameterError("noise_sigmas must be four finite nonnegative values")
    if size < 16:
        raise ParameterError(f"size {size} too small for the rectangles layout")
    truth = np.zeros((size, size), dtype=int)
    top, bottom = size // 4, size - size // 4
    width = size // 4
    gap = (size - 3 * width) // 4
    for k in range(3):
        left = gap + k * (width + gap)
        truth[top:bottom, left:left + width] = k + 1
    rng = np.random.default_rng(seed)
    base = np.asarray(levels, dtype=float)[truth]
    noise = rng.standard_normal((size, size)) * sigmas[truth]
    image = np.clip(base + noise, 0.0, 1.0)
    return Phantom(image=image, ground_truth=truth,
                   description=f"noisy rectangles {size}x{size}, sigmas={tuple(sigmas)}")


def piecewise_constant_phantom(n_regions=4, size=64, seed=0):
    """Random guillotine partition into axis-aligned rectangles.

    The largest remaining block is split along its longer side at a seeded
    position in its middle half. Gray levels are the equispaced values
    ``k / (n - 1)`` in random order.
    """
    if not 1 <= n_regions <= 16:
        raise ParameterError("n_regions must be between 1 and 16")
    if size < 2 * n_regions:
        raise ParameterError(f"size {size} too small for {n_regions} regions")
    rng = np.random.default_rng(seed)
    blocks = [(0, size, 0, size)]  # (top, bottom, left, right)
    while len(blocks) < n_regions:
        areas = [(b - t) * (r - l) for t, b, l, r in blocks]
        t, b, l, r = blocks.pop(int(np.argmax(areas)))
        if r - l >= b - t:
            lo, hi = l + (r - l) // 4, r - (r - l) // 4
            cut = int(rng.integers(max(lo, l + 1), max(hi, l + 1) + 1))
            blocks += [(t, b, l, cut), (t, b, cut, r)]
        else:
            lo, hi = t + (b - t) // 4, b - (b - t) // 4
            cut = int(rng.integers(max(lo, t + 1), max(hi, t + 1) + 1))
            blocks += [(t, cut, l, r), (cut, b, l, r)]
    truth = np.zeros((size, size), dtype=int)
    for k, (t, b, l, r) in enumerate(sorted(blocks)):
        truth[t:b, l:r] = k
    levels = np.linspace(0.0, 1.0, n_regions) if n_regions > 1 else np.array([0.5])
    levels = rng.permutation(levels)
    return Phantom(image=levels[truth], ground_truth=truth,
                   description=f"piecewise constant, {n_regions} regions, {size}x{size}, seed={seed}")
