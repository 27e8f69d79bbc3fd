"""Huber loss, soft shrinkage and the Moreau-Yosida form of the Huber loss.

All functions accept scalars or arrays and act elementwise. Vector-valued
arguments are shrunk componentwise (anisotropic L1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class ParameterError(ValueError):
    """Raised for parameters outside their admissible range."""


@dataclass(frozen=True)
class HuberParams:
    threshold: float

    def __post_init__(self):
        _check_threshold(self.threshold)


def _check_threshold(threshold):
    if not np.isfinite(threshold) or threshold <= 0:
        raise ParameterError(f"Huber threshold must be positive, got {threshold!r}")


def huber(x, threshold):
    """Huber loss: ``x**2 / (2t)`` for ``|x| <= t``, ``|x| - t/2`` otherwise."""
    _check_threshold(threshold)
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    out = np.where(ax <= threshold, x * x / (2.0 * threshold), ax - 0.5 * threshold)
    return out if out.ndim else float(out)


def soft_shrink(v, weight):
    """Soft-thresholding operator ``sign(v) * max(|v| - weight, 0)``."""
    if np.any(np.asarray(weight) < 0):
        raise ParameterError("shrinkage weight must be nonnegative")
    v = np.asarray(v, dtype=float)
    out = np.sign(v) * np.maximum(np.abs(v) - weight, 0.0)
    # sign(0) * 0 gives -0.0 for negative zero inputs; normalise
    out = out + 0.0
    return out if out.ndim else float(out)


def prox_l1(v, weight):
    """Proximal map of ``weight * |x|``: argmin_x 0.5 (x - v)^2 + weight |x|."""
    return soft_shrink(v, weight)


def moreau_yosida_value(x, threshold):
    """Evaluate ``inf_r |r| + (x - r)^2 / (2 threshold)``.

    Returns ``(minimizer, value)``. The value coincides with
    ``huber(x, threshold)``.
    """
    _check_threshold(threshold)
    r = soft_shrink(x, threshold)
    x = np.asarray(x, dtype=float)
    value = np.abs(r) + (x - r) ** 2 / (2.0 * threshold)
    return r, (value if np.ndim(value) else float(value))
