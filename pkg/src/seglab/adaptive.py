"""Residual-driven trade-off weights between data fit and regularity."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .penalty import ParameterError, soft_shrink


@dataclass(frozen=True)
class AdaptiveParams:
    beta: float = 10.0
    alpha: float = 0.01

    def __post_init__(self):
        if not self.beta > 0:
            raise ParameterError(f"beta must be positive, got {self.beta!r}")
        if not 0 < self.alpha < 1:
            raise ParameterError(f"alpha must lie in (0, 1), got {self.alpha!r}")


def residual_confidence(data_cost, beta):
    """Confidence ``exp(-cost / beta)`` in (0, 1]; large cost means low confidence."""
    if not beta > 0:
        raise ParameterError(f"beta must be positive, got {beta!r}")
    data_cost = np.asarray(data_cost, dtype=float)
    if np.any(data_cost < 0):
        raise ValueError("data cost must be nonnegative everywhere")
    return np.exp(-data_cost / beta)


def adaptive_lambda(nu, alpha):
    """Lasso fit of the confidence map: ``argmin_l 0.5 (nu - l)^2 + alpha |l|``.

    For ``nu`` in (0, 1] the result lies in ``[0, 1 - alpha]``, so some
    regularisation is always applied.
    """
    if not 0 < alpha < 1:
        raise ParameterError(f"alpha must lie in (0, 1), got {alpha!r}")
    return soft_shrink(nu, alpha)
