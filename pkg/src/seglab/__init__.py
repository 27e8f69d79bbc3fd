"""Multi-label image segmentation with a Huber data term, Huber regulariser,
residual-driven adaptive trade-off and an ADMM solver."""

from .adaptive import AdaptiveParams, adaptive_lambda, residual_confidence
from .grid import divergence, gradient, laplacian
from .metrics import EvalReport, evaluate, match_labels
from .penalty import HuberParams, ParameterError, huber, moreau_yosida_value, prox_l1, soft_shrink
from .phantoms import Phantom, junction_phantom, noisy_rectangles_phantom, piecewise_constant_phantom
from .solver import (
    LabelState,
    NumericalDivergenceError,
    SegmentationResult,
    SolverParams,
    extract_labels,
    init_state,
    run,
)

__version__ = "0.1.0"

__all__ = [
    "AdaptiveParams", "EvalReport", "HuberParams", "LabelState", "NumericalDivergenceError",
    "ParameterError", "Phantom", "SegmentationResult", "SolverParams", "adaptive_lambda",
    "divergence", "evaluate", "extract_labels", "gradient", "huber", "init_state",
    "junction_phantom", "laplacian", "match_labels", "moreau_yosida_value",
    "noisy_rectangles_phantom", "piecewise_constant_phantom", "prox_l1", "residual_confidence",
    "run", "soft_shrink",
]
