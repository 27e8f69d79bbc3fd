"""Region-based evaluation of a label map against ground truth."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .penalty import ParameterError


@dataclass
class EvalReport:
    precision: float
    recall: float
    f_measure: float
    pixel_accuracy: float
    matching: dict  # predicted label -> truth label, or None when unmatched

    def as_dict(self):
        d = asdict(self)
        d["matching"] = {str(k): v for k, v in self.matching.items()}
        return d


def confusion(predicted, truth):
    """Overlap counts ``C[p, t]`` between predicted and truth classes."""
    predicted = np.asarray(predicted)
    truth = np.asarray(truth)
    if predicted.shape != truth.shape:
        raise ParameterError(f"shape mismatch: {predicted.shape} vs {truth.shape}")
    if predicted.size == 0:
        raise ParameterError("empty label maps")
    p_classes, p_idx = np.unique(predicted, return_inverse=True)
    t_classes, t_idx = np.unique(truth, return_inverse=True)
    counts = np.zeros((p_classes.size, t_classes.size), dtype=np.int64)
    np.add.at(counts, (p_idx.ravel(), t_idx.ravel()), 1)
    return counts, p_classes, t_classes


def match_labels(predicted, truth):
    """Greedy maximum-overlap matching of predicted to truth classes.

    The largest remaining overlap is paired first. Ties prefer the lower
    truth label, then the predicted class whose first pixel (raster order)
    comes earliest; this keeps the result independent of how predicted
    classes are numbered. Pairs with zero overlap are never formed.
    """
    counts, p_classes, t_classes = confusion(predicted, truth)
    first_seen = _first_occurrence(np.asarray(predicted), p_classes)
    matching = {int(p): None for p in p_classes}
    # candidate pairs in greedy order
    i, j = np.nonzero(counts)
    order = np.lexsort((first_seen[i], j, -counts[i, j]))
    used_p = np.zeros(p_classes.size, bool)
    used_t = np.zeros(t_classes.size, bool)
    for k in order:
        a, b = i[k], j[k]
        if used_p[a] or used_t[b]:
            continue
        matching[int(p_classes[a])] = int(t_classes[b])
        used_p[a] = used_t[b] = True
    return matching


def _first_occurrence(labels, classes):
    flat = labels.ravel()
    idx = np.searchsorted(classes, flat)
    first = np.full(classes.size, flat.size)
    np.minimum.at(first, idx, np.arange(flat.size))
    return first


def evaluate(predicted, truth):
    """Macro-averaged (over truth classes) precision/recall after matching.

    Truth classes left without a partner count as zero precision and zero
    recall.
    """
    counts, p_classes, t_classes = confusion(predicted, truth)
    matching = match_labels(predicted, truth)
    p_index = {int(p): i for i, p in enumerate(p_classes)}
    t_index = {int(t): j for j, t in enumerate(t_classes)}
    p_size = counts.sum(axis=1)
    t_size = counts.sum(axis=0)

    prec = np.zeros(t_classes.size)
    rec = np.zeros(t_classes.size)
    matched_pixels = 0
    for p, t in matching.items():
        if t is None:
            continue
        i, j = p_index[p], t_index[t]
        overlap = counts[i, j]
        prec[j] = overlap / p_size[i]
        rec[j] = overlap / t_size[j]
        matched_pixels += overlap

    P, R = float(prec.mean()), float(rec.mean())
    F = 2 * P * R / (P + R) if P + R > 0 else 0.0
    return EvalReport(precision=P, recall=R, f_measure=F,
                      pixel_accuracy=float(matched_pixels / counts.sum()), matching=matching)
