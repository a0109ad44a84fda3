"""Pixel-overlap metrics computed from confusion counts and boundaries.

All ratio metrics return a MetricValue so callers can tell a true zero
from a zero substituted for an undefined ratio (division by zero). Exact
integer or rational arithmetic is used internally wherever a metric is a
ratio of counts; conversion to float is the final step.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import sqrt

import numpy as np

from .mask import BoundarySet, ConfusionCounts, LabelMask


@dataclass(frozen=True)
class MetricValue:
    """A metric score plus whether its formula was actually defined.

    ``defined=False`` marks scores substituted by convention (for example
    sensitivity with no positive ground-truth pixels); downstream
    reporting surfaces these as warnings rather than silently mixing them
    with real scores.
    """

    name: str
    value: float
    defined: bool = True


def accuracy(c: ConfusionCounts) -> MetricValue:
    if c.total == 0:
        raise ValueError("accuracy undefined: zero total pixel count")
    return MetricValue("accuracy", (c.tp + c.tn) / c.total)


def sensitivity(c: ConfusionCounts) -> MetricValue:
    denom = c.tp + c.fn
    if denom == 0:
        return MetricValue("sensitivity", 0.0, defined=False)
    return MetricValue("sensitivity", c.tp / denom)


def specificity(c: ConfusionCounts) -> MetricValue:
    denom = c.tn + c.fp
    if denom == 0:
        return MetricValue("specificity", 0.0, defined=False)
    return MetricValue("specificity", c.tn / denom)


def ppv(c: ConfusionCounts) -> MetricValue:
    denom = c.tp + c.fp
    if denom == 0:
        return MetricValue("ppv", 0.0, defined=False)
    return MetricValue("ppv", c.tp / denom)


def iou(c: ConfusionCounts) -> MetricValue:
    denom = c.tp + c.fp + c.fn
    if denom == 0:
        # Both region sets empty: perfect agreement by convention.
        return MetricValue("iou", 1.0, defined=False)
    return MetricValue("iou", c.tp / denom)


def dice(c: ConfusionCounts) -> MetricValue:
    denom = 2 * c.tp + c.fp + c.fn
    if denom == 0:
        return MetricValue("dice", 1.0, defined=False)
    return MetricValue("dice", 2 * c.tp / denom)


def mcc(c: ConfusionCounts) -> MetricValue:
    """Matthews correlation coefficient in [-1, 1].

    The product under the root is computed in exact integer arithmetic;
    any zero factor makes the coefficient undefined and substitutes 0.0.
    """
    tp, fp, fn, tn = c.tp, c.fp, c.fn, c.tn
    denom_sq = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn)
    if denom_sq == 0:
        return MetricValue("mcc", 0.0, defined=False)
    num = tp * tn - fp * fn
    return MetricValue("mcc", num / sqrt(denom_sq))


def mcc_rescaled(c: ConfusionCounts) -> MetricValue:
    """MCC mapped linearly onto [0, 1] for side-by-side metric tables."""
    base = mcc(c)
    return MetricValue("mcc_rescaled", (base.value + 1.0) / 2.0, defined=base.defined)


def hausdorff(gt_boundary: BoundarySet, pred_boundary: BoundarySet) -> MetricValue:
    """Symmetric Hausdorff distance between two boundary point sets.

    Euclidean point distance; the maximum of the two directed distances
    (max over one set of the min distance to the other). Raises on an
    empty side since max-min over an empty set has no value.
    """
    if not gt_boundary.points or not pred_boundary.points:
        raise ValueError("undefined Hausdorff: empty boundary")
    a = np.array(sorted(gt_boundary.points), dtype=np.float64)
    b = np.array(sorted(pred_boundary.points), dtype=np.float64)
    worst = max(_directed_hausdorff_sq(a, b), _directed_hausdorff_sq(b, a))
    return MetricValue("hausdorff", worst ** 0.5)


def _directed_hausdorff_sq(a: np.ndarray, b: np.ndarray) -> float:
    # Chunk the (len(a), len(b)) distance matrix to bound peak memory.
    worst = 0.0
    step = max(1, 262144 // max(1, len(b)))
    for i in range(0, len(a), step):
        block = a[i:i + step]
        d2 = ((block[:, None, :] - b[None, :, :]) ** 2).sum(axis=2)
        worst = max(worst, float(d2.min(axis=1).max()))
    return worst


def generalized_dice(gt: LabelMask, pred: LabelMask, labels) -> MetricValue:
    """Multi-label Dice with each label weighted by 1 / its GT area.

    Exact rational arithmetic throughout; labels absent from the ground
    truth are skipped (their weight would be infinite). Raises if every
    requested label is absent.
    """
    if gt.shape != pred.shape:
        raise ValueError(
            f"mask dimension mismatch: ground truth is {gt.width}x{gt.height}, "
            f"prediction is {pred.width}x{pred.height}"
        )
    labels = list(labels)
    if not labels:
        raise ValueError("generalized Dice needs at least one label")
    num = Fraction(0)
    den = Fraction(0)
    any_present = False
    for label in labels:
        g = gt.labels == label
        g_area = int(np.count_nonzero(g))
        if g_area == 0:
            continue
        any_present = True
        p = pred.labels == label
        inter = int(np.count_nonzero(g & p))
        p_area = int(np.count_nonzero(p))
        w = Fraction(1, g_area)
        num += w * inter
        den += w * (g_area + p_area)
    if not any_present:
        raise ValueError("generalized Dice undefined: no requested label present in ground truth")
    return MetricValue("generalized_dice", float(2 * num / den))
