"""Segment-wise evaluation with small-segment emphasis.

The score weights each ground-truth segment's true positives by the
inverse of that segment's area, so a missed small segment costs as much
as a missed large one. False positives are normalized per label by the
label's total ground-truth area and added to the denominator's segment
count. All intermediate arithmetic is exact rational; the float
conversion at the end is the only floating-point step, so a perfect
prediction scores exactly 1.0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType

import numpy as np

from .mask import (
    LabelMask,
    _component_groups,
    component_label_image,
    confusion_counts,
)


@dataclass(frozen=True)
class SegmentMatch:
    """True-positive tally for one ground-truth segment."""

    segment_index: int
    label: int
    gt_area: int
    tp_count: int

    def __post_init__(self):
        if self.gt_area <= 0:
            raise ValueError("segment area must be positive")
        if not 0 <= self.tp_count <= self.gt_area:
            raise ValueError(
                f"tp_count {self.tp_count} outside [0, {self.gt_area}] for segment area"
            )

    @property
    def weight(self) -> Fraction:
        return Fraction(1, self.gt_area)

    @property
    def contribution(self) -> Fraction:
        """Covered fraction of this segment: tp_count / gt_area, in [0, 1]."""
        return Fraction(self.tp_count, self.gt_area)


@dataclass(frozen=True)
class LabelFpStats:
    """False-positive penalty inputs for one label."""

    label: int
    fp_count: int
    label_tp_total: int

    def __post_init__(self):
        if self.fp_count < 0 or self.label_tp_total < 0:
            raise ValueError("counts must be non-negative")

    @property
    def weighted_fp(self) -> Fraction:
        """FP pixels scaled by the label's total true-positive area.

        With no true positives for the label there is nothing to scale
        by, so raw FP count stands in: spurious detections of an entirely
        missed label stay fully penalized instead of dividing by zero.
        """
        if self.fp_count == 0:
            return Fraction(0)
        if self.label_tp_total == 0:
            return Fraction(self.fp_count)
        return Fraction(self.fp_count, self.label_tp_total)


@dataclass(frozen=True)
class SsegepBreakdown:
    """Full accounting of one score: per-segment and per-label terms.

    ``score_exact`` is the rational value; ``score`` its float form.
    ``vacuous`` marks pairs where no requested label exists in the ground
    truth, so the score is a fixed convention rather than the formula.
    """

    matches: tuple
    fp_stats: tuple
    n_segments: int
    score_exact: Fraction
    vacuous: bool
    per_label: MappingProxyType

    @property
    def score(self) -> float:
        return float(self.score_exact)


def segment_weights(gt_segments) -> list:
    """Pair each segment with its inverse-area weight, in segment order."""
    return [(seg, Fraction(1, seg.area)) for seg in gt_segments]


def match_tp(gt_segments, pred: LabelMask) -> list[SegmentMatch]:
    """Count prediction pixels of the right label inside each GT segment."""
    matches = []
    for i, seg in enumerate(gt_segments):
        if seg.bbox[2] >= pred.height or seg.bbox[3] >= pred.width:
            raise ValueError(
                f"segment bbox {seg.bbox} falls outside prediction of shape {pred.shape}"
            )
        rows, cols = seg.coordinate_arrays()
        tp = int(np.count_nonzero(pred.labels[rows, cols] == seg.label))
        matches.append(
            SegmentMatch(segment_index=i, label=seg.label, gt_area=seg.area, tp_count=tp)
        )
    return matches


def fp_weights(gt: LabelMask, pred: LabelMask, labels) -> list[LabelFpStats]:
    """Per-label FP penalties; TP totals come from whole-label pixel counts."""
    out = []
    for label in labels:
        c = confusion_counts(gt, pred, label)
        out.append(LabelFpStats(label=label, fp_count=c.fp, label_tp_total=c.tp))
    return out


def _resolve_labels(gt: LabelMask, pred: LabelMask, labels) -> list[int]:
    if labels is None:
        merged = sorted(set(gt.label_values()) | set(pred.label_values()))
        if not merged:
            raise ValueError("no non-background labels present in either mask")
        return merged
    labels = [int(v) for v in labels]
    if not labels:
        raise ValueError("label list must not be empty")
    if len(set(labels)) != len(labels):
        raise ValueError("label list contains duplicates")
    for v in labels:
        if v <= 0:
            raise ValueError(f"labels must be positive, got {v}")
    return labels


def ssegep(gt: LabelMask, pred: LabelMask, labels=None, connectivity: int = 8) -> SsegepBreakdown:
    """Score a prediction against ground truth with small-segment emphasis.

    score = sum_i tp_i / area_i  /  (n_segments + sum_j weighted_fp_j)

    summing over ground-truth segments i of the requested labels and over
    labels j. ``labels=None`` evaluates every non-background label present
    in either mask. When the ground truth has none of the requested
    labels the formula is vacuous: the score is 1.0 if the prediction is
    also empty of them, else 0.0, and the breakdown is flagged.
    """
    if gt.shape != pred.shape:
        raise ValueError(
            f"mask dimension mismatch: ground truth is {gt.width}x{gt.height}, "
            f"prediction is {pred.width}x{pred.height}"
        )
    labels = _resolve_labels(gt, pred, labels)

    matches: list[SegmentMatch] = []
    fp_stats: list[LabelFpStats] = []
    per_label_score: dict[int, float] = {}
    numerator = Fraction(0)
    n_segments = 0
    fp_penalty = Fraction(0)
    seg_index = 0

    for label in labels:
        g = gt.labels == label
        p = pred.labels == label
        tp_total = int(np.count_nonzero(g & p))
        fp_total = int(np.count_nonzero(p)) - tp_total

        label_num = Fraction(0)
        label_n = 0
        comp, n = component_label_image(gt, label, connectivity)
        if n > 0:
            idx_sorted, starts, counts, perm = _component_groups(comp, n)
            hits = (pred.labels.ravel()[idx_sorted] == label).astype(np.intp)
            tp_per_seg = np.add.reduceat(hits, starts)
            for k in perm.tolist():
                matches.append(
                    SegmentMatch(
                        segment_index=seg_index,
                        label=label,
                        gt_area=int(counts[k]),
                        tp_count=int(tp_per_seg[k]),
                    )
                )
                seg_index += 1
            # Segments sharing an area share a denominator; grouping keeps
            # the rational sum short when components are numerous.
            for area in np.unique(counts).tolist():
                tp_sum = int(tp_per_seg[counts == area].sum())
                if tp_sum:
                    label_num += Fraction(tp_sum, int(area))
            label_n = n

        stats = LabelFpStats(label=label, fp_count=fp_total, label_tp_total=tp_total)
        fp_stats.append(stats)
        numerator += label_num
        n_segments += label_n
        fp_penalty += stats.weighted_fp

        if label_n > 0:
            per_label_score[label] = float(label_num / (label_n + stats.weighted_fp))
        else:
            per_label_score[label] = 1.0 if fp_total == 0 else 0.0

    vacuous = n_segments == 0
    if vacuous:
        any_pred = any(s.fp_count > 0 for s in fp_stats)
        score_exact = Fraction(0) if any_pred else Fraction(1)
    else:
        score_exact = numerator / (n_segments + fp_penalty)

    return SsegepBreakdown(
        matches=tuple(matches),
        fp_stats=tuple(fp_stats),
        n_segments=n_segments,
        score_exact=score_exact,
        vacuous=vacuous,
        per_label=MappingProxyType(per_label_score),
    )


def ssegep_from_segments(gt_segments, matches, fp_stats) -> Fraction:
    """Assemble the exact score from precomputed parts.

    Exposed for callers that already ran segmentation and matching; the
    parts must cover the same labels consistently.
    """
    n_segments = len(list(gt_segments))
    if n_segments == 0:
        raise ValueError("need at least one ground-truth segment")
    numerator = sum((m.contribution for m in matches), Fraction(0))
    penalty = sum((s.weighted_fp for s in fp_stats), Fraction(0))
    return numerator / (n_segments + penalty)
