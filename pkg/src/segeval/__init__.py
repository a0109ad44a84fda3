"""Segmentation evaluation metrics, with emphasis on small segments.

The package scores predicted label masks against ground truth with the
usual pixel-overlap metrics plus a segment-weighted score that values a
small segment as much as a large one, and ships the statistical tooling
(quality partitioning, Welch/Levene tests, opinion-score deviation) used
to validate metric choices, a deterministic synthetic-scenario
generator, and a batch CLI.
"""

from .classic import (
    MetricValue,
    accuracy,
    dice,
    generalized_dice,
    hausdorff,
    iou,
    mcc,
    mcc_rescaled,
    ppv,
    sensitivity,
    specificity,
)
from .mask import (
    BoundarySet,
    ConfusionCounts,
    LabelMask,
    Segment,
    boundary,
    confusion_counts,
    connected_components,
    fp_mask,
)
from .maskio import load_mask, save_mask
from .report import (
    METRIC_NAMES,
    BatchResult,
    MetricReport,
    RunConfig,
    compare_command,
    evaluate_batch,
    evaluate_masks,
    evaluate_pair,
    mos_command,
    serialize_batch,
    serialize_report,
)
from .ssegep import (
    LabelFpStats,
    SegmentMatch,
    SsegepBreakdown,
    fp_weights,
    match_tp,
    segment_weights,
    ssegep,
)
from .stats import (
    QualityThresholds,
    TestResult,
    classify_quality,
    levene_test,
    mos_deviation,
    partition_by_quality,
    welch_t_test,
)
from .synth import SCENARIOS, ScenarioSpec, generate

__version__ = "0.1.0"

__all__ = [
    "BatchResult",
    "BoundarySet",
    "ConfusionCounts",
    "LabelFpStats",
    "LabelMask",
    "METRIC_NAMES",
    "MetricReport",
    "MetricValue",
    "QualityThresholds",
    "RunConfig",
    "SCENARIOS",
    "ScenarioSpec",
    "Segment",
    "SegmentMatch",
    "SsegepBreakdown",
    "TestResult",
    "accuracy",
    "boundary",
    "classify_quality",
    "compare_command",
    "confusion_counts",
    "connected_components",
    "dice",
    "evaluate_batch",
    "evaluate_masks",
    "evaluate_pair",
    "fp_mask",
    "fp_weights",
    "generalized_dice",
    "generate",
    "hausdorff",
    "iou",
    "levene_test",
    "load_mask",
    "match_tp",
    "mcc",
    "mcc_rescaled",
    "mos_command",
    "mos_deviation",
    "partition_by_quality",
    "ppv",
    "save_mask",
    "segment_weights",
    "sensitivity",
    "serialize_batch",
    "serialize_report",
    "specificity",
    "ssegep",
    "welch_t_test",
]
