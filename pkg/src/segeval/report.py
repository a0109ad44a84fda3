"""Pair evaluation, batch orchestration, and report serialization.

A report is one evaluated ground-truth/prediction pair: per-label
confusion counts and metrics, pooled metrics across labels, and any
warnings (undefined or vacuous values). Reports serialize to JSON or to
a flat CSV with one row per (pair, label) plus a pooled row labeled ALL;
batch runs append per-metric mean rows under the reserved stem MEAN.

Full float precision is kept internally; values are rounded to 4
decimals only at emission unless full precision is requested.
"""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from types import MappingProxyType

import numpy as np

from .classic import (
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
from .mask import ConfusionCounts, LabelMask, boundary, confusion_counts
from .maskio import load_mask
from .ssegep import ssegep
from .stats import (
    QualityThresholds,
    mos_deviation,
    partition_by_quality,
    welch_t_test,
)

METRIC_NAMES = (
    "accuracy",
    "sensitivity",
    "specificity",
    "ppv",
    "iou",
    "dice",
    "generalized_dice",
    "mcc",
    "mcc_rescaled",
    "hausdorff",
    "ssegep",
)
# Metrics that only make sense across labels; their per-label cells stay empty.
_POOLED_ONLY = ("generalized_dice",)

_COUNT_FIELDS = ("tp", "fp", "fn", "tn")
_MASK_SUFFIXES = (".png", ".pgm")
MEAN_STEM = "MEAN"
POOLED_LABEL = "ALL"
THREADS_ENV_VAR = "SEGEVAL_THREADS"


@dataclass(frozen=True)
class RunConfig:
    """Evaluation settings shared by single-pair and batch runs.

    ``labels=None`` evaluates every non-background label found in either
    mask of each pair. ``metrics`` picks the emitted columns; evaluation
    skips anything not selected. ``thresholds`` only matters to quality
    partitioning (the compare command), not to evaluation itself.
    """

    labels: tuple | None = None
    connectivity: int = 8
    metrics: tuple = METRIC_NAMES
    out_format: str = "json"
    parallelism: int = 1
    full_precision: bool = False
    thresholds: QualityThresholds = field(default_factory=QualityThresholds)

    def __post_init__(self):
        if self.connectivity not in (4, 8):
            raise ValueError(f"connectivity must be 4 or 8, got {self.connectivity}")
        if self.labels is not None:
            labels = tuple(int(v) for v in self.labels)
            if not labels:
                raise ValueError("label list must not be empty")
            if any(v <= 0 for v in labels):
                raise ValueError("labels must be positive integers")
            if len(set(labels)) != len(labels):
                raise ValueError("label list contains duplicates")
            object.__setattr__(self, "labels", labels)
        metrics = tuple(self.metrics)
        if not metrics:
            raise ValueError("metric selection must not be empty")
        unknown = [m for m in metrics if m not in METRIC_NAMES]
        if unknown:
            raise ValueError(
                f"unknown metrics {unknown}; valid names: {', '.join(METRIC_NAMES)}"
            )
        if len(set(metrics)) != len(metrics):
            raise ValueError("metric selection contains duplicates")
        # Canonical column order regardless of how the selection was written.
        object.__setattr__(
            self, "metrics", tuple(m for m in METRIC_NAMES if m in metrics)
        )
        if self.out_format not in ("json", "csv"):
            raise ValueError(f"output format must be json or csv, got {self.out_format}")
        if self.parallelism < 1:
            raise ValueError("parallelism must be at least 1")


@dataclass(frozen=True)
class MetricReport:
    """Evaluated metrics for one mask pair."""

    gt_path: str
    pred_path: str
    stem: str
    per_label: MappingProxyType  # label -> {"counts": ConfusionCounts, "metrics": {...}}
    pooled: MappingProxyType  # {"counts", "metrics", "n_segments", "vacuous"}
    warnings: tuple


@dataclass(frozen=True)
class BatchResult:
    """All reports of a batch run plus per-metric means and warnings."""

    reports: tuple
    summary: MappingProxyType  # label key (str) -> {metric: mean}
    warnings: tuple


def _classic_metrics(c: ConfusionCounts, selection, scope: str, warnings: list) -> dict:
    values = {}
    producers = {
        "accuracy": accuracy,
        "sensitivity": sensitivity,
        "specificity": specificity,
        "ppv": ppv,
        "iou": iou,
        "dice": dice,
        "mcc": mcc,
        "mcc_rescaled": mcc_rescaled,
    }
    for name, producer in producers.items():
        if name not in selection:
            continue
        mv = producer(c)
        values[name] = mv.value
        if not mv.defined:
            if name in ("iou", "dice"):
                warnings.append(
                    f"{scope}: {name} vacuous (label absent from both masks), "
                    f"reported as 1.0000"
                )
            else:
                warnings.append(
                    f"{scope}: {name} undefined (zero denominator), reported as 0.0000"
                )
    return values


def _hausdorff_or_none(gt_b, pred_b, scope: str, warnings: list):
    if not gt_b.points or not pred_b.points:
        warnings.append(f"{scope}: hausdorff undefined (empty boundary)")
        return None
    return hausdorff(gt_b, pred_b).value


def evaluate_masks(gt: LabelMask, pred: LabelMask, cfg: RunConfig,
                   stem: str = "", gt_path: str = "", pred_path: str = "") -> MetricReport:
    """Evaluate a loaded pair; the pure core under evaluate_pair."""
    if gt.shape != pred.shape:
        raise ValueError(
            f"mask dimension mismatch: ground truth is {gt.width}x{gt.height}, "
            f"prediction is {pred.width}x{pred.height}"
        )
    if cfg.labels is not None:
        labels = list(cfg.labels)
    else:
        labels = sorted(set(gt.label_values()) | set(pred.label_values()))
        if not labels:
            raise ValueError(
                f"{stem or gt_path or 'pair'}: no non-background labels present "
                "in either mask"
            )
    sel = cfg.metrics
    warnings: list[str] = []

    breakdown = None
    if "ssegep" in sel:
        breakdown = ssegep(gt, pred, labels, connectivity=cfg.connectivity)
        segmented_labels = {m.label for m in breakdown.matches}

    per_label = {}
    total = ConfusionCounts(0, 0, 0, 0)
    for label in labels:
        scope = f"label {label}"
        c = confusion_counts(gt, pred, label)
        total = ConfusionCounts(
            total.tp + c.tp, total.fp + c.fp, total.fn + c.fn, total.tn + c.tn
        )
        values = _classic_metrics(c, sel, scope, warnings)
        if "hausdorff" in sel:
            values["hausdorff"] = _hausdorff_or_none(
                boundary(gt, label), boundary(pred, label), scope, warnings
            )
        if "ssegep" in sel:
            values["ssegep"] = breakdown.per_label[label]
            if label not in segmented_labels:
                values_note = "1.0000" if values["ssegep"] == 1.0 else "0.0000"
                warnings.append(
                    f"{scope}: ssegep vacuous (label absent from ground truth), "
                    f"reported as {values_note}"
                )
        per_label[label] = {"counts": c, "metrics": values}

    pooled_scope = "pooled"
    pooled_values = _classic_metrics(total, sel, pooled_scope, warnings)
    if "generalized_dice" in sel:
        try:
            pooled_values["generalized_dice"] = generalized_dice(gt, pred, labels).value
        except ValueError:
            pooled_values["generalized_dice"] = None
            warnings.append(
                f"{pooled_scope}: generalized_dice undefined "
                "(no requested label in ground truth)"
            )
    if "hausdorff" in sel:
        gt_region = LabelMask(np.isin(gt.labels, labels))
        pred_region = LabelMask(np.isin(pred.labels, labels))
        pooled_values["hausdorff"] = _hausdorff_or_none(
            boundary(gt_region, 1), boundary(pred_region, 1), pooled_scope, warnings
        )
    n_segments = None
    vacuous = None
    if "ssegep" in sel:
        pooled_values["ssegep"] = breakdown.score
        n_segments = breakdown.n_segments
        vacuous = breakdown.vacuous
        if vacuous:
            warnings.append(
                f"{pooled_scope}: ssegep vacuous (no requested label in ground truth)"
            )

    pooled = {
        "counts": total,
        "metrics": pooled_values,
        "n_segments": n_segments,
        "vacuous": vacuous,
    }
    return MetricReport(
        gt_path=gt_path,
        pred_path=pred_path,
        stem=stem,
        per_label=MappingProxyType(per_label),
        pooled=MappingProxyType(pooled),
        warnings=tuple(warnings),
    )


def evaluate_pair(gt_path, pred_path, cfg: RunConfig | None = None) -> MetricReport:
    """Load two mask files and evaluate them as one pair."""
    cfg = cfg or RunConfig()
    gt_path = os.fspath(gt_path)
    pred_path = os.fspath(pred_path)
    gt = load_mask(gt_path)
    pred = load_mask(pred_path, expected_dims=(gt.width, gt.height))
    stem = os.path.splitext(os.path.basename(gt_path))[0]
    return evaluate_masks(gt, pred, cfg, stem=stem, gt_path=gt_path, pred_path=pred_path)


def _collect_mask_files(directory) -> dict:
    directory = os.fspath(directory)
    if not os.path.isdir(directory):
        raise ValueError(f"{directory}: not a directory")
    out = {}
    for name in sorted(os.listdir(directory)):
        stem, suffix = os.path.splitext(name)
        if suffix.lower() not in _MASK_SUFFIXES:
            continue
        if stem == MEAN_STEM:
            raise ValueError(
                f"{directory}: stem {MEAN_STEM!r} is reserved for summary rows"
            )
        if stem in out:
            raise ValueError(f"{directory}: duplicate stem {stem!r}")
        out[stem] = os.path.join(directory, name)
    return out


def _effective_parallelism(cfg: RunConfig) -> int:
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw is None:
        return cfg.parallelism
    try:
        value = int(raw)
    except ValueError:
        value = 0
    if value < 1:
        raise ValueError(
            f"{THREADS_ENV_VAR} must be a positive integer, got {raw!r}"
        )
    return value


def evaluate_batch(gt_dir, pred_dir, cfg: RunConfig | None = None) -> BatchResult:
    """Evaluate every stem present in both directories.

    Pairs are matched by file stem, evaluated concurrently up to the
    configured parallelism (the SEGEVAL_THREADS environment variable
    wins when set), and always reported in sorted-stem order, so output
    does not depend on scheduling.
    """
    cfg = cfg or RunConfig()
    gt_files = _collect_mask_files(gt_dir)
    pred_files = _collect_mask_files(pred_dir)
    common = sorted(set(gt_files) & set(pred_files))
    if not common:
        raise ValueError(
            f"no matching file stems between {os.fspath(gt_dir)} and {os.fspath(pred_dir)}"
        )
    warnings = [
        f"unmatched stem (no prediction): {s}" for s in sorted(set(gt_files) - set(common))
    ] + [
        f"unmatched stem (no ground truth): {s}" for s in sorted(set(pred_files) - set(common))
    ]

    def run(stem: str) -> MetricReport:
        report = evaluate_pair(gt_files[stem], pred_files[stem], cfg)
        # evaluate_pair derives the stem from the file name; they agree here
        return report

    degree = _effective_parallelism(cfg)
    if degree == 1:
        reports = [run(s) for s in common]
    else:
        with ThreadPoolExecutor(max_workers=degree) as pool:
            reports = list(pool.map(run, common))

    return BatchResult(
        reports=tuple(reports),
        summary=MappingProxyType(_summarize(reports, cfg)),
        warnings=tuple(warnings),
    )


def _summarize(reports, cfg: RunConfig) -> dict:
    """Mean of each metric per label key, over rows where it has a value."""
    sums: dict[str, dict[str, list]] = {}
    for report in reports:
        for key, metrics in _iter_row_metrics(report):
            bucket = sums.setdefault(key, {})
            for name, value in metrics.items():
                if value is not None:
                    bucket.setdefault(name, []).append(value)
    summary = {}
    for key in _sorted_label_keys(sums):
        summary[key] = {
            name: sum(vals) / len(vals)
            for name, vals in sums[key].items()
            if vals
        }
    return summary


def _iter_row_metrics(report: MetricReport):
    for label in sorted(report.per_label):
        yield str(label), report.per_label[label]["metrics"]
    yield POOLED_LABEL, report.pooled["metrics"]


def _sorted_label_keys(keys) -> list:
    numeric = sorted(int(k) for k in keys if k != POOLED_LABEL)
    out = [str(k) for k in numeric]
    if POOLED_LABEL in keys:
        out.append(POOLED_LABEL)
    return out


def _fmt_cell(value, full_precision: bool) -> str:
    if value is None:
        return ""
    if full_precision:
        return repr(float(value))
    return f"{float(value):.4f}"


def _json_number(value, full_precision: bool):
    if value is None:
        return None
    return float(value) if full_precision else round(float(value), 4)


def _report_json_obj(report: MetricReport, cfg: RunConfig) -> dict:
    labels_obj = {}
    for label in sorted(report.per_label):
        entry = report.per_label[label]
        c = entry["counts"]
        labels_obj[str(label)] = {
            "tp": c.tp,
            "fp": c.fp,
            "fn": c.fn,
            "tn": c.tn,
            "metrics": {
                name: _json_number(entry["metrics"].get(name), cfg.full_precision)
                for name in cfg.metrics
                if name not in _POOLED_ONLY
            },
        }
    pc = report.pooled["counts"]
    pooled_obj = {
        "tp": pc.tp,
        "fp": pc.fp,
        "fn": pc.fn,
        "tn": pc.tn,
        "metrics": {
            name: _json_number(report.pooled["metrics"].get(name), cfg.full_precision)
            for name in cfg.metrics
        },
    }
    if report.pooled["n_segments"] is not None:
        pooled_obj["n_segments"] = report.pooled["n_segments"]
        pooled_obj["vacuous"] = report.pooled["vacuous"]
    return {
        "stem": report.stem,
        "gt": report.gt_path,
        "pred": report.pred_path,
        "labels": labels_obj,
        "pooled": pooled_obj,
        "warnings": list(report.warnings),
    }


def _csv_fields(cfg: RunConfig) -> list:
    return ["stem", "label", *_COUNT_FIELDS, *cfg.metrics]


def _report_csv_rows(report: MetricReport, cfg: RunConfig) -> list:
    rows = []
    for key, metrics in _iter_row_metrics(report):
        counts = (
            report.pooled["counts"] if key == POOLED_LABEL
            else report.per_label[int(key)]["counts"]
        )
        row = {"stem": report.stem, "label": key}
        for f in _COUNT_FIELDS:
            row[f] = str(getattr(counts, f))
        for name in cfg.metrics:
            if key != POOLED_LABEL and name in _POOLED_ONLY:
                row[name] = ""
            else:
                row[name] = _fmt_cell(metrics.get(name), cfg.full_precision)
        rows.append(row)
    return rows


def serialize_report(report: MetricReport, cfg: RunConfig) -> str:
    """One pair's report as a JSON document or CSV table."""
    if cfg.out_format == "json":
        return json.dumps(_report_json_obj(report, cfg), indent=2) + "\n"
    return _rows_to_csv(_report_csv_rows(report, cfg), cfg)


def serialize_batch(result: BatchResult, cfg: RunConfig) -> str:
    """A batch run as JSON (reports + summary) or CSV (rows + MEAN rows)."""
    if cfg.out_format == "json":
        obj = {
            "reports": [_report_json_obj(r, cfg) for r in result.reports],
            "summary": {
                key: {
                    name: _json_number(result.summary[key].get(name), cfg.full_precision)
                    for name in cfg.metrics
                    if name in result.summary[key]
                }
                for key in result.summary
            },
            "warnings": list(result.warnings),
        }
        return json.dumps(obj, indent=2) + "\n"
    rows = []
    for report in result.reports:
        rows.extend(_report_csv_rows(report, cfg))
    for key in result.summary:
        row = {"stem": MEAN_STEM, "label": key}
        for f in _COUNT_FIELDS:
            row[f] = ""
        for name in cfg.metrics:
            value = result.summary[key].get(name)
            row[name] = _fmt_cell(value, cfg.full_precision)
        rows.append(row)
    return _rows_to_csv(rows, cfg)


def _rows_to_csv(rows, cfg: RunConfig) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=_csv_fields(cfg), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _read_report_rows(report_csv) -> tuple:
    path = os.fspath(report_csv)
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None:
            raise ValueError(f"{path}: empty report")
        fields = reader.fieldnames
        rows = [row for row in reader]
    return fields, rows


def _pooled_rows(fields, rows, path):
    missing = [c for c in ("stem", "label", *_COUNT_FIELDS) if c not in fields]
    if missing:
        raise ValueError(f"{path}: report is missing columns {missing}")
    pooled = [
        r for r in rows if r["label"] == POOLED_LABEL and r["stem"] != MEAN_STEM
    ]
    if not pooled:
        raise ValueError(f"{path}: report contains no pooled ({POOLED_LABEL}) rows")
    return pooled


def _metric_value(row, metric, path):
    cell = row.get(metric, "")
    if cell == "" or cell is None:
        raise ValueError(
            f"{path}: stem {row['stem']!r} has no value for metric {metric!r}"
        )
    return float(cell)


def compare_command(report_csv, metric: str,
                    thresholds: QualityThresholds | None = None,
                    alpha: float = 1e-5) -> dict:
    """Partition a report's pooled rows by quality and test the metric.

    Rows are bucketed good/bad from their confusion counts, then Welch's
    t-test runs on the metric values (good group first). Returns the
    significance-table shape: sample sizes, t, dof, p, and the rejection
    decision at alpha.
    """
    path = os.fspath(report_csv)
    fields, rows = _read_report_rows(path)
    pooled = _pooled_rows(fields, rows, path)
    if metric not in fields:
        raise ValueError(f"{path}: metric {metric!r} not present in report")
    counts = [
        tuple(int(r[f]) for f in _COUNT_FIELDS)
        for r in pooled
    ]
    good_idx, bad_idx, _ = partition_by_quality(counts, thresholds)
    if len(good_idx) < 2 or len(bad_idx) < 2:
        raise ValueError(
            "insufficient samples: need at least 2 rows in each quality bucket, "
            f"got good={len(good_idx)} bad={len(bad_idx)}"
        )
    good = [_metric_value(pooled[i], metric, path) for i in good_idx]
    bad = [_metric_value(pooled[i], metric, path) for i in bad_idx]
    result = welch_t_test(good, bad, alpha=alpha)
    return {
        "metric": metric,
        "n_good": len(good_idx),
        "n_bad": len(bad_idx),
        "t": result.statistic,
        "dof": result.dof,
        "p": result.p_value,
        "alpha": alpha,
        "reject": result.significant,
    }


def mos_command(report_csv, mos_csv, metrics) -> dict:
    """Mean absolute deviation of each metric from per-stem opinion scores.

    Metric values come from the report's pooled rows; MOS values from a
    stem,mos CSV. Every report stem must have an opinion score.
    """
    metrics = list(metrics)
    if not metrics:
        raise ValueError("need at least one metric")
    path = os.fspath(report_csv)
    fields, rows = _read_report_rows(path)
    pooled = _pooled_rows(fields, rows, path)
    for metric in metrics:
        if metric not in fields:
            raise ValueError(f"{path}: metric {metric!r} not present in report")

    mos_path = os.fspath(mos_csv)
    with open(mos_path, newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or not {"stem", "mos"} <= set(reader.fieldnames):
            raise ValueError(f"{mos_path}: expected columns stem,mos")
        mos_by_stem = {}
        for row in reader:
            if row["stem"] in mos_by_stem:
                raise ValueError(f"{mos_path}: duplicate stem {row['stem']!r}")
            mos_by_stem[row["stem"]] = float(row["mos"])

    missing = [r["stem"] for r in pooled if r["stem"] not in mos_by_stem]
    if missing:
        raise ValueError(f"{mos_path}: missing MOS for stems: {', '.join(missing)}")
    mos_values = [mos_by_stem[r["stem"]] for r in pooled]
    deviations = {}
    for metric in metrics:
        values = [_metric_value(r, metric, path) for r in pooled]
        deviations[metric] = mos_deviation(values, mos_values)
    return {"n_pairs": len(pooled), "deviations": deviations}
