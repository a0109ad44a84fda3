"""Command-line interface: evaluate, batch, compare, mos, synth."""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

from .maskio import save_mask
from .report import (
    METRIC_NAMES,
    RunConfig,
    compare_command,
    evaluate_batch,
    evaluate_pair,
    mos_command,
    serialize_batch,
    serialize_report,
)
from .stats import QualityThresholds
from .synth import SCENARIOS, ScenarioSpec, generate

_PROG = "segeval"


def _parse_labels(text: str) -> tuple:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ValueError(f"--labels expects comma-separated integers, got {text!r}")


def _parse_metrics(text: str) -> tuple:
    if text == "all":
        return METRIC_NAMES
    return tuple(part.strip() for part in text.split(",") if part.strip())


def _parse_canvas(text: str) -> tuple:
    try:
        w, h = text.lower().split("x")
        return (int(w), int(h))
    except ValueError:
        raise ValueError(f"--canvas expects WIDTHxHEIGHT, got {text!r}")


_THRESHOLD_KEYS = tuple(
    f.name for f in dataclasses.fields(QualityThresholds)
    if f.name != "fpr_from_negatives"
)


def _parse_thresholds(text: str | None, fpr_from_negatives: bool) -> QualityThresholds:
    kwargs: dict = {"fpr_from_negatives": fpr_from_negatives}
    if text:
        for part in text.split(","):
            key, sep, raw = part.partition("=")
            key = key.strip()
            if not sep or key not in _THRESHOLD_KEYS:
                raise ValueError(
                    f"--thresholds expects key=value pairs with keys "
                    f"{', '.join(_THRESHOLD_KEYS)}; got {part!r}"
                )
            kwargs[key] = float(raw)
    return QualityThresholds(**kwargs)


def _add_eval_options(p: argparse.ArgumentParser):
    p.add_argument("--labels", help="comma-separated label IDs (default: auto-detect)")
    p.add_argument("--connectivity", type=int, default=8, choices=(4, 8))
    p.add_argument("--metrics", default="all",
                   help="'all' or comma-separated metric names")
    p.add_argument("--format", default="json", choices=("json", "csv"),
                   dest="out_format")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--full-precision", action="store_true",
                   help="emit full float precision instead of 4 decimals")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=_PROG, description="Segmentation evaluation metrics and reports"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evaluate", help="evaluate one ground-truth/prediction pair")
    p.add_argument("--gt", required=True, help="ground-truth mask file (PNG or PGM)")
    p.add_argument("--pred", required=True, help="prediction mask file (PNG or PGM)")
    _add_eval_options(p)

    p = sub.add_parser("batch", help="evaluate directories paired by file stem")
    p.add_argument("--gt-dir", required=True)
    p.add_argument("--pred-dir", required=True)
    _add_eval_options(p)
    p.add_argument("--parallelism", type=int, default=1,
                   help="worker threads (SEGEVAL_THREADS overrides)")

    p = sub.add_parser("compare", help="significance test between quality cohorts")
    p.add_argument("--report", required=True, help="CSV report from evaluate/batch")
    p.add_argument("--metric", required=True)
    p.add_argument("--alpha", type=float, default=1e-5)
    p.add_argument("--thresholds",
                   help="comma-separated key=value quality-cutoff overrides")
    p.add_argument("--fpr-from-negatives", action="store_true",
                   help="use fp/(fp+tn) instead of fp/(tp+fp) for the FP rate")

    p = sub.add_parser("mos", help="mean absolute deviation from opinion scores")
    p.add_argument("--report", required=True, help="CSV report from evaluate/batch")
    p.add_argument("--mos", required=True, help="CSV with columns stem,mos")
    p.add_argument("--metrics", required=True, help="comma-separated metric names")

    p = sub.add_parser("synth", help="write a synthetic scenario's mask pair")
    p.add_argument("--scenario", required=True, choices=SCENARIOS)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--canvas", default="64x64", help="canvas size as WIDTHxHEIGHT")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ring-offset", type=int, default=5,
                   help="radius difference for the ring scenarios")
    p.add_argument("--format", default="png", choices=("png", "pgm"),
                   dest="out_format")
    return parser


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _warn(lines):
    for line in lines:
        print(f"{_PROG}: warning: {line}", file=sys.stderr)


def _run_config(args) -> RunConfig:
    return RunConfig(
        labels=_parse_labels(args.labels) if args.labels else None,
        connectivity=args.connectivity,
        metrics=_parse_metrics(args.metrics),
        out_format=args.out_format,
        parallelism=getattr(args, "parallelism", 1),
        full_precision=args.full_precision,
    )


def _cmd_evaluate(args) -> int:
    cfg = _run_config(args)
    report = evaluate_pair(args.gt, args.pred, cfg)
    _warn(report.warnings)
    _emit(serialize_report(report, cfg), args.out)
    return 0


def _cmd_batch(args) -> int:
    cfg = _run_config(args)
    result = evaluate_batch(args.gt_dir, args.pred_dir, cfg)
    _warn(result.warnings)
    for report in result.reports:
        _warn(f"{report.stem}: {w}" for w in report.warnings)
    _emit(serialize_batch(result, cfg), args.out)
    return 0


def _cmd_compare(args) -> int:
    thresholds = _parse_thresholds(args.thresholds, args.fpr_from_negatives)
    result = compare_command(args.report, args.metric, thresholds, alpha=args.alpha)
    sys.stdout.write(json.dumps(result, indent=2) + "\n")
    return 0


def _cmd_mos(args) -> int:
    metrics = _parse_metrics(args.metrics)
    result = mos_command(args.report, args.mos, metrics)
    sys.stdout.write(json.dumps(result, indent=2) + "\n")
    return 0


def _cmd_synth(args) -> int:
    spec = ScenarioSpec(
        name=args.scenario,
        canvas=_parse_canvas(args.canvas),
        seed=args.seed,
        ring_offset=args.ring_offset,
    )
    gt, pred = generate(spec)
    os.makedirs(args.out, exist_ok=True)
    for role, mask in (("gt", gt), ("pred", pred)):
        path = os.path.join(args.out, f"{spec.name}_{role}.{args.out_format}")
        save_mask(mask, path)
        print(path)
    return 0


_COMMANDS = {
    "evaluate": _cmd_evaluate,
    "batch": _cmd_batch,
    "compare": _cmd_compare,
    "mos": _cmd_mos,
    "synth": _cmd_synth,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"{_PROG}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
