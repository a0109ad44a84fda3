"""Validating a metric against quality cohorts and opinion scores.

A metric is only useful if it separates segmentations people would call
good from ones they would call bad. This demo builds a labeled cohort,
partitions it by hit/miss rates, and runs the two significance tests:
Welch's t-test on the means and Levene's test on the variances. It then
measures how far two metrics sit from human opinion scores.
"""

import numpy as np

from segeval import (
    QualityThresholds,
    classify_quality,
    levene_test,
    mos_deviation,
    partition_by_quality,
    welch_t_test,
)


def synthetic_cohort(rng, n_good=15, n_bad=15):
    """Confusion counts plus a metric sample per simulated case."""
    rows = []
    values = []
    for _ in range(n_good):
        tp = int(rng.randint(90, 100))
        fn = 100 - tp
        fp = int(rng.randint(0, 5))
        rows.append((tp, fp, fn, 400 - fp))
        values.append(2 * tp / (200 + fp - fn))
    for _ in range(n_bad):
        tp = int(rng.randint(5, 20))
        fn = 100 - tp
        fp = int(rng.randint(30, 60))
        rows.append((tp, fp, fn, 400 - fp))
        values.append(2 * tp / (200 + fp - fn))
    return rows, values


def main():
    rng = np.random.RandomState(seed=9)
    rows, values = synthetic_cohort(rng)

    thresholds = QualityThresholds()
    print("bucketing rule (all three must hold, strictly):")
    print(f"  good: tpr > {thresholds.good_tpr_min}, fpr < {thresholds.good_fpr_max}, "
          f"fnr < {thresholds.good_fnr_max}")
    print(f"  bad:  tpr < {thresholds.bad_tpr_max}, fpr > {thresholds.bad_fpr_min}, "
          f"fnr > {thresholds.bad_fnr_min}")
    print()

    sample = rows[0]
    print(f"first row {sample} classifies as: {classify_quality(*sample)!r}")
    good_idx, bad_idx, rest = partition_by_quality(rows)
    print(f"cohort of {len(rows)}: {len(good_idx)} good, {len(bad_idx)} bad, "
          f"{len(rest)} unclassified")
    print()

    good = [values[i] for i in good_idx]
    bad = [values[i] for i in bad_idx]
    t = welch_t_test(good, bad, alpha=1e-5)
    print("Welch's t-test on the metric across cohorts")
    print(f"  t={t.statistic:.3f} dof={t.dof:.2f} p={t.p_value:.3e}")
    print(f"  significant at alpha={t.alpha}: {t.significant}")
    f = levene_test(good, bad, alpha=1e-5)
    print("Levene's test on the cohort variances")
    print(f"  W={f.statistic:.3f} dof={f.dof:.2f} p={f.p_value:.3e}")
    print(f"  significant at alpha={f.alpha}: {f.significant}")
    print()

    # five panels: raters scored each segmentation on [0, 1]
    opinion = [0.75, 0.20, 0.76, 0.81, 0.03]
    metric_a = [0.63, 0.20, 0.75, 0.82, 0.0]
    metric_b = [0.68, 0.22, 0.68, 0.53, 0.04]
    print("mean absolute deviation from opinion scores")
    print(f"  metric A: {mos_deviation(metric_a, opinion):.3f}")
    print(f"  metric B: {mos_deviation(metric_b, opinion):.3f}")
    print("the metric with the smaller deviation tracks human judgment closer")


if __name__ == "__main__":
    main()
