"""Classic overlap metrics on a pair of small masks.

Builds a ground-truth mask and an imperfect prediction, then walks
through the confusion counts and every count-based metric, including
the cases where a metric's denominator vanishes and the value is
flagged rather than left undefined.
"""

import numpy as np

from segeval import (
    ConfusionCounts,
    LabelMask,
    accuracy,
    boundary,
    confusion_counts,
    dice,
    hausdorff,
    iou,
    mcc,
    mcc_rescaled,
    ppv,
    sensitivity,
    specificity,
)


def main():
    # a 12x12 scene: one 6x6 object, predicted shifted by one column
    gt_arr = np.zeros((12, 12), dtype=np.uint8)
    gt_arr[3:9, 3:9] = 1
    pred_arr = np.zeros((12, 12), dtype=np.uint8)
    pred_arr[3:9, 4:10] = 1
    gt = LabelMask(gt_arr)
    pred = LabelMask(pred_arr)

    counts = confusion_counts(gt, pred, label=1)
    print("confusion counts for label 1")
    print(f"  tp={counts.tp} fp={counts.fp} fn={counts.fn} tn={counts.tn}")
    print()

    print("count-based metrics")
    for metric in (accuracy, sensitivity, specificity, ppv, iou, dice, mcc, mcc_rescaled):
        mv = metric(counts)
        note = "" if mv.defined else "  (degenerate case, flagged)"
        print(f"  {mv.name:>13}: {mv.value:.4f}{note}")
    print()

    hd = hausdorff(boundary(gt, 1), boundary(pred, 1))
    print(f"boundary Hausdorff distance: {hd.value:.4f} pixels")
    print("  (a one-column shift moves no boundary point further than 1 pixel)")
    print()

    # an empty prediction drives ppv's denominator to zero
    empty = ConfusionCounts(tp=0, fp=0, fn=36, tn=108)
    mv = ppv(empty)
    print("empty prediction:")
    print(f"  ppv value={mv.value} defined={mv.defined}")
    print("  undefined ratios are reported as 0.0 with defined=False,")
    print("  so downstream tables never hold NaNs")


if __name__ == "__main__":
    main()
