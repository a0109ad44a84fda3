"""End-to-end acceptance checks, one verdict line per criterion."""

import time
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import pytest

from segeval import (
    ConfusionCounts,
    LabelMask,
    RunConfig,
    SCENARIOS,
    ScenarioSpec,
    boundary,
    confusion_counts,
    dice,
    evaluate_batch,
    generalized_dice,
    generate,
    hausdorff,
    iou,
    load_mask,
    mos_deviation,
    save_mask,
    sensitivity,
    serialize_batch,
    ssegep,
    welch_t_test,
)

from .conftest import ACCEPTANCE_LINES, random_pair
from .oracles import brute_ssegep, t_two_sided_p_quadrature


@contextmanager
def criterion(num, title):
    verdict = "FAIL"
    try:
        yield
        verdict = "PASS"
    finally:
        line = f"criterion {num:2d} ({title}): {verdict}"
        ACCEPTANCE_LINES.append(line)
        print(line)


def test_criterion_01_range_and_extremes():
    with criterion(1, "score range and perfect/empty extremes over 1000 random pairs"):
        rng = np.random.RandomState(seed=2024)
        start = time.perf_counter()
        n_perfect = 0
        n_empty = 0
        for _ in range(1000):
            gt, pred, labels = random_pair(rng)
            score = ssegep(gt, pred, labels).score
            assert 0.0 <= score <= 1.0
            equal = all(
                np.array_equal(gt.labels == lab, pred.labels == lab) for lab in labels
            )
            assert (score == 1.0) == equal
            n_perfect += equal
            gt_any = any((gt.labels == lab).any() for lab in labels)
            pred_any = any((pred.labels == lab).any() for lab in labels)
            if gt_any and not pred_any:
                n_empty += 1
                assert score == 0.0
        elapsed = time.perf_counter() - start
        # both extremes must actually occur in the corpus
        assert n_perfect >= 50
        assert n_empty >= 50
        assert elapsed < 10.0


def test_criterion_02_equal_dice_panels_separated():
    with criterion(2, "equal-Dice panels split by the segment-weighted score"):
        gt_e, pred_e = generate(ScenarioSpec(name="multisegment-e"))
        gt_f, pred_f = generate(ScenarioSpec(name="multisegment-f"))
        c_e = confusion_counts(gt_e, pred_e, 1)
        c_f = confusion_counts(gt_f, pred_f, 1)
        assert (c_e.tp, c_e.fn) == (135, 55)
        assert (c_f.tp, c_f.fn) == (135, 55)
        d_e = dice(c_e).value
        d_f = dice(c_f).value
        assert abs(d_e - d_f) < 1e-12
        assert d_e == pytest.approx(0.8308, abs=5e-5)
        s_e = ssegep(gt_e, pred_e, [1])
        s_f = ssegep(gt_f, pred_f, [1])
        assert s_e.score - s_f.score > 0
        assert s_e.score == pytest.approx(float(Fraction(49, 90)), abs=1e-6)
        assert s_f.score == pytest.approx(float(Fraction(47, 90)), abs=1e-6)
        assert s_e.score_exact == Fraction(49, 90)
        assert s_f.score_exact == Fraction(47, 90)


def test_criterion_03_size_mix_ranking_inversion():
    with criterion(3, "Dice and segment-weighted score rank size-mix panels oppositely"):
        gt_c, pred_c = generate(ScenarioSpec(name="multisize-c"))
        gt_d, pred_d = generate(ScenarioSpec(name="multisize-d"))
        dice_c = dice(confusion_counts(gt_c, pred_c, 1)).value
        dice_d = dice(confusion_counts(gt_d, pred_d, 1)).value
        score_c = ssegep(gt_c, pred_c, [1]).score
        score_d = ssegep(gt_d, pred_d, [1]).score
        assert dice_c > dice_d
        assert score_d > score_c


def test_criterion_04_ring_hausdorff_agreement():
    with criterion(4, "under/over ring predictions get near-equal Hausdorff"):
        for offset in (2, 5, 10):
            values = {}
            for name in ("rings-under", "rings-over"):
                gt, pred = generate(ScenarioSpec(name=name, ring_offset=offset))
                values[name] = hausdorff(boundary(gt, 1), boundary(pred, 1)).value
            assert abs(values["rings-under"] - values["rings-over"]) <= 1.0


def test_criterion_05_reduction_identities():
    with criterion(5, "reductions to sensitivity, Dice, and IoU identities"):
        rng = np.random.RandomState(seed=77)
        # prediction inside a single ground-truth segment: score == sensitivity
        for _ in range(100):
            h = rng.randint(6, 22)
            w = rng.randint(6, 22)
            arr = np.zeros((h, w), dtype=np.uint8)
            r0 = rng.randint(0, h - 3)
            c0 = rng.randint(0, w - 3)
            arr[r0:rng.randint(r0 + 2, h + 1), c0:rng.randint(c0 + 2, w + 1)] = 1
            gt = LabelMask(arr)
            keep = rng.rand(h, w) < rng.uniform(0.2, 1.0)
            pred = LabelMask(np.where(keep & (arr == 1), 1, 0).astype(np.uint8))
            score = ssegep(gt, pred, [1]).score
            sens = sensitivity(confusion_counts(gt, pred, 1)).value
            assert abs(score - sens) <= 1e-12
        # one label: the size-weighted Dice collapses to plain Dice
        checked = 0
        while checked < 100:
            gt, pred, _ = random_pair(rng, max_size=24, max_labels=1)
            c = confusion_counts(gt, pred, 1)
            if c.tp + c.fn == 0:
                continue
            checked += 1
            g = generalized_dice(gt, pred, [1]).value
            assert abs(g - dice(c).value) <= 1e-12
        # dice = 2*iou / (1 + iou) on raw counts
        done = 0
        while done < 200:
            tp, fp, fn = (int(v) for v in rng.randint(0, 500, size=3))
            if tp + fp + fn == 0:
                continue
            done += 1
            c = ConfusionCounts(tp, fp, fn, 5)
            i = iou(c).value
            assert abs(dice(c).value - 2 * i / (1 + i)) <= 1e-12


def test_criterion_06_small_segment_sensitivity():
    with criterion(6, "one lost pixel costs more on the small segment"):
        arr = np.zeros((24, 24), dtype=np.uint8)
        arr[2:12, 2:12] = 1  # area 100
        arr[16:18, 2:7] = 1  # area 10
        gt = LabelMask(arr)
        small_loss = arr.copy()
        small_loss[16, 2] = 0
        large_loss = arr.copy()
        large_loss[2, 2] = 0
        perfect = ssegep(gt, gt, [1]).score_exact
        with_small_loss = ssegep(gt, LabelMask(small_loss), [1]).score_exact
        with_large_loss = ssegep(gt, LabelMask(large_loss), [1]).score_exact
        assert perfect == 1
        assert with_small_loss == Fraction(19, 20)
        assert with_large_loss == Fraction(199, 200)
        assert perfect - with_small_loss > perfect - with_large_loss


def test_criterion_07_brute_force_oracle():
    with criterion(7, "matches the flood-fill rational oracle on small masks"):
        rng = np.random.RandomState(seed=321)
        for _ in range(150):
            gt, pred, labels = random_pair(rng, max_size=32)
            for conn in (8, 4):
                got = ssegep(gt, pred, labels, connectivity=conn).score
                want = brute_ssegep(gt.labels, pred.labels, labels, connectivity=conn)
                assert abs(got - float(want)) <= 1e-12


def test_criterion_08_statistics():
    with criterion(8, "Welch test hand values and quality-cohort separation"):
        res = welch_t_test([1, 2, 3, 4, 5], [2, 3, 4, 5, 6])
        assert res.statistic == pytest.approx(-1.0, abs=1e-12)
        assert res.dof == pytest.approx(8.0, abs=1e-12)
        assert abs(res.p_value - 0.3466) <= 0.0005
        oracle = t_two_sided_p_quadrature(res.statistic, res.dof)
        assert res.p_value == pytest.approx(oracle, rel=1e-8)
        rng = np.random.RandomState(seed=3)
        good = (0.9 + 0.02 * rng.rand(20)).tolist()
        bad = (0.1 + 0.02 * rng.rand(20)).tolist()
        sep = welch_t_test(good, bad, alpha=1e-5)
        assert sep.p_value < 1e-5
        assert sep.significant


def test_criterion_09_opinion_score_deviation():
    with criterion(9, "segment-weighted score sits closest to the opinion scores"):
        mos = [0.75, 0.20, 0.76, 0.81, 0.03]
        ssegep_vals = [0.63, 0.20, 0.75, 0.82, 0.0]
        dice_vals = [0.68, 0.22, 0.68, 0.53, 0.04]
        dev_s = mos_deviation(ssegep_vals, mos)
        dev_d = mos_deviation(dice_vals, mos)
        # hand arithmetic: (.12+0+.01+.01+.03)/5 and (.07+.02+.08+.28+.01)/5
        assert dev_s == pytest.approx(0.034, abs=1e-6)
        assert dev_d == pytest.approx(0.092, abs=1e-6)
        assert dev_s < dev_d


def test_criterion_10_determinism_and_io(tmp_path):
    with criterion(10, "parallel batches byte-identical, image round-trips lossless"):
        gt_dir = tmp_path / "gt"
        pred_dir = tmp_path / "pred"
        gt_dir.mkdir()
        pred_dir.mkdir()
        for name in SCENARIOS:
            gt, pred = generate(ScenarioSpec(name=name))
            for mask, role in ((gt, "gt"), (pred, "pred")):
                for fmt in ("png", "pgm"):
                    path = tmp_path / f"{name}_{role}.{fmt}"
                    save_mask(mask, path)
                    assert load_mask(path) == mask
            save_mask(gt, gt_dir / f"{name}.png")
            save_mask(pred, pred_dir / f"{name}.png")
        for fmt in ("csv", "json"):
            texts = []
            for degree in (1, 8):
                cfg = RunConfig(out_format=fmt, parallelism=degree)
                texts.append(serialize_batch(evaluate_batch(gt_dir, pred_dir, cfg), cfg))
            assert texts[0] == texts[1]
