import math

import numpy as np
import pytest

from segeval import (
    QualityThresholds,
    classify_quality,
    levene_test,
    mos_deviation,
    partition_by_quality,
    welch_t_test,
)
from segeval.stats import _betainc, _f_sf, _t_sf_two_sided

from .oracles import t_two_sided_p_quadrature


def test_betainc_endpoints_and_symmetry():
    assert _betainc(2.0, 3.0, 0.0) == 0.0
    assert _betainc(2.0, 3.0, 1.0) == 1.0
    rng = np.random.RandomState(seed=2)
    for _ in range(50):
        a, b = rng.uniform(0.5, 20.0, size=2)
        x = rng.uniform(0.0, 1.0)
        left = _betainc(a, b, x)
        right = 1.0 - _betainc(b, a, 1.0 - x)
        assert left == pytest.approx(right, abs=1e-12)
        assert 0.0 <= left <= 1.0


def test_betainc_uniform_case():
    # I_x(1, 1) is the identity
    for x in (0.1, 0.25, 0.7, 0.99):
        assert _betainc(1.0, 1.0, x) == pytest.approx(x, abs=1e-12)


def test_t_tail_against_quadrature():
    rng = np.random.RandomState(seed=4)
    for _ in range(40):
        t = rng.uniform(-6.0, 6.0)
        dof = rng.uniform(1.0, 60.0)
        got = _t_sf_two_sided(t, dof)
        want = t_two_sided_p_quadrature(t, dof)
        assert got == pytest.approx(want, rel=1e-8, abs=1e-12)


def test_f_tail_matches_squared_t():
    # F(1, dof) is the square of T(dof)
    rng = np.random.RandomState(seed=5)
    for _ in range(30):
        t = rng.uniform(0.1, 5.0)
        dof = rng.uniform(2.0, 40.0)
        assert _f_sf(t * t, 1.0, dof) == pytest.approx(
            _t_sf_two_sided(t, dof), rel=1e-9
        )


def test_welch_hand_example():
    r = welch_t_test([1, 2, 3, 4, 5], [2, 3, 4, 5, 6])
    assert r.statistic == pytest.approx(-1.0, abs=1e-12)
    assert r.dof == pytest.approx(8.0, abs=1e-12)
    assert r.p_value == pytest.approx(0.3466, abs=0.0005)
    assert not r.significant


def test_welch_identical_groups():
    r = welch_t_test([1.0, 2.0, 3.0], [3.0, 2.0, 1.0])
    assert r.statistic == 0.0
    assert r.p_value == pytest.approx(1.0)


def test_welch_separated_groups_reject():
    r = welch_t_test([0.9, 0.92, 0.88, 0.91], [0.1, 0.12, 0.08, 0.11])
    assert r.p_value < 1e-5
    assert r.significant


def test_welch_symmetry():
    a = [0.2, 0.4, 0.5, 0.3]
    b = [0.7, 0.8, 0.75, 0.9]
    r1 = welch_t_test(a, b)
    r2 = welch_t_test(b, a)
    assert r1.statistic == pytest.approx(-r2.statistic, abs=1e-12)
    assert r1.p_value == pytest.approx(r2.p_value, abs=1e-12)


def test_welch_unequal_variances_dof_fractional():
    r = welch_t_test([1.0, 1.1, 0.9, 1.05, 0.95], [5.0, 1.0, 9.0, 3.0, 7.0])
    assert 4.0 < r.dof < 5.0  # dominated by the noisy group


def test_welch_degenerate_inputs():
    with pytest.raises(ValueError):
        welch_t_test([1.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        welch_t_test([1.0, 2.0], [3.0])
    with pytest.raises(ValueError):
        welch_t_test([2.0, 2.0], [3.0, 3.0])


def test_welch_one_zero_variance_group_ok():
    r = welch_t_test([1.0, 1.0, 1.0], [2.0, 3.0, 4.0])
    assert math.isfinite(r.statistic)
    assert r.statistic < 0


def test_levene_spec_example():
    r = levene_test([1, 2, 3, 4, 5, 6], [10, 10.1, 9.9, 10.05, 9.95, 10])
    assert r.p_value < 0.05
    assert r.dof == 10.0
    assert r.statistic == pytest.approx(15.72942643391521, rel=1e-10)
    assert r.p_value == pytest.approx(0.0026603495712636, rel=1e-8)


def test_levene_same_multisets():
    r = levene_test([1.0, 2.0, 3.0], [3.0, 1.0, 2.0])
    assert r.statistic == 0.0
    assert r.p_value == pytest.approx(1.0)


def test_levene_degenerate():
    with pytest.raises(ValueError):
        levene_test([2.0, 2.0, 2.0], [5.0, 5.0])
    with pytest.raises(ValueError):
        levene_test([1.0], [1.0, 2.0])


def test_classify_quality_buckets():
    # tpr=0.9, fpr=9/(90+9)=0.09, fnr=0.1 -> good
    assert classify_quality(90, 9, 10, 900) == "good"
    # tpr=0.2, fpr=60/80=0.75, fnr=0.8 -> bad
    assert classify_quality(20, 60, 80, 840) == "bad"
    # high recall but high fp rate -> neither
    assert classify_quality(90, 90, 10, 810) == "unclassified"


def test_classify_quality_strict_inequalities():
    # exactly at the good cutoffs: tpr=0.8 is not > 0.8
    assert classify_quality(80, 20, 20, 880) == "unclassified"


def test_classify_quality_fpr_definition_flag():
    # fp/(tp+fp) = 60/80 = 0.75 but fp/(fp+tn) = 60/900 ~ 0.067
    strict = QualityThresholds(fpr_from_negatives=True)
    assert classify_quality(20, 60, 80, 840, strict) == "unclassified"
    assert classify_quality(20, 60, 80, 840) == "bad"


def test_classify_quality_no_positives_raises():
    with pytest.raises(ValueError):
        classify_quality(0, 5, 0, 95)


def test_partition_by_quality():
    counts = [
        (90, 9, 10, 900),   # good
        (20, 60, 80, 840),  # bad
        (50, 50, 50, 850),  # middle
        (95, 0, 5, 900),    # good
    ]
    good, bad, rest = partition_by_quality(counts)
    assert good == [0, 3]
    assert bad == [1]
    assert rest == [2]


def test_partition_names_offending_row():
    with pytest.raises(ValueError, match="row 1"):
        partition_by_quality([(90, 9, 10, 900), (0, 3, 0, 97)])


def test_threshold_validation():
    with pytest.raises(ValueError):
        QualityThresholds(good_tpr_min=0.3, bad_tpr_max=0.4)
    with pytest.raises(ValueError):
        QualityThresholds(good_fpr_max=0.6, bad_fpr_min=0.5)
    with pytest.raises(ValueError):
        QualityThresholds(good_tpr_min=1.5)


def test_mos_deviation_values():
    assert mos_deviation([0.5, 0.5], [0.5, 0.5]) == 0.0
    assert mos_deviation([0.5, 0.5, 0.5, 0.5], [0.0, 1.0, 0.0, 1.0]) == 0.5


def test_mos_deviation_fundus_panel_fixture():
    mos = [0.75, 0.20, 0.76, 0.81, 0.03]
    dev_ssegep = mos_deviation([0.63, 0.20, 0.75, 0.82, 0.0], mos)
    dev_dice = mos_deviation([0.68, 0.22, 0.68, 0.53, 0.04], mos)
    assert dev_ssegep == pytest.approx(0.034, abs=1e-6)
    assert dev_dice == pytest.approx(0.092, abs=1e-6)
    assert dev_ssegep < dev_dice


def test_mos_deviation_validation():
    with pytest.raises(ValueError):
        mos_deviation([0.5], [0.5, 0.6])
    with pytest.raises(ValueError):
        mos_deviation([], [])
    with pytest.raises(ValueError):
        mos_deviation([0.5], [1.2])


def test_mos_accepts_rater_averages():
    # averaged panel scores land between the five rating levels
    assert mos_deviation([0.8], [0.76]) == pytest.approx(0.04)
