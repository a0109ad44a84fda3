"""Statistical validation: quality partitioning, Welch's t-test, Levene's
test, and mean-opinion-score deviation.

The t and F distribution tails both reduce to the regularized incomplete
beta function, implemented here with the standard continued-fraction
expansion so the package carries no statistics dependency.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import exp, lgamma, log, sqrt

_BETA_EPS = 3e-16
_BETA_FPMIN = 1e-300
_BETA_MAXIT = 300


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz scheme)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _BETA_FPMIN:
        d = _BETA_FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _BETA_MAXIT + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _BETA_FPMIN:
            d = _BETA_FPMIN
        c = 1.0 + aa / c
        if abs(c) < _BETA_FPMIN:
            c = _BETA_FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _BETA_FPMIN:
            d = _BETA_FPMIN
        c = 1.0 + aa / c
        if abs(c) < _BETA_FPMIN:
            c = _BETA_FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _BETA_EPS:
            return h
    raise ArithmeticError("incomplete beta continued fraction failed to converge")


def _betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if a <= 0.0 or b <= 0.0:
        raise ValueError("incomplete beta parameters must be positive")
    if x < 0.0 or x > 1.0:
        raise ValueError(f"incomplete beta argument outside [0, 1]: {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    front = exp(
        lgamma(a + b) - lgamma(a) - lgamma(b) + a * log(x) + b * log(1.0 - x)
    )
    # The continued fraction converges fast only on one side of the mean;
    # use the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) for the other.
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def _t_sf_two_sided(t: float, dof: float) -> float:
    """P(|T| >= |t|) for Student's t with ``dof`` degrees of freedom."""
    if dof <= 0.0:
        raise ValueError("degrees of freedom must be positive")
    return _betainc(dof / 2.0, 0.5, dof / (dof + t * t))


def _f_sf(f: float, d1: float, d2: float) -> float:
    """P(F >= f) for the F distribution with (d1, d2) degrees of freedom."""
    if d1 <= 0.0 or d2 <= 0.0:
        raise ValueError("degrees of freedom must be positive")
    if f <= 0.0:
        return 1.0
    return _betainc(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f))


@dataclass(frozen=True)
class QualityThresholds:
    """Cutoffs that bucket segmentations into good and bad cohorts.

    Good requires high recall AND low FP rate AND low FN rate; bad
    requires the reverse, all with strict inequalities. Rows meeting
    neither set stay unclassified. ``fpr_from_negatives`` switches the FP
    rate from fp/(tp+fp) (fraction of predicted positives that are wrong,
    the default) to fp/(fp+tn).
    """

    good_tpr_min: float = 0.80
    good_fpr_max: float = 0.20
    good_fnr_max: float = 0.20
    bad_tpr_max: float = 0.40
    bad_fpr_min: float = 0.50
    bad_fnr_min: float = 0.50
    fpr_from_negatives: bool = False

    def __post_init__(self):
        pairs = (
            (self.bad_tpr_max, self.good_tpr_min),
            (self.good_fpr_max, self.bad_fpr_min),
            (self.good_fnr_max, self.bad_fnr_min),
        )
        for low, high in pairs:
            if not 0.0 <= low <= high <= 1.0:
                raise ValueError(
                    "thresholds must lie in [0, 1] with good and bad ranges disjoint"
                )


@dataclass(frozen=True)
class TestResult:
    """Outcome of a two-sample hypothesis test."""

    statistic: float
    dof: float
    p_value: float
    alpha: float = 1e-5

    @property
    def significant(self) -> bool:
        return self.p_value < self.alpha


def _rates(tp: int, fp: int, fn: int, tn: int, fpr_from_negatives: bool):
    positives = tp + fn
    tpr = tp / positives
    fnr = fn / positives
    if fpr_from_negatives:
        negatives = fp + tn
        fpr = fp / negatives if negatives else 0.0
    else:
        predicted = tp + fp
        fpr = fp / predicted if predicted else 0.0
    return tpr, fpr, fnr


def classify_quality(tp: int, fp: int, fn: int, tn: int,
                     thresholds: QualityThresholds | None = None) -> str:
    """Label one row 'good', 'bad', or 'unclassified' by its rates."""
    t = thresholds or QualityThresholds()
    if tp + fn == 0:
        raise ValueError("quality rates undefined: no positive ground-truth pixels")
    tpr, fpr, fnr = _rates(tp, fp, fn, tn, t.fpr_from_negatives)
    if tpr > t.good_tpr_min and fpr < t.good_fpr_max and fnr < t.good_fnr_max:
        return "good"
    if tpr < t.bad_tpr_max and fpr > t.bad_fpr_min and fnr > t.bad_fnr_min:
        return "bad"
    return "unclassified"


def partition_by_quality(counts, thresholds: QualityThresholds | None = None):
    """Split (tp, fp, fn, tn) tuples into good / bad / unclassified index lists.

    Raises if any row has no positive ground-truth pixels, naming its
    index: such a row has no defined recall and silently dropping it
    would bias the cohorts.
    """
    good, bad, rest = [], [], []
    for i, (tp, fp, fn, tn) in enumerate(counts):
        try:
            bucket = classify_quality(tp, fp, fn, tn, thresholds)
        except ValueError:
            raise ValueError(
                f"row {i}: quality rates undefined (tp + fn == 0)"
            ) from None
        (good if bucket == "good" else bad if bucket == "bad" else rest).append(i)
    return good, bad, rest


def _mean_var(values, name: str):
    n = len(values)
    if n < 2:
        raise ValueError(f"{name} group needs at least 2 values, got {n}")
    mean = sum(values) / n
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return n, mean, var


def welch_t_test(a, b, alpha: float = 1e-5) -> TestResult:
    """Two-sample t-test without assuming equal variances.

    Degrees of freedom follow the Welch-Satterthwaite approximation and
    are fractional in general. Raises when either group has fewer than
    two values or when both variances are zero.
    """
    a = [float(v) for v in a]
    b = [float(v) for v in b]
    na, mean_a, var_a = _mean_var(a, "first")
    nb, mean_b, var_b = _mean_var(b, "second")
    sa = var_a / na
    sb = var_b / nb
    if sa + sb == 0.0:
        raise ValueError("t statistic undefined: both groups have zero variance")
    t = (mean_a - mean_b) / sqrt(sa + sb)
    dof = (sa + sb) ** 2 / (
        (sa * sa / (na - 1) if sa else 0.0) + (sb * sb / (nb - 1) if sb else 0.0)
    )
    return TestResult(statistic=t, dof=dof, p_value=_t_sf_two_sided(t, dof), alpha=alpha)


def levene_test(a, b, alpha: float = 1e-5) -> TestResult:
    """Two-group Levene test for equality of variances (mean-centered).

    The statistic is the one-way ANOVA F over absolute deviations from
    each group's mean, with (1, n_a + n_b - 2) degrees of freedom.
    """
    a = [float(v) for v in a]
    b = [float(v) for v in b]
    na, mean_a, _ = _mean_var(a, "first")
    nb, mean_b, _ = _mean_var(b, "second")
    za = [abs(v - mean_a) for v in a]
    zb = [abs(v - mean_b) for v in b]
    zbar_a = sum(za) / na
    zbar_b = sum(zb) / nb
    zbar = (sum(za) + sum(zb)) / (na + nb)
    ss_between = na * (zbar_a - zbar) ** 2 + nb * (zbar_b - zbar) ** 2
    ss_within = sum((z - zbar_a) ** 2 for z in za) + sum((z - zbar_b) ** 2 for z in zb)
    dof2 = na + nb - 2
    if ss_within == 0.0:
        raise ValueError(
            "Levene statistic undefined: zero within-group deviation spread"
        )
    w = dof2 * ss_between / ss_within
    return TestResult(statistic=w, dof=float(dof2), p_value=_f_sf(w, 1.0, float(dof2)),
                      alpha=alpha)


def mos_deviation(metric_values, mos_values) -> float:
    """Mean absolute deviation of a metric from mean-opinion scores.

    Both sequences align by position. MOS entries must lie in [0, 1]
    (averaged rater scores, not just the five rating levels).
    """
    metric_values = [float(v) for v in metric_values]
    mos_values = [float(v) for v in mos_values]
    if len(metric_values) != len(mos_values):
        raise ValueError(
            f"length mismatch: {len(metric_values)} metric values vs "
            f"{len(mos_values)} MOS values"
        )
    if not metric_values:
        raise ValueError("deviation needs at least one value pair")
    for v in mos_values:
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"MOS value outside [0, 1]: {v}")
    n = len(metric_values)
    return sum(abs(m - s) for m, s in zip(metric_values, mos_values)) / n
