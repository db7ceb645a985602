'''Hypothesis tests applied to pairs of Gini sample sets: Shapiro-Wilk for
normality, a two-sided F-test for equal variances and the pooled-variance
Student t-test for equal means.
'''
from dataclasses import dataclass
import numpy as np
from scipy import stats

@dataclass(frozen=True)
class TestResult:
    __test__ = False

    test: str
    statistic: float
    p_value: float
    null: str

def _sample(values, label, min_size=2):
    arr = np.asarray(values, dtype=np.float64).ravel()
    if len(arr) < min_size:
        raise ValueError("{} needs at least {} values, got {}".format(label, min_size, len(arr)))
    return arr

def shapiro_wilk(samples):
    x = _sample(samples, "Shapiro-Wilk test", 3)
    if len(x) > 5000:
        raise ValueError("Shapiro-Wilk test supports at most 5000 values, got {}".format(len(x)))
    if np.ptp(x) == 0:
        raise ValueError("Shapiro-Wilk test is undefined for a constant sample")
    w, p = stats.shapiro(x)
    return TestResult("shapiro-wilk", float(w), float(p), "sample is normally distributed")

def f_test(a, b):
    a, b = _sample(a, "F-test"), _sample(b, "F-test")
    var_b = np.var(b, ddof=1)
    if var_b == 0:
        raise ValueError("F-test is undefined when the second sample has zero variance")
    f = float(np.var(a, ddof=1) / var_b)
    dist = stats.f(len(a) - 1, len(b) - 1)
    p = min(1.0, 2.0 * min(dist.cdf(f), dist.sf(f)))
    return TestResult("f-test", f, float(p), "samples have equal variances")

def t_test(a, b):
    a, b = _sample(a, "t-test"), _sample(b, "t-test")
    if np.var(a, ddof=1) == 0 and np.var(b, ddof=1) == 0:
        raise ValueError("t-test is undefined for zero pooled variance")
    t, p = stats.ttest_ind(a, b, equal_var=True)
    return TestResult("t-test", float(t), float(p), "samples have equal means")
