'''Unfair/fair comparison pipeline: robust solves at chi = 0 and chi > 0,
Monte-Carlo Gini samples of both plans, and the test battery between them.
'''
import logging
import math
from dataclasses import dataclass, replace
import pandas as pd

from rerp.robust.benders import BendersConfig, solve_robust
from rerp.evaluation.montecarlo import run_monte_carlo
from rerp.model.patterns import PATTERNS, with_pattern
from rerp.evaluation.stats import TestResult, shapiro_wilk, f_test, t_test

logger = logging.getLogger(__name__)

@dataclass(frozen=True, eq=False)
class CaseResult:
    label: str
    chi: float
    robust: object
    samples: object

    @property
    def total_cost(self):
        '''Robust value without the fairness term.'''
        return self.robust.first_stage_cost + self.robust.recourse.dispatch_value

@dataclass(frozen=True, eq=False)
class PairReport:
    unfair: CaseResult
    fair: CaseResult
    shapiro: tuple
    f_test: object
    t_test: object

    def summary_frame(self):
        rows = [(c.label, c.samples.mean, c.samples.std, c.samples.M, c.samples.seed) for c in (self.unfair, self.fair)]
        return pd.DataFrame(rows, columns=["case", "mean", "std", "M", "seed"])

    def samples_frame(self):
        return pd.concat([self.unfair.samples.to_frame(), self.fair.samples.to_frame()], ignore_index=True)

    def tests_frame(self):
        rows = [("shapiro-wilk[{}]".format(c.label), r.statistic, r.p_value)
                for c, r in zip((self.unfair, self.fair), self.shapiro)]
        rows += [(r.test, r.statistic, r.p_value) for r in (self.f_test, self.t_test)]
        return pd.DataFrame(rows, columns=["test", "statistic", "p"])

def _guarded(test, name, *samples):
    try:
        return test(*samples)
    except ValueError as err:
        logger.warning("%s not applicable: %s", name, err)
        return TestResult(name, math.nan, math.nan, "not applicable")

def solve_case(instance, chi, M, seed, config, label, workers=1):
    result = solve_robust(instance, replace(config, chi=chi))
    samples = run_monte_carlo(instance, result.commitment, M, seed, label, workers)
    return CaseResult(label, chi, result, samples)

def compare_pair(instance, chi, M, seed, config=None, workers=1, case="RP"):
    '''Both cases are sampled with the same seed, so identical plans give
    identical sample sets.
    '''
    if config is None:
        config = BendersConfig()
    unfair = solve_case(instance, 0.0, M, seed, config, case, workers)
    fair = solve_case(instance, chi, M, seed, config, case + "fair", workers)
    a, b = unfair.samples.samples, fair.samples.samples
    # constant samples (one PV, or no noise) leave the tests undefined: NaN rows
    shapiro = (_guarded(shapiro_wilk, "shapiro-wilk", a), _guarded(shapiro_wilk, "shapiro-wilk", b))
    report = PairReport(unfair, fair, shapiro, _guarded(f_test, "f-test", a, b), _guarded(t_test, "t-test", a, b))
    logger.info("%s: mean Gini %.4g (chi=0) vs %.4g (chi=%g), t-test p=%.3g", instance.name,
            unfair.samples.mean, fair.samples.mean, chi, report.t_test.p_value)
    return report

def chi_sweep(instance, chis, M, seed, config=None, workers=1):
    '''One row per chi: robust cost without the fairness term and the Gini
    sample statistics of its plan.
    '''
    if config is None:
        config = BendersConfig()
    rows = []
    for chi in chis:
        res = solve_case(instance, float(chi), M, seed, config, "chi={:g}".format(chi), workers)
        rows.append((float(chi), res.total_cost, res.samples.mean, res.samples.std))
    return pd.DataFrame(rows, columns=["chi", "total_cost", "mean_gini", "std_gini"])

def pattern_battery(instance, chi, M, seed, config=None, workers=1, patterns=PATTERNS, allocation_seed=0):
    '''compare_pair on the instance re-profiled with each PV pattern; pairs
    are labelled by pattern (LP vs LPfair, ...).
    '''
    reports = []
    for pattern in patterns:
        case = with_pattern(instance, pattern, allocation_seed)
        reports.append(compare_pair(case, chi, M, seed, config, workers, case=pattern))
    return reports

def combined_frames(reports):
    '''(samples, summary, tests) over several PairReports; the tests frame
    gains a leading 'pair' column.
    '''
    samples = pd.concat([r.samples_frame() for r in reports], ignore_index=True)
    summary = pd.concat([r.summary_frame() for r in reports], ignore_index=True)
    tests = []
    for r in reports:
        frame = r.tests_frame()
        frame.insert(0, "pair", "{} vs {}".format(r.unfair.label, r.fair.label))
        tests.append(frame)
    return samples, summary, pd.concat(tests, ignore_index=True)
