'''Monte-Carlo Gini sampling of a fixed plan.

Sample k perturbs every PV forecast with zero-mean normal noise of
standard deviation zhat/3, clamps at 0, masks curtailed slots and takes the
Gini index of the per-PV totals. Sample k always draws from
numpy.random.default_rng([seed, k]), one standard-normal [PV, slot] block
in row-major order, so results do not depend on the worker count.
'''
import logging
from dataclasses import dataclass
from multiprocessing import Pool
import numpy as np
import pandas as pd

from rerp.fairness.gini import GiniUndefinedError, gini_index, total_power

logger = logging.getLogger(__name__)

def simulate_realized_outputs(instance, seed, k):
    '''Realized PV output [PV, slot] for sample k.'''
    zbar, zhat = instance.pv_expected, instance.pv_deviation
    if np.any(zhat < 0):
        raise ValueError("PV deviations must be >= 0")
    rng = np.random.default_rng([seed, k])
    noise = rng.standard_normal(zbar.shape)
    return np.maximum(zbar + noise * zhat / 3.0, 0.0)

def sample_gini(instance, curtail, seed, k):
    outputs = simulate_realized_outputs(instance, seed, k)
    try:
        return gini_index(total_power(outputs, curtail))
    except GiniUndefinedError:
        raise GiniUndefinedError("sample {} delivers no PV energy".format(k))

@dataclass(frozen=True, eq=False)
class GiniSampleSet:
    label: str
    samples: np.ndarray
    seed: int
    mean: float = None
    std: float = None

    def __post_init__(self):
        arr = np.array(self.samples, dtype=np.float64)
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)
        object.__setattr__(self, "mean", float(arr.mean()))
        object.__setattr__(self, "std", float(arr.std(ddof=1)))

    @property
    def M(self):
        return len(self.samples)

    def to_frame(self):
        return pd.DataFrame({"case": self.label, "k": np.arange(self.M), "gini": self.samples})

def run_monte_carlo(instance, plan, M, seed, label="", workers=1):
    if M < 2:
        raise ValueError("need at least 2 samples, got {}".format(M))
    args = [(instance, plan.curtail, seed, k) for k in range(M)]
    if workers > 1:
        with Pool(workers) as p:
            samples = p.starmap(sample_gini, args)
    else:
        samples = [sample_gini(*a) for a in args]
    result = GiniSampleSet(label, samples, seed)
    logger.info("%s: %d Gini samples, mean %.6g std %.3g", label or instance.name, M, result.mean, result.std)
    return result
