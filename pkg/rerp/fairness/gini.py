'''Fairness of delivered PV energy: per-PV totals, the L1 deviation from
the mean and the Gini index over the sorted totals,

    G(s) = sum_i (i / N - (s_1 + ... + s_i) / (s_1 + ... + s_N)),

which is 0 for equal totals and (N - 1) / 2 when one PV delivers
everything. gini_index_normalized() rescales that maximum to 1.
'''
from dataclasses import dataclass
import numpy as np

class GiniUndefinedError(ValueError):
    pass

@dataclass(frozen=True, eq=False)
class EnergyVector:
    '''Delivered energy per PV over the horizon (MWh).'''
    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64).ravel()
        if np.any(arr < 0):
            raise ValueError("energy totals must be >= 0")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __len__(self):
        return len(self.values)

def _values(s):
    if isinstance(s, EnergyVector):
        return s.values
    return EnergyVector(s).values

def total_power(outputs, curtail=None):
    '''EnergyVector with s_l = sum_t outputs[l, t] * (1 - curtail[l, t]).'''
    outputs = np.asarray(outputs, dtype=np.float64)
    if outputs.ndim != 2:
        raise ValueError("outputs must be [PV, slot], got shape {}".format(outputs.shape))
    if np.any(outputs < 0):
        raise ValueError("outputs must be >= 0")
    if curtail is None:
        return EnergyVector(outputs.sum(axis=1))
    curtail = np.asarray(curtail, dtype=np.float64)
    if curtail.shape != outputs.shape:
        raise ValueError("curtailment has shape {}, outputs have {}".format(curtail.shape, outputs.shape))
    return EnergyVector((outputs * (1.0 - curtail)).sum(axis=1))

def l1_deviation(s):
    s = _values(s)
    if len(s) == 0:
        raise ValueError("empty energy vector")
    return float(np.abs(s.mean() - s).sum())

def lorenz_curve(s):
    '''Cumulative shares of the ascending totals, starting at 0.'''
    s = np.sort(_values(s))
    total = s.sum()
    if len(s) == 0 or total <= 0:
        raise GiniUndefinedError("Gini index is undefined for an all-zero energy vector")
    return np.insert(np.cumsum(s) / total, 0, 0.0)

def gini_index(s):
    shares = lorenz_curve(s)[1:]
    n = len(shares)
    return float(np.sum(np.arange(1, n + 1) / n - shares))

def gini_index_normalized(s):
    '''gini_index rescaled so full concentration gives 1.'''
    g = gini_index(s)
    n = len(_values(s))
    if n == 1:
        return 0.0
    return g / ((n - 1) / 2.0)
