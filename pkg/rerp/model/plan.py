from dataclasses import dataclass
import numpy as np

def _frozen_bits(values, shape, label):
    arr = np.rint(np.asarray(values, dtype=np.float64)).astype(np.int8)
    if arr.shape != shape:
        raise ValueError("{} has shape {}, expected {}".format(label, arr.shape, shape))
    if np.any((arr != 0) & (arr != 1)):
        raise ValueError("{} must be 0/1".format(label))
    arr.setflags(write=False)
    return arr

@dataclass(frozen=True, eq=False)
class CommitmentPlan:
    '''First-stage decisions: on/start/stop [N_g, T] and curtail [N_p, T].'''
    on: np.ndarray
    start: np.ndarray
    stop: np.ndarray
    curtail: np.ndarray

    def __post_init__(self):
        on = np.asarray(self.on)
        shape = on.shape if on.ndim == 2 else (0, 0)
        object.__setattr__(self, "on", _frozen_bits(self.on, shape, "on"))
        object.__setattr__(self, "start", _frozen_bits(self.start, shape, "start"))
        object.__setattr__(self, "stop", _frozen_bits(self.stop, shape, "stop"))
        curtail = np.asarray(self.curtail)
        if curtail.size == 0:
            curtail = np.zeros((0, shape[1]))
        object.__setattr__(self, "curtail", _frozen_bits(curtail, (curtail.shape[0], shape[1]), "curtail"))

    @classmethod
    def from_on(cls, instance, on, curtail=None):
        '''Plan with the minimal start/stop indicators implied by on and
        the generators' initial states.
        '''
        on = np.rint(np.asarray(on, dtype=np.float64)).reshape(instance.n_g, instance.horizon)
        prev = np.hstack([np.array([[g.initial_on] for g in instance.generators]).reshape(instance.n_g, 1), on[:, :-1]])
        start = np.maximum(on - prev, 0)
        stop = np.maximum(prev - on, 0)
        if curtail is None:
            curtail = np.zeros((instance.n_p, instance.horizon))
        return cls(on, start, stop, np.asarray(curtail).reshape(instance.n_p, instance.horizon))

    def commitment_cost(self, instance):
        return float(np.sum(self.on * instance.no_load_cost) + np.sum(self.start * instance.startup_cost)
                + np.sum(self.stop * instance.shutdown_cost))

    def curtailment_cost(self, instance):
        return float(np.sum(self.curtail * instance.curtail_cost))

    def signature(self):
        return self.on.tobytes() + self.start.tobytes() + self.stop.tobytes() + self.curtail.tobytes()

    def violations(self, instance):
        '''Start/stop logic and min-up/min-down windows that this plan
        breaks, as readable strings; empty when the plan is admissible.
        '''
        out = []
        T = instance.horizon
        if self.on.shape != (instance.n_g, T) or self.curtail.shape != (instance.n_p, T):
            return ["plan dimensions do not match instance"]
        for i, g in enumerate(instance.generators):
            x = np.concatenate([[g.initial_on], self.on[i]]).astype(int)
            for t in range(1, T + 1):
                u, v = self.start[i, t-1], self.stop[i, t-1]
                if x[t-1] - x[t] + u < 0:
                    out.append("generators[{}] slot {}: started without start flag".format(i, t))
                if x[t] - x[t-1] + v < 0:
                    out.append("generators[{}] slot {}: stopped without stop flag".format(i, t))
                for tau in range(t + 1, min(t + int(g.min_up) - 1, T) + 1):
                    if x[t] - x[t-1] > x[tau]:
                        out.append("generators[{}] slot {}: min-up broken at slot {}".format(i, t, tau))
                for tau in range(t + 1, min(t + int(g.min_down) - 1, T) + 1):
                    if x[t-1] - x[t] > 1 - x[tau]:
                        out.append("generators[{}] slot {}: min-down broken at slot {}".format(i, t, tau))
        return out

@dataclass(frozen=True, eq=False)
class DispatchPlan:
    '''Second-stage production and reserve, both [N_g, T] in MW.'''
    production: np.ndarray
    reserve: np.ndarray
    cost: float = None

    def __post_init__(self):
        for attr in ("production", "reserve"):
            arr = np.array(getattr(self, attr), dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, attr, arr)

    def fuel_cost(self, instance):
        return float(np.sum(self.production * instance.marginal_cost))
