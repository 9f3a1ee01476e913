"""Continuous-time Markov chains sampled by the Gillespie algorithm.

Per event the sampler consumes one uniform pair: the first draw selects the
jump target against the cumulative normalized off-diagonal rates of the
current row, the second gives the holding time through the inverse
exponential CDF at the row's total exit rate. States with zero exit rate are
absorbing and hold to the horizon.
"""

import numpy as np

from ..semantics.trace import Trace
from .base import ConfigError, PusModel, UniformBlocks, as_seed_sequence

_ROW_SUM_TOL = 1e-9


class CtmcModel(PusModel):
    def __init__(self, rate_matrix, initial_state: int, labeling: dict, regions=None):
        M = np.asarray(rate_matrix, dtype=np.float64)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ConfigError(f"rate matrix must be square, got shape {M.shape}")
        n = M.shape[0]
        off = M.copy()
        np.fill_diagonal(off, 0.0)
        if np.any(off < 0.0):
            raise ConfigError("off-diagonal transition rates must be non-negative")
        if np.any(np.abs(M.sum(axis=1)) > _ROW_SUM_TOL):
            raise ConfigError(f"rate matrix rows must sum to 0 within {_ROW_SUM_TOL}")
        if np.any(np.diag(M) > 0.0):
            raise ConfigError("diagonal entries must be non-positive")
        if not (0 <= initial_state < n):
            raise ConfigError(f"initial state {initial_state} out of range for {n} states")
        self.rate_matrix = M
        self.initial_state = int(initial_state)
        self.n_states = n
        self.labeling = {int(s): frozenset(ls) for s, ls in labeling.items()}
        self.regions = dict(regions or {})
        self._label_by_state = [self.labeling.get(s, frozenset()) for s in range(n)]
        self._exit = -np.diag(M).copy()
        # per-row jump targets and cumulative normalized rates
        self._targets = np.zeros((n, max(n - 1, 1)), dtype=np.int64)
        self._cum = np.ones((n, max(n - 1, 1)), dtype=np.float64)
        for s in range(n):
            targets = [k for k in range(n) if k != s]
            rates = np.array([M[s, k] for k in targets], dtype=np.float64)
            self._targets[s, : n - 1] = targets
            if self._exit[s] > 0.0:
                self._cum[s, : n - 1] = np.cumsum(rates) / self._exit[s]

    # -- interface -----------------------------------------------------------
    @property
    def state_count(self):
        return self.n_states

    @property
    def initial_states(self):
        return [self.initial_state]

    @property
    def labels(self):
        out = set()
        for ls in self._label_by_state:
            out |= ls
        return frozenset(out)

    def with_initial(self, state: int) -> "CtmcModel":
        m = CtmcModel.__new__(CtmcModel)
        m.__dict__.update(self.__dict__)
        if not (0 <= state < self.n_states):
            raise ConfigError(f"initial state {state} out of range")
        m.initial_state = int(state)
        return m

    def with_extra_label(self, label: str, states) -> "CtmcModel":
        m = CtmcModel.__new__(CtmcModel)
        m.__dict__.update(self.__dict__)
        states = set(states)
        m.labeling = {s: (ls | {label} if s in states else ls) for s, ls in
                      ((s, self.labeling.get(s, frozenset())) for s in range(self.n_states))}
        m._label_by_state = [m.labeling[s] for s in range(self.n_states)]
        return m

    # -- sampling -------------------------------------------------------------
    def sample(self, seed, horizon: float) -> Trace:
        if horizon <= 0.0:
            raise ValueError("horizon must be positive")
        rng = np.random.default_rng(as_seed_sequence(seed))
        blocks = UniformBlocks(rng)
        times, states = self._run_scalar(blocks, 0.0, self.initial_state, horizon)
        return self._trace([0.0] + times, [self.initial_state] + states, horizon)

    def _run_scalar(self, blocks, t, s, horizon):
        times, states = [], []
        exit_rates = self._exit
        cums = self._cum
        targets = self._targets
        nxt = blocks.next
        log1p = np.log1p  # ufunc also used by the batch path; bit-identical
        while True:
            rate = exit_rates[s]
            if rate == 0.0:
                break
            u_jump = nxt()
            t += -log1p(-nxt()) / rate
            if t >= horizon:
                break
            row = cums[s]
            j = 0
            while row[j] <= u_jump:
                j += 1
            s = int(targets[s, j])
            times.append(t)
            states.append(s)
        return times, states

    def sample_batch(self, seeds, horizon: float):
        if horizon <= 0.0:
            raise ValueError("horizon must be positive")
        B = len(seeds)
        if B == 0:
            return []
        max_rate = float(self._exit.max())
        est = int(horizon * max_rate * 1.4) + 16
        blocks = np.empty((B, 2 * est))
        rngs = []
        for i, sd in enumerate(seeds):
            rng = np.random.default_rng(as_seed_sequence(sd))
            blocks[i] = rng.random(2 * est)
            rngs.append(rng)

        t = np.zeros(B)
        s = np.full(B, self.initial_state, dtype=np.int64)
        active = np.ones(B, dtype=bool)
        TM = np.zeros((B, est + 1))
        SM = np.full((B, est + 1), self.initial_state, dtype=np.int64)
        count = np.ones(B, dtype=np.int64)
        for i in range(est):
            rate = self._exit[s]
            active &= rate > 0.0
            if not active.any():
                break
            u_hold = blocks[:, 2 * i + 1]
            with np.errstate(divide="ignore"):
                dt = -np.log1p(-u_hold) / np.where(rate > 0.0, rate, 1.0)
            t = np.where(active, t + dt, t)
            active &= t < horizon
            if not active.any():
                break
            u_jump = blocks[:, 2 * i]
            nxt = self._targets[s, (u_jump[:, None] >= self._cum[s]).sum(axis=1)]
            s = np.where(active, nxt, s)
            TM[active, count[active]] = t[active]
            SM[active, count[active]] = s[active]
            count[active] += 1
        # finish the rare samples that outgrew the preallocated block; their
        # generators sit exactly past the block, so the stream continues as
        # the scalar path would
        out = []
        for b in range(B):
            k = int(count[b])
            times = TM[b, :k].tolist()
            states = SM[b, :k].tolist()
            if active[b]:
                tb, sb = self._run_scalar(UniformBlocks(rngs[b]), float(t[b]), int(s[b]), horizon)
                times.extend(tb)
                states.extend(sb)
            out.append(self._trace(times, states, horizon))
        return out

    def _trace(self, times, states, horizon) -> Trace:
        labels = [self._label_by_state[s] for s in states]
        tr = Trace.event(times, labels, horizon)
        tr.states = np.asarray(states, dtype=np.int64)
        return tr


def gillespie_sample(model: CtmcModel, seed, horizon: float) -> Trace:
    return model.sample(seed, horizon)
