"""Discrete-event simulation of a two-stage queueing network.

Requests arrive at front servers (Poisson or Markov-modulated Poisson),
are served there, and move to the back server with the shortest queue among
those not at capacity (ties to the lowest index); when every back queue is
full the request is dropped. Queue length counts waiting plus in-service
requests. The trace labels ``q<i>`` (1-based) mark back queue i sitting at
its capacity; segments are emitted at label changes only.
"""

import math

import numpy as np

from ..semantics.trace import Trace
from .base import ConfigError, PusModel, UniformBlocks, as_seed_sequence

INF = math.inf


class ArrivalProcess:
    def start(self, blocks, t0):
        raise NotImplementedError


class Exponential(ArrivalProcess):
    def __init__(self, rate: float):
        if rate < 0.0:
            raise ConfigError("arrival rate must be non-negative")
        self.rate = float(rate)

    def make(self, blocks):
        return _ExpArrivals(self.rate, blocks)


class Mmpp(ArrivalProcess):
    """Poisson arrivals whose rate switches with a background Markov chain."""

    def __init__(self, arrival_rates, transition_rates, initial_mode: int = 0):
        self.arrival_rates = [float(r) for r in arrival_rates]
        Q = np.asarray(transition_rates, dtype=np.float64)
        if Q.shape != (len(self.arrival_rates), len(self.arrival_rates)):
            raise ConfigError("modulating matrix shape does not match the arrival rates")
        off = Q.copy()
        np.fill_diagonal(off, 0.0)
        if np.any(off < 0.0) or np.any(np.abs(Q.sum(axis=1)) > 1e-9):
            raise ConfigError("modulating matrix must have non-negative off-diagonal and zero row sums")
        if any(r < 0.0 for r in self.arrival_rates):
            raise ConfigError("arrival rates must be non-negative")
        self.Q = Q
        self.initial_mode = int(initial_mode)

    def make(self, blocks):
        return _MmppArrivals(self, blocks)


class _ExpArrivals:
    def __init__(self, rate, blocks):
        self.rate = rate
        self.blocks = blocks

    def first(self, t0):
        return t0 + self.blocks.exponential(self.rate) if self.rate > 0.0 else INF

    def next_after(self, t):
        return t + self.blocks.exponential(self.rate) if self.rate > 0.0 else INF


class _MmppArrivals:
    """Thinning-free MMPP: simulate mode switches as events; arrivals are
    exponential at the current mode's rate, re-drawn at each switch."""

    def __init__(self, cfg, blocks):
        self.cfg = cfg
        self.blocks = blocks
        self.mode = cfg.initial_mode

    def _switch_rate(self):
        return -self.cfg.Q[self.mode, self.mode]

    def _draw(self, t, rate):
        return t + self.blocks.exponential(rate) if rate > 0.0 else INF

    def first(self, t0):
        # event candidates are managed by the simulator through next_switch
        self.next_switch = self._draw(t0, self._switch_rate())
        return self._draw(t0, self.cfg.arrival_rates[self.mode])

    def next_after(self, t):
        return self._draw(t, self.cfg.arrival_rates[self.mode])

    def switch(self, t):
        """Advance the modulating chain at time t; returns a fresh arrival time."""
        Q = self.cfg.Q
        row = [(j, Q[self.mode, j]) for j in range(Q.shape[0]) if j != self.mode]
        total = sum(r for _, r in row)
        u = self.blocks.next() * total
        acc = 0.0
        for j, r in row:
            acc += r
            if u < acc or j == row[-1][0]:
                self.mode = j
                break
        self.next_switch = self._draw(t, self._switch_rate())
        return self._draw(t, self.cfg.arrival_rates[self.mode])


class FrontServer:
    def __init__(self, arrival: ArrivalProcess, service_rate: float, buffer: int):
        if service_rate <= 0.0:
            raise ConfigError("front service rate must be positive")
        if buffer < 1:
            raise ConfigError("front buffer must hold at least one request")
        self.arrival = arrival
        self.service_rate = float(service_rate)
        self.buffer = int(buffer)


class BackServer:
    def __init__(self, service_rate: float, buffer: int):
        if service_rate <= 0.0:
            raise ConfigError("back service rate must be positive")
        if buffer < 1:
            raise ConfigError("back buffer must hold at least one request")
        self.service_rate = float(service_rate)
        self.buffer = int(buffer)


class QueueModel(PusModel):
    def __init__(self, fronts, backs, regions=None):
        if not fronts or not backs:
            raise ConfigError("the network needs at least one front and one back server")
        self.fronts = list(fronts)
        self.backs = list(backs)
        self.regions = dict(regions or {})

    state_count = None

    @property
    def initial_states(self):
        return ["empty"]

    @property
    def labels(self):
        return frozenset(f"q{i + 1}" for i in range(len(self.backs)))

    def sample(self, seed, horizon: float) -> Trace:
        return self._simulate(seed, horizon, audit=None)

    def sample_with_audit(self, seed, horizon: float):
        audit = {"arrivals": 0, "front_drops": 0, "back_drops": 0,
                 "departures": 0, "conserved": True}
        trace = self._simulate(seed, horizon, audit=audit)
        return trace, audit

    def _simulate(self, seed, horizon: float, audit):
        if horizon <= 0.0:
            raise ValueError("horizon must be positive")
        rng = np.random.default_rng(as_seed_sequence(seed))
        blocks = UniformBlocks(rng)
        exp_draw = blocks.exponential
        nf, nb = len(self.fronts), len(self.backs)
        front_rates = [f.service_rate for f in self.fronts]
        back_rates = [b.service_rate for b in self.backs]
        front_caps = [f.buffer for f in self.fronts]
        caps = [b.buffer for b in self.backs]

        arrivals = [f.arrival.make(blocks) for f in self.fronts]
        next_arrival = [arrivals[i].first(0.0) for i in range(nf)]
        next_switch = [getattr(arrivals[i], "next_switch", INF) for i in range(nf)]
        front_q = [0] * nf
        next_front = [INF] * nf
        back_q = [0] * nb
        next_back = [INF] * nb

        times = [0.0]
        labelsets = [frozenset()]
        at_cap = [False] * nb

        def emit(t, j):
            full = back_q[j] == caps[j]
            if full != at_cap[j]:
                at_cap[j] = full
                current = frozenset(f"q{i + 1}" for i in range(nb) if at_cap[i])
                times.append(t)
                labelsets.append(current)

        while True:
            t = min(min(next_arrival), min(next_front), min(next_back), min(next_switch))
            if t >= horizon:
                break
            if t in next_arrival:
                i = next_arrival.index(t)
                if audit is not None:
                    audit["arrivals"] += 1
                if front_q[i] < front_caps[i]:
                    front_q[i] += 1
                    if next_front[i] == INF:
                        next_front[i] = t + exp_draw(front_rates[i])
                elif audit is not None:
                    audit["front_drops"] += 1
                next_arrival[i] = arrivals[i].next_after(t)
            elif t in next_front:
                i = next_front.index(t)
                front_q[i] -= 1
                next_front[i] = t + exp_draw(front_rates[i]) if front_q[i] > 0 else INF
                target = -1
                best = None
                for j in range(nb):
                    if back_q[j] < caps[j] and (best is None or back_q[j] < best):
                        best = back_q[j]
                        target = j
                if target >= 0:
                    back_q[target] += 1
                    if next_back[target] == INF:
                        next_back[target] = t + exp_draw(back_rates[target])
                    emit(t, target)
                elif audit is not None:
                    audit["back_drops"] += 1
            elif t in next_back:
                j = next_back.index(t)
                back_q[j] -= 1
                if audit is not None:
                    audit["departures"] += 1
                next_back[j] = t + exp_draw(back_rates[j]) if back_q[j] > 0 else INF
                emit(t, j)
            else:
                i = next_switch.index(t)
                next_arrival[i] = arrivals[i].switch(t)
                next_switch[i] = arrivals[i].next_switch
            if audit is not None:
                held = sum(front_q) + sum(back_q)
                moved = (audit["arrivals"] - audit["front_drops"]
                         - audit["back_drops"] - audit["departures"])
                if moved != held:
                    audit["conserved"] = False

        return Trace.event(times, labelsets, horizon)


def queue_sample(model: QueueModel, seed, horizon: float) -> Trace:
    return model.sample(seed, horizon)
