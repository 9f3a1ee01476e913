"""Finite-horizon sampled paths.

A trace is a piecewise-constant record of which labels hold over time, with
optional named real values alongside. Two kinds:

* ``event``: segments start at strictly increasing event times (first at 0),
  each carrying a label set; the last segment extends to the horizon.
* ``grid``: fixed-step sampling; labels are per-label boolean arrays over the
  grid, values are float arrays. Start times are implicit multiples of dt.
"""

import json

import numpy as np


class Trace:
    EVENT = "event"
    GRID = "grid"

    def __init__(self, kind, horizon, times=None, labelsets=None, values=None,
                 dt=None, label_arrays=None, value_arrays=None):
        self.kind = kind
        self.horizon = float(horizon)
        if kind == Trace.EVENT:
            self.times = np.asarray(times, dtype=np.float64)
            self.labelsets = list(labelsets)
            self.values = list(values) if values is not None else [{} for _ in self.labelsets]
            self._validate_event()
        elif kind == Trace.GRID:
            self.dt = float(dt)
            self.label_arrays = {k: np.asarray(v, dtype=bool) for k, v in label_arrays.items()}
            self.value_arrays = {k: np.asarray(v, dtype=np.float64)
                                 for k, v in (value_arrays or {}).items()}
            self._n = len(next(iter(self.label_arrays.values()))) if self.label_arrays else 0
            self._validate_grid()
        else:
            raise ValueError(f"unknown trace kind {kind!r}")

    # -- constructors -------------------------------------------------------
    @classmethod
    def event(cls, times, labelsets, horizon, values=None):
        return cls(cls.EVENT, horizon, times=times, labelsets=labelsets, values=values)

    @classmethod
    def grid(cls, dt, label_arrays, horizon, value_arrays=None):
        return cls(cls.GRID, horizon, dt=dt, label_arrays=label_arrays, value_arrays=value_arrays)

    # -- validation ---------------------------------------------------------
    def _validate_event(self):
        if len(self.times) != len(self.labelsets):
            raise ValueError("times and label sets differ in length")
        if len(self.times) == 0 or self.times[0] != 0.0:
            raise ValueError("first segment must start at time 0")
        if np.any(np.diff(self.times) <= 0.0):
            raise ValueError("segment start times must be strictly increasing")
        if self.times[-1] >= self.horizon:
            raise ValueError("segment start times must precede the horizon")
        self.labelsets = [frozenset(s) for s in self.labelsets]

    def _validate_grid(self):
        if self.dt <= 0.0:
            raise ValueError("grid step must be positive")
        for k, arr in self.label_arrays.items():
            if len(arr) != self._n:
                raise ValueError(f"label array {k!r} has inconsistent length")
        for k, arr in self.value_arrays.items():
            if len(arr) != self._n:
                raise ValueError(f"value array {k!r} has inconsistent length")
        if self._n == 0:
            raise ValueError("grid trace must contain at least one point")
        if (self._n - 1) * self.dt >= self.horizon:
            raise ValueError("grid extends past the horizon")

    # -- queries -------------------------------------------------------------
    @property
    def n_segments(self):
        if self.kind == Trace.EVENT:
            return len(self.times)
        return self._n

    def start_times(self):
        if self.kind == Trace.EVENT:
            return self.times
        return np.arange(self._n) * self.dt

    def labels_at(self, t):
        if not (0.0 <= t < self.horizon):
            raise ValueError(f"time {t} outside [0, horizon)")
        if self.kind == Trace.EVENT:
            idx = int(np.searchsorted(self.times, t, side="right")) - 1
            return self.labelsets[idx]
        idx = min(int(t / self.dt + 1e-9), self._n - 1)
        return frozenset(k for k, arr in self.label_arrays.items() if arr[idx])

    def label_mask(self, name):
        """Per-segment boolean array for one label (event traces, cached)."""
        cache = getattr(self, "_mask_cache", None)
        if cache is None:
            cache = {}
            object.__setattr__(self, "_mask_cache", cache)
        mask = cache.get(name)
        if mask is None:
            mask = np.fromiter((name in s for s in self.labelsets), dtype=bool,
                               count=len(self.labelsets))
            cache[name] = mask
        return mask

    def segments(self):
        """Normalized view: (start_time, labels, values) per segment."""
        if self.kind == Trace.EVENT:
            for t, labels, vals in zip(self.times, self.labelsets, self.values):
                yield float(t), labels, dict(vals)
        else:
            for i in range(self._n):
                labels = frozenset(k for k, arr in self.label_arrays.items() if arr[i])
                vals = {k: float(arr[i]) for k, arr in self.value_arrays.items()}
                yield i * self.dt, labels, vals

    # -- export ---------------------------------------------------------------
    def dump(self) -> str:
        """Debug format: one line per segment."""
        lines = []
        for t, labels, vals in self.segments():
            labeltxt = "{" + ",".join(sorted(labels)) + "}"
            valtxt = "{" + ",".join(f"{k}:{v:.6g}" for k, v in sorted(vals.items())) + "}"
            lines.append(f"t={t:.6g} labels={labeltxt} values={valtxt}")
        return "\n".join(lines)

    def to_json(self) -> str:
        doc = {
            "kind": self.kind,
            "horizon": self.horizon,
            "segments": [
                {"t": t, "labels": sorted(labels), "values": vals}
                for t, labels, vals in self.segments()
            ],
        }
        if self.kind == Trace.GRID:
            doc["dt"] = self.dt
        return json.dumps(doc, indent=2)

    # -- comparison (tests) ----------------------------------------------------
    def equals(self, other) -> bool:
        if self.kind != other.kind or self.horizon != other.horizon:
            return False
        if self.kind == Trace.EVENT:
            return (np.array_equal(self.times, other.times)
                    and self.labelsets == other.labelsets
                    and self.values == other.values)
        if self.dt != other.dt or set(self.label_arrays) != set(other.label_arrays):
            return False
        return (all(np.array_equal(self.label_arrays[k], other.label_arrays[k])
                    for k in self.label_arrays)
                and set(self.value_arrays) == set(other.value_arrays)
                and all(np.array_equal(self.value_arrays[k], other.value_arrays[k])
                        for k in self.value_arrays))


class PathAssignment:
    """Binding of path variables to traces, with a time shift."""

    def __init__(self, bindings: dict, base_shift: float = 0.0):
        self.bindings = dict(bindings)
        self.base_shift = float(base_shift)
        if self.bindings:
            h = min(tr.horizon for tr in self.bindings.values())
            if h < self.base_shift:
                raise ValueError("shift exceeds the common horizon of the bound traces")

    def shift(self, t: float) -> "PathAssignment":
        return PathAssignment(self.bindings, self.base_shift + t)

    def common_horizon(self) -> float:
        return min(tr.horizon for tr in self.bindings.values())

    def __getitem__(self, var):
        return self.bindings[var]

    def __contains__(self, var):
        return var in self.bindings
