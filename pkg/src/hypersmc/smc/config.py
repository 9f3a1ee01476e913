"""Run configuration and verdicts for the verification engines."""

from dataclasses import dataclass, field

TRUE, FALSE, UNDECIDED = "true", "false", "undecided"

COUNT_FALSE = "count_false"
COUNT_ERROR = "error"


@dataclass
class SmcConfig:
    alpha: float
    horizon: float
    seed: int = 0
    batch: int = 10
    max_samples: int = 1_000_000
    truncation_policy: str = COUNT_FALSE
    trace_stats: bool = False

    def __post_init__(self):
        if not (0.0 < self.alpha < 1.0):
            raise ValueError(f"significance must be in (0,1), got {self.alpha}")
        if self.batch < 1:
            raise ValueError("batch size must be at least 1")
        if self.max_samples < self.batch:
            raise ValueError("sample cap must be at least one batch")
        if self.horizon <= 0.0:
            raise ValueError("horizon must be positive")
        if self.truncation_policy not in (COUNT_FALSE, COUNT_ERROR):
            raise ValueError(f"unknown truncation policy {self.truncation_policy!r}")


@dataclass
class Verdict:
    outcome: str
    alpha: float
    alpha_desired: float
    algorithm: str
    samples: dict = field(default_factory=dict)
    truncated: int = 0
    wall_time: float = 0.0
    iterations: list | None = None

    def __post_init__(self):
        if self.outcome in (TRUE, FALSE):
            assert self.alpha <= self.alpha_desired + 1e-15, \
                f"decided verdict must meet the requested significance ({self.alpha} > {self.alpha_desired})"

    @property
    def total_tuples(self) -> int:
        return sum(self.samples.values())

    def as_dict(self, with_iterations=False):
        doc = {
            "verdict": self.outcome,
            "alpha": self.alpha,
            "alpha_desired": self.alpha_desired,
            "algorithm": self.algorithm,
            "samples_used": dict(sorted(self.samples.items())),
            "total_tuples": self.total_tuples,
            "truncated_evaluations": self.truncated,
            "wall_time_s": self.wall_time,
        }
        if with_iterations:
            doc["iteration_log"] = self.iterations or []
        return doc
