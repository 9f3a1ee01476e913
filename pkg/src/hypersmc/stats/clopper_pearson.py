"""Clopper-Pearson significance levels for binomial count statistics.

``cp_significance(a, b, T, N)`` bounds the probability that the true success
probability lies outside [a, b] when T successes were seen in N trials. The
T=0 and T=N cases use the exact closed forms; the general case uses the
one-sided Beta CDF constructions with shape parameters (T+1, N-T) for the
upper edge and (T, N-T+1) for the lower edge.
"""

from dataclasses import dataclass

from .beta import reg_inc_beta


@dataclass(frozen=True)
class CountStat:
    """Successes out of trials for one estimated probability."""

    successes: int
    trials: int

    def __post_init__(self):
        if not (0 <= self.successes <= self.trials):
            raise ValueError(f"need 0 <= successes <= trials, got {self.successes}/{self.trials}")

    @property
    def ratio(self) -> float:
        return self.successes / self.trials


def cp_significance(a: float, b: float, T: int, N: int) -> float:
    """Significance level of the claim p in [a, b] given T successes in N trials."""
    if not (0.0 <= a <= b <= 1.0):
        raise ValueError(f"need 0 <= a <= b <= 1, got a={a}, b={b}")
    if N < 1 or not (0 <= T <= N):
        raise ValueError(f"need N >= 1 and 0 <= T <= N, got T={T}, N={N}")
    if T == 0:
        inside = (1.0 - a) ** N - (1.0 - b) ** N
    elif T == N:
        inside = b ** N - a ** N
    else:
        inside = reg_inc_beta(b, T + 1.0, N - T) - reg_inc_beta(a, T, N - T + 1.0)
    return min(1.0, max(0.0, 1.0 - inside))


def cp_for_threshold(T: int, N: int, p: float) -> tuple[bool, float]:
    """Assert the side of threshold p the true probability lies on.

    Returns (assertion, alpha) where assertion is True when the empirical
    ratio supports "p_true < p" (interval [0, p]) and False when it supports
    "p_true > p" (interval [p, 1]). A ratio exactly at p carries no evidence
    and reports alpha = 1 so callers keep sampling.
    """
    if N < 1 or not (0 <= T <= N):
        raise ValueError(f"need N >= 1 and 0 <= T <= N, got T={T}, N={N}")
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"threshold must lie in [0, 1], got {p}")
    ratio = T / N
    if ratio < p:
        return True, cp_significance(0.0, p, T, N)
    if ratio > p:
        return False, cp_significance(p, 1.0, T, N)
    return False, 1.0


def joint_significance(boxes, stats) -> float:
    """Compose per-coordinate CP levels for a product box.

    The claim "all coordinates lie in their intervals" fails with probability
    at most 1 - prod_i (1 - alpha_i).
    """
    boxes = list(boxes)
    stats = list(stats)
    if len(boxes) != len(stats):
        raise ValueError(f"got {len(boxes)} boxes but {len(stats)} count statistics")
    keep = 1.0
    for (a, b), st in zip(boxes, stats):
        keep *= 1.0 - cp_significance(a, b, st.successes, st.trials)
    return min(1.0, max(0.0, 1.0 - keep))
