import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypersmc.stats import binom_cdf, reg_inc_beta


def adaptive_simpson(f, a, b, tol):
    def simpson(lo, hi):
        mid = (lo + hi) / 2.0
        return (hi - lo) / 6.0 * (f(lo) + 4.0 * f(mid) + f(hi)), mid

    def recurse(lo, hi, whole, tol, depth):
        mid = (lo + hi) / 2.0
        left, _ = simpson(lo, mid)
        right, _ = simpson(mid, hi)
        if depth > 50 or abs(left + right - whole) < 15.0 * tol:
            return left + right + (left + right - whole) / 15.0
        return (recurse(lo, mid, left, tol / 2.0, depth + 1)
                + recurse(mid, hi, right, tol / 2.0, depth + 1))

    whole, _ = simpson(a, b)
    return recurse(a, b, whole, tol, 0)


def beta_cdf_quadrature(x, a, b):
    """Independent route: adaptive Simpson of the Beta density. The endpoint
    singularity for a < 1 is removed by the substitution u = t^a."""
    if x > 0.5:
        return 1.0 - beta_cdf_quadrature(1.0 - x, b, a)
    log_norm = math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)

    def integrand(u):
        # t = u^(1/a); dt = u^(1/a-1)/a du; t^(a-1) dt = du / a
        t = u ** (1.0 / a)
        return math.exp(log_norm) * (1.0 - t) ** (b - 1.0) / a

    return adaptive_simpson(integrand, 0.0, x ** a, 1e-12)


def test_uniform_cdf():
    assert reg_inc_beta(0.5, 1.0, 1.0) == pytest.approx(0.5, abs=1e-14)


def test_closed_form_one_n():
    # I_x(1, n) = 1 - (1-x)^n
    assert reg_inc_beta(0.3, 1.0, 7.0) == pytest.approx(1.0 - 0.7 ** 7, abs=1e-13)


def test_symmetric_half():
    assert reg_inc_beta(0.5, 3.0, 3.0) == pytest.approx(0.5, abs=1e-13)


def test_endpoints_and_domain():
    assert reg_inc_beta(0.0, 2.0, 5.0) == 0.0
    assert reg_inc_beta(1.0, 2.0, 5.0) == 1.0
    with pytest.raises(ValueError):
        reg_inc_beta(0.5, -1.0, 2.0)
    with pytest.raises(ValueError):
        reg_inc_beta(1.5, 1.0, 2.0)


def test_against_quadrature():
    rng = np.random.default_rng(1234)
    for _ in range(100):
        a = rng.uniform(0.5, 20.0)
        b = rng.uniform(0.5, 20.0)
        x = rng.uniform(0.01, 0.99)
        assert reg_inc_beta(x, a, b) == pytest.approx(
            beta_cdf_quadrature(x, a, b), abs=1e-9), (x, a, b)


@given(st.floats(0.0, 1.0), st.floats(0.5, 30.0), st.floats(0.5, 30.0))
@settings(max_examples=150, deadline=None)
def test_range_and_monotone(x, a, b):
    v = reg_inc_beta(x, a, b)
    assert 0.0 <= v <= 1.0
    if x <= 0.98:
        assert reg_inc_beta(min(1.0, x + 0.02), a, b) >= v - 1e-12


def test_binom_reference():
    assert binom_cdf(5, 10, 0.5) == pytest.approx(0.623046875, abs=1e-12)


def test_binom_edges():
    assert binom_cdf(10, 10, 0.37) == 1.0
    assert binom_cdf(-1, 10, 0.37) == 0.0
    assert binom_cdf(0, 12, 0.2) == pytest.approx(0.8 ** 12, abs=1e-13)
    assert binom_cdf(3, 7, 0.0) == 1.0
    assert binom_cdf(3, 7, 1.0) == 0.0


@given(st.integers(1, 60), st.integers(0, 60), st.floats(0.01, 0.99))
@settings(max_examples=150, deadline=None)
def test_binom_matches_pmf_sum(n, k, p):
    k = min(k, n)
    total = 0.0
    for i in range(0, k + 1):
        total += math.comb(n, i) * p ** i * (1.0 - p) ** (n - i)
    assert binom_cdf(k, n, p) == pytest.approx(total, abs=1e-12)
