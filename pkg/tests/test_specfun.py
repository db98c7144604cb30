import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from magcasimir.specfun import polylog

# 200-term partial sum of sum 0.5**n / n**3, math.fsum
LI3_HALF_SERIES = 0.5372131936080402


def naive_series(s, x, cutoff=1e-17):
    terms = []
    n = 1
    while True:
        t = x**n / n**s
        if abs(t) < cutoff:
            break
        terms.append(t)
        n += 1
    return math.fsum(terms)


@pytest.mark.parametrize("s", [3, 4])
def test_zero(s):
    assert polylog(s, 0.0) == 0.0


def test_endpoint_constants():
    assert polylog(4, 1.0) == pytest.approx(math.pi**4 / 90, abs=1e-15)
    assert polylog(4, -1.0) == pytest.approx(-7 * math.pi**4 / 720, abs=1e-15)
    assert polylog(3, 1.0) == pytest.approx(1.2020569031595942, abs=1e-15)
    assert polylog(3, -1.0) == pytest.approx(-0.75 * 1.2020569031595942, abs=1e-15)


def test_li3_half_against_partial_sum():
    assert abs(polylog(3, 0.5) - LI3_HALF_SERIES) < 1e-14


@pytest.mark.parametrize("s", [3, 4])
@pytest.mark.parametrize("bad", [1.0000001, -1.5, math.nan, math.inf])
def test_domain_error(s, bad):
    with pytest.raises(ValueError):
        polylog(s, bad)


@pytest.mark.parametrize("s", [2, 5, 3.5])
def test_unsupported_order(s):
    with pytest.raises(ValueError):
        polylog(s, 0.1)


def test_array_and_scalar_forms():
    xs = np.array([[-0.3, 0.2], [0.97, -0.99]])
    out = polylog(4, xs)
    assert out.shape == xs.shape
    for x, y in zip(xs.ravel(), out.ravel()):
        assert polylog(4, float(x)) == pytest.approx(y, abs=1e-16)
    assert isinstance(polylog(3, 0.1), float)


@pytest.mark.parametrize("s", [3, 4])
def test_series_oracle_random(s):
    rng = np.random.default_rng(1234 + s)
    xs = rng.uniform(-0.99, 0.99, 100)
    got = polylog(s, xs)
    for x, y in zip(xs, got):
        assert abs(y - naive_series(s, float(x))) < 1e-13


@pytest.mark.parametrize("s", [3, 4])
def test_high_precision_near_endpoints(s):
    # the accelerated branches are the ones the conductor limits exercise
    mpmath.mp.dps = 30
    xs = np.concatenate([1 - np.logspace(-15, -1.3, 40), -1 + np.logspace(-15, -1.3, 40), [0.95, -0.95]])
    got = polylog(s, xs)
    for x, y in zip(xs, got):
        assert abs(y - float(mpmath.polylog(s, float(x)))) < 1e-14


@pytest.mark.parametrize("s", [3, 4])
def test_monotone_on_grid(s):
    xs = np.linspace(-1.0, 1.0, 1000)
    assert np.all(np.diff(polylog(s, xs)) > 0)


@pytest.mark.parametrize("s", [3, 4])
@settings(max_examples=200, deadline=None)
@given(x=st.floats(-1.0, 1.0))
def test_bounds(s, x):
    v = polylog(s, x)
    assert abs(v) <= polylog(s, abs(x)) + 1e-15
    assert abs(v) <= polylog(s, 1.0) + 1e-15
