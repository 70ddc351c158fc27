import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from definetti.combinatorics import hypergeometric_pmf, log_binomial, log_factorials


def test_log_binomial_examples():
    assert log_binomial(4, 2) == pytest.approx(math.log(6), abs=1e-15)
    assert log_binomial(4, -1) == -math.inf
    assert log_binomial(4, 5) == -math.inf
    # exact big-integer reference
    assert log_binomial(1000, 500) == pytest.approx(math.log(math.comb(1000, 500)), abs=1e-11)
    assert log_binomial(1000, 500) == pytest.approx(689.4672615678512, abs=1e-11)


def test_log_binomial_rejects_negative_a():
    with pytest.raises(ValueError):
        log_binomial(-1, 0)


@given(st.integers(0, 3000), st.data())
def test_log_binomial_matches_exact(a, data):
    b = data.draw(st.integers(0, a))
    # differencing three table entries of size ~log(a!) costs a few ulp of that size
    tol = 4 * math.ulp(log_factorials(a)[a])
    assert abs(log_binomial(a, b) - math.log(math.comb(a, b))) <= tol


def test_log_factorial_table_grows_and_stays_readonly():
    t = log_factorials(10)
    assert not t.flags.writeable
    big = log_factorials(10_000)
    assert big.shape[0] > 10_000
    assert big[10_000] == pytest.approx(math.lgamma(10_001), rel=1e-15)
    np.testing.assert_array_equal(big[: t.shape[0]], t)


@pytest.mark.parametrize("j,n,ell,m,expected", [
    (1, 4, 2, 1, 0.5),
    (0, 4, 2, 2, 1 / 6),
    (3, 4, 2, 2, 0.0),
])
def test_hypergeometric_examples(j, n, ell, m, expected):
    assert hypergeometric_pmf(j, n, ell, m) == pytest.approx(expected, abs=1e-15)


@given(st.integers(1, 60), st.data())
def test_hypergeometric_sums_to_one(n, data):
    ell = data.draw(st.integers(0, n))
    m = data.draw(st.integers(0, n))
    total = math.fsum(hypergeometric_pmf(j, n, ell, m) for j in range(m + 1))
    assert total == pytest.approx(1.0, abs=1e-12)


def test_hypergeometric_validates_ranges():
    with pytest.raises(ValueError):
        hypergeometric_pmf(0, 4, 5, 1)
    with pytest.raises(ValueError):
        hypergeometric_pmf(0, 4, 1, 5)
