import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from spectra.bessel import (
    bessel_i,
    bessel_i_closed,
    bessel_i_series,
    bessel_i_trapezoid,
    bessel_ie,
    order_kind,
)


def test_reference_values():
    assert bessel_i(0, 0.0) == 1.0
    assert bessel_i(3, 0.0) == 0.0
    assert bessel_i(1, 1.0) == pytest.approx(0.5651591039924851, rel=1e-14)
    assert bessel_i(-0.5, 1.0) == pytest.approx(math.sqrt(2 / math.pi) * math.cosh(1.0), rel=1e-14)
    assert bessel_i(0.5, 1.0, "closed") == pytest.approx(math.sqrt(2 / math.pi) * math.sinh(1.0), rel=1e-14)


def test_order_kind():
    assert order_kind(3) == "integer"
    assert order_kind(-2.5) == "half"
    for bad in (1 / 3, 0.25, "x"):
        with pytest.raises((ValueError, TypeError)):
            order_kind(bad)


@given(st.integers(0, 6), st.floats(1e-250, 1e-10))
def test_tiny_argument_leading_term(n, z):
    # scipy underflows here; the first series term is exact to double precision
    lead = math.exp(n * math.log(z / 2) - math.lgamma(n + 1))
    assert bessel_i_series(n, z) == pytest.approx(lead, rel=1e-15)


def test_subnormal_argument():
    assert bessel_i_series(0, 5e-324) == 1.0
    assert bessel_i_series(2, 5e-324) == 0.0


def test_argument_and_backend_errors():
    with pytest.raises(ValueError):
        bessel_i(0, -1.0)
    with pytest.raises(ValueError):
        bessel_i(0, 1.0, "magic")
    with pytest.raises(ValueError):
        bessel_i_trapezoid(0.5, 1.0)
    with pytest.raises(ValueError):
        bessel_i_closed(2, 1.0)


@given(st.integers(-12, 12), st.just(0.0) | st.floats(1e-8, 60))
def test_series_matches_scipy(n, z):
    assert bessel_i_series(n, z) == pytest.approx(special.iv(n, z), rel=1e-13, abs=1e-300)


@given(st.integers(-8, 8).map(lambda k: k + 0.5), st.floats(0.01, 40))
def test_half_integer_series_matches_scipy(order, z):
    assert bessel_i_series(order, z) == pytest.approx(special.iv(order, z), rel=1e-12)


@given(st.integers(0, 10), st.floats(0, 60))
def test_integer_symmetry(n, z):
    assert bessel_i_series(-n, z) == bessel_i_series(n, z)


@settings(max_examples=60)
@given(st.integers(0, 8), st.floats(0.1, 40))
def test_trapezoid_agrees_relative_to_growth(n, z):
    # the trapezoid error is measured against e^z
    assert abs(bessel_i_trapezoid(n, z) - bessel_i_series(n, z)) <= 1e-13 * math.exp(z)


@given(st.integers(0, 5), st.floats(1.0, 30))
def test_closed_form_half_integers(n, z):
    for order in (n + 0.5, -n - 0.5):
        assert bessel_i_closed(order, z) == pytest.approx(bessel_i_series(order, z), rel=1e-10)


@given(st.integers(1, 10), st.floats(0.1, 50))
def test_recurrence(n, z):
    lhs = bessel_i_series(n - 1, z) - bessel_i_series(n + 1, z)
    assert lhs == pytest.approx(2 * n / z * bessel_i_series(n, z), rel=1e-11)


@pytest.mark.parametrize("z", [0.5, 10.0, 599.0, 601.0, 2000.0, 1e5])
@pytest.mark.parametrize("order", [0, 1, 4, 2.5])
def test_scaled_matches_scipy(order, z):
    assert bessel_ie(order, z) == pytest.approx(special.ive(order, z), rel=1e-13)
