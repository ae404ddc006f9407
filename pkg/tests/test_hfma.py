import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from spectra import UnsupportedParameters
from spectra.hfma import (
    Partition,
    a_constant,
    equivalence_report,
    gen_pochhammer,
    hfma_0f1_quadrature,
    hfma_0f1_series,
    hfma_series_layers,
    jack_at_identity,
    micro_via_hfma,
    partitions_of,
    scalar_0f1,
)
from spectra.microscopic import micro_p, micro_q

# number of partitions p(k), k = 0..10
PARTITION_COUNTS = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]


def brute_partitions(k, max_parts):
    """Sorted multisets of positive integers summing to k, by exhaustive search."""
    found = set()
    for n in range(0, min(k, max_parts) + 1):
        for combo in itertools.combinations_with_replacement(range(1, k + 1), n):
            if sum(combo) == k:
                found.add(tuple(sorted(combo, reverse=True)))
    return found


def test_partition_examples():
    assert partitions_of(0) == [()]
    assert partitions_of(3, 2) == [(3,), (2, 1)]
    assert len(partitions_of(6)) == 11
    assert [len(partitions_of(k)) for k in range(11)] == PARTITION_COUNTS


@given(st.integers(0, 9), st.integers(0, 9))
def test_partitions_match_brute_force(k, parts):
    got = partitions_of(k, parts)
    assert set(got) == brute_partitions(k, parts)
    assert len(got) == len(set(got))
    assert all(p.weight == k and len(p) <= parts for p in got)


@given(st.integers(1, 12))
def test_conjugate_is_involution(k):
    for p in partitions_of(k):
        assert p.conjugate().conjugate() == p
        assert p.conjugate().weight == k
        assert len(list(p.cells())) == k


def test_partition_validation():
    with pytest.raises(ValueError):
        Partition((1, 2))
    with pytest.raises(ValueError):
        Partition((2, 0))
    with pytest.raises(ValueError):
        partitions_of(-1)


def test_gen_pochhammer():
    assert gen_pochhammer(2.5, (), 1) == 1.0
    assert gen_pochhammer(2.5, (1,), 0.5) == 2.5
    assert gen_pochhammer(3, (2, 1), 2) == 30.0


@given(st.floats(-5, 5), st.integers(0, 8), st.sampled_from([0.5, 1.0, 2.0]))
def test_single_row_pochhammer_is_rising_factorial(a, k, beta):
    want = math.prod(a + j for j in range(k))
    assert gen_pochhammer(a, (k,) if k else (), beta) == pytest.approx(want, rel=1e-12, abs=1e-12)


def test_jack_known_values():
    # zonal polynomials at I_2: C_(2) = 8/3, C_(1,1) = 4/3
    assert jack_at_identity((2,), 2.0, 2) == pytest.approx(8 / 3)
    assert jack_at_identity((1, 1), 2.0, 2) == pytest.approx(4 / 3)
    # Schur case: C_(2)(I_2) = 3, C_(1,1)(I_2) = 1
    assert jack_at_identity((2,), 1.0, 2) == pytest.approx(3.0)
    assert jack_at_identity((1, 1), 1.0, 2) == pytest.approx(1.0)
    assert jack_at_identity((1, 1, 1), 1.0, 2) == 0.0


@settings(max_examples=40)
@given(st.integers(1, 7), st.integers(1, 4), st.sampled_from([0.5, 1.0, 2.0, 1 / 3]))
def test_jack_sum_is_trace_power(k, m, alpha):
    total = math.fsum(jack_at_identity(p, alpha, m) for p in partitions_of(k, m))
    assert total == pytest.approx(m ** k, rel=1e-11)


@given(st.floats(0.5, 6), st.floats(0, 30))
def test_scalar_0f1_matches_scipy(b, x):
    assert scalar_0f1(b, x) == pytest.approx(special.hyp0f1(b, x), rel=1e-12)


def test_quadrature_scalar_and_known():
    assert hfma_0f1_quadrature(2, 1, 0.0, 2) == 1.0
    assert hfma_0f1_quadrature(2, 1, 1.0, 1) == pytest.approx(special.iv(0, 2.0), rel=1e-12)
    for c, x in [(2, 0.7), (3, 4.0)]:
        assert hfma_0f1_quadrature(4, c, x, 1) == pytest.approx(special.hyp0f1(c, x), rel=1e-11)
    assert hfma_0f1_quadrature(2, 1, 0.25, 2) * math.exp(-0.25) == pytest.approx(micro_q(2, 2, 1.0), rel=1e-12)


def test_quadrature_errors():
    with pytest.raises(UnsupportedParameters, match="series"):
        hfma_0f1_quadrature(2, 1, 1.0, 4)
    with pytest.raises(ValueError):
        hfma_0f1_quadrature(2.5, 1, 1.0, 2)
    with pytest.raises(ValueError):
        hfma_0f1_quadrature(2, 1, -1.0, 2)


def test_series_scalar_limit():
    for alpha in (0.5, 1.0, 2.0):
        r = hfma_0f1_series(alpha, 2.0, 1.0, 1)
        assert r.converged
        assert r.value == pytest.approx(special.hyp0f1(2.0, 1.0), rel=1e-13)
    assert hfma_0f1_series(0.5, 2.0, 0.0, 3) == (1.0, 0.0, 0, True)


@pytest.mark.parametrize("x", [0.5, 2.0, 6.0])
def test_series_matches_quadrature(x):
    # beta = 1 ensemble: Jack parameter 1/2, lambda = 4
    for which_c, b in [(2, 4.0), (4, 6.0)]:
        quad = hfma_0f1_quadrature(4, which_c, x, 2)
        ser = hfma_0f1_series(0.5, b, x, 2, kmax=60)
        assert ser.converged
        assert ser.value == pytest.approx(quad, rel=1e-8)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.1, 5), st.integers(1, 3), st.sampled_from([0.5, 1.0, 2.0]))
def test_layers_homogeneous_and_monotone(x, m, alpha):
    # b above (m-1)/alpha keeps every (b)_kappa positive
    layers = hfma_series_layers(alpha, 7.5, x, m, 8)
    doubled = hfma_series_layers(alpha, 7.5, 2 * x, m, 8)
    for k, (a, b) in enumerate(zip(layers, doubled)):
        assert b == pytest.approx(2 ** k * a, rel=1e-12)
    assert all(v > 0 for v in layers)
    assert np.all(np.diff(np.cumsum(layers)) >= 0)


def test_series_pole():
    with pytest.raises(ZeroDivisionError):
        hfma_0f1_series(0.5, 3.0, 1.0, 3)


def test_series_reports_nonconvergence():
    r = hfma_0f1_series(1.0, 2.0, 40.0, 2, kmax=5)
    assert not r.converged and r.kmax == 5 and r.remainder > 0


def test_a_constant():
    # beta = 2, m = 0: A = 1/4 so that P = e^(-y/4)/4
    assert a_constant(0, 2) == pytest.approx(0.25)
    assert a_constant(0, 1) == pytest.approx(1 / 8)


@pytest.mark.parametrize("beta,nu", [(2, 0), (2, 2), (1, 1), (1, 3), (1, 5)])
@pytest.mark.parametrize("backend", ["quadrature", "series"])
def test_micro_via_hfma_matches_bessel(beta, nu, backend):
    for y in (0.5, 4.0, 16.0):
        assert micro_via_hfma(beta, nu, y, "Q", backend) == pytest.approx(micro_q(beta, nu, y), rel=1e-9, abs=1e-13)
        assert micro_via_hfma(beta, nu, y, "P", backend) == pytest.approx(micro_p(beta, nu, y), rel=1e-9, abs=1e-13)


def test_micro_via_hfma_errors():
    with pytest.raises(UnsupportedParameters):
        micro_via_hfma(1, 2, 1.0)
    with pytest.raises(ValueError):
        micro_via_hfma(2, 1, 1.0, "R")
    with pytest.raises(ValueError):
        micro_via_hfma(2, 1, 1.0, backend="spline")


def test_equivalence_report():
    rep = equivalence_report(2, 1, [0.5, 2.0, 8.0])
    assert len(rep.rows) == 3
    assert rep.max_diff < 1e-8
    assert set(rep.rows[0]) >= {"y", "q_hfma", "q_bessel", "p_hfma", "p_bessel"}
    assert equivalence_report(2, 1, []).max_diff == 0.0
