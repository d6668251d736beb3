import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from gapmoments.errors import DomainError
from gapmoments.geometry import SQRT_HALF, Method, MomentQuery, SetKind
from gapmoments.moments import (
    e2_even_moment,
    e2_odd_moment_hyp,
    e2_odd_moment_series,
    e2_odd_term,
    e4_even_moment,
    e4_odd_limit,
    e4_odd_moment,
    e4_odd_moment_prepfaff,
    full_range_moment,
    half_range_moment,
    half_range_moment_pochhammer,
    moment,
)
from gapmoments.quadrature import moment_by_quadrature
from gapmoments.specfun import gauss_2f1, pochhammer

MUS = (-0.25, 0.0, 0.5, 1.0, 2.5)
B_GRID = (0.72, 0.8, 0.9, 0.95)
E4_ODD_0_0_08 = 0.04 * 2 * math.asin(0.96) / 0.96


# --- classical families -------------------------------------------------------


def test_full_range_examples():
    assert full_range_moment(0, 0.0).value == pytest.approx(math.pi, rel=1e-15)
    assert full_range_moment(2, 0.0).value == pytest.approx(math.pi / 2, rel=1e-15)
    assert full_range_moment(3, 0.7).value == 0.0
    assert full_range_moment(4, 0.0).value == pytest.approx(3 * math.pi / 8, rel=1e-15)


def test_half_range_examples():
    assert half_range_moment(1, 0.0).value == pytest.approx(1.0, rel=1e-15)
    assert half_range_moment(0, 0.5).value == pytest.approx(1.0, rel=1e-15)
    assert half_range_moment(4, 0.0).value == pytest.approx(3 * math.pi / 16, rel=1e-15)
    assert half_range_moment(0, 0.0).value == pytest.approx(math.pi / 2, rel=1e-15)


@pytest.mark.parametrize("n", range(12))
@pytest.mark.parametrize("mu", MUS)
def test_half_range_two_routes_agree(n, mu):
    a = half_range_moment(n, mu).value
    b = half_range_moment_pochhammer(n, mu).value
    assert a == pytest.approx(b, rel=1e-14)


@pytest.mark.parametrize("n", range(7))
@pytest.mark.parametrize("mu", MUS)
def test_full_range_is_twice_half_range_for_even_n(n, mu):
    expect = 2 * half_range_moment(n, mu).value if n % 2 == 0 else 0.0
    assert full_range_moment(n, mu).value == pytest.approx(expect, rel=1e-14)


def test_large_orders_do_not_overflow():
    v = full_range_moment(100, 20.0).value
    assert math.isfinite(v) and v > 0
    assert math.isfinite(e4_odd_limit(50, 20.0))


def test_bad_order_rejected():
    with pytest.raises(DomainError):
        full_range_moment(-1, 0.0)
    with pytest.raises(DomainError):
        half_range_moment(2, -0.6)


# --- even gap moments ---------------------------------------------------------


def test_even_examples():
    assert e2_even_moment(0, 0.0).value == pytest.approx(math.pi, rel=1e-15)
    assert e2_even_moment(1, 0.5).value == pytest.approx(2 / 3, rel=1e-15)
    assert e4_even_moment(0, 0.0).value == pytest.approx(math.pi, rel=1e-15)
    assert e4_even_moment(2, 0.0).value == pytest.approx(3 * math.pi / 8, rel=1e-15)


def test_even_examples_against_quadrature():
    q = MomentQuery(SetKind.E2, 2, 0.5, 0.4)
    assert moment_by_quadrature(q).value == pytest.approx(2 / 3, rel=1e-11)
    q = MomentQuery(SetKind.E4, 4, 0.0, 0.8)
    assert moment_by_quadrature(q).value == pytest.approx(3 * math.pi / 8, rel=1e-11)


@pytest.mark.parametrize("mu", MUS)
def test_e4_even_independent_of_b(mu):
    for k in range(5):
        ref = e4_even_moment(k, mu).value
        vals = [moment_by_quadrature(MomentQuery(SetKind.E4, 2 * k, mu, b)).value for b in B_GRID]
        assert max(vals) - min(vals) <= 1e-8
        for v in vals:
            assert abs(v - ref) <= 1e-8


@given(st.integers(min_value=0, max_value=30), st.floats(min_value=-0.49, max_value=20.0))
def test_even_moments_positive(n, mu):
    assert e4_even_moment(n, mu).value > 0
    assert e2_even_moment(n, mu).value > 0


# --- E2 odd moments ----------------------------------------------------------


def test_e2_odd_examples():
    expect = 2 * math.pi / (3 * math.sqrt(3))
    assert e2_odd_moment_hyp(0, 0.0, 0.5).value == pytest.approx(1.2091995761561452, rel=1e-14)
    assert expect == pytest.approx(1.2091995761561452, rel=1e-15)
    assert e2_odd_moment_hyp(3, 0.7, 0.0).value == 0.0
    assert e2_odd_moment_series(3, 0.7, 0.0).value == 0.0
    assert abs(e2_odd_moment_series(0, 0.0, 0.5, 1e-12).value - 1.2091995761561452) <= 1e-12
    a = e2_odd_moment_series(2, 1.0, 0.3, 1e-12).value
    assert a == pytest.approx(e2_odd_moment_hyp(2, 1.0, 0.3).value, abs=1e-11)


def test_e2_odd_against_quadrature():
    q = MomentQuery(SetKind.E2, 1, 0.0, 0.5)
    assert moment_by_quadrature(q).value == pytest.approx(1.2091995761561452, rel=1e-12)


def test_e2_odd_series_terms_vanish_for_small_even_k():
    # the Gamma ratio reads as the polynomial (1 - k/2)_n, which is 0 for even 2 <= k <= 2n
    for n in range(1, 5):
        for k in range(2, 2 * n + 1, 2):
            assert e2_odd_term(k, n, 0.5) == 0.0
        assert e2_odd_term(2 * n + 2, n, 0.5) != 0.0


def test_e2_odd_term_values():
    # k = 1: (1/2)_n * Gamma(mu + 1/2) / Gamma(1)
    for n, mu in itertools.product(range(4), (0.0, 1.5)):
        expect = pochhammer(0.5, n) * math.gamma(mu + 0.5)
        assert e2_odd_term(1, n, mu) == pytest.approx(expect, rel=1e-14)


@pytest.mark.parametrize("n", range(7))
@pytest.mark.parametrize("mu", MUS)
def test_e2_series_matches_hypergeometric(n, mu):
    """The series alternates with terms far larger than the sum as b -> 1, so
    1e-9 agreement is asserted wherever its own rounding bound allows it; in the
    few remaining cells the deviation must stay inside the reported error."""
    checked_tight = 0
    for i in range(20):
        b = 0.95 * i / 19
        s = e2_odd_moment_series(n, mu, b)
        h = e2_odd_moment_hyp(n, mu, b)
        diff = abs(s.value - h.value)
        if s.error_estimate <= 1e-10:
            assert diff <= 1e-9
            checked_tight += 1
        else:
            assert diff <= s.error_estimate
    assert checked_tight >= 15


def test_e2_series_fifty_point_grid():
    for i in range(50):
        b = 0.95 * i / 49
        s = e2_odd_moment_series(0, 0.0, b).value
        assert abs(s - e2_odd_moment_hyp(0, 0.0, b).value) <= 1e-9


# --- E4 odd moments ----------------------------------------------------------


def test_e4_odd_example():
    assert e4_odd_moment(0, 0.0, 0.8).value == pytest.approx(E4_ODD_0_0_08, rel=1e-14)
    assert e4_odd_moment(0, 0.0, 0.8).value == pytest.approx(0.10725018479888073, rel=1e-14)


def test_e4_odd_second_parameter_is_pinned_by_quadrature():
    """Only mu + 1/2 as the second upper parameter reproduces the integral."""
    quad = moment_by_quadrature(MomentQuery(SetKind.E4, 1, 0.0, 0.8)).value
    with_half = 0.04 * 2 * gauss_2f1(0.5, 0.5, 1.5, 0.9216)
    with_one = 0.04 * 2 * gauss_2f1(0.5, 1.0, 1.5, 0.9216)
    assert with_half == pytest.approx(quad, rel=1e-12)
    assert abs(with_one - quad) > 0.05


@pytest.mark.parametrize("b", B_GRID + (0.99,))
def test_e4_odd_pfaff_routes_agree(b):
    for n, mu in itertools.product(range(6), MUS):
        a = e4_odd_moment(n, mu, b).value
        c = e4_odd_moment_prepfaff(n, mu, b).value
        assert a == pytest.approx(c, rel=1e-10)


def test_prepfaff_rejects_degenerate_b():
    # sqrt(0.5) rounds just above 1/sqrt(2); one ulp lower makes 2b^2 - 1 negative
    with pytest.raises(DomainError):
        e4_odd_moment_prepfaff(0, 0.0, math.nextafter(SQRT_HALF, 0.0))


@pytest.mark.parametrize("n", range(7))
@pytest.mark.parametrize("mu", [0.0, 1.0])
def test_e4_odd_limit_as_gaps_open(n, mu):
    lim = e4_odd_limit(n, mu)
    assert abs(e4_odd_moment(n, mu, 1.0 - 1e-12).value - lim) <= 1e-5 * lim


@pytest.mark.parametrize("n", range(11))
@pytest.mark.parametrize("mu", MUS)
def test_limit_is_twice_half_range(n, mu):
    lim = e4_odd_limit(n, mu)
    assert abs(lim - 2 * half_range_moment(2 * n + 1, mu).value) <= 1e-14 * lim


def test_e4_odd_vanishes_as_gaps_close():
    bs = [SQRT_HALF + 10.0**-k for k in range(1, 9)]
    vals = [e4_odd_moment(0, 0.0, b).value for b in bs]
    assert all(v2 < v1 for v1, v2 in zip(vals, vals[1:]))
    assert 0 < vals[-1] <= 1e-3
    assert 0 < e4_odd_moment(0, 0.0, SQRT_HALF + 1e-6).value <= 1e-3
    # (b - s)^2 is of order ulp^2 at the floating-point value nearest 1/sqrt(2)
    assert 0.0 <= e4_odd_moment(3, 0.5, SQRT_HALF).value <= 1e-30


@settings(max_examples=80)
@given(
    st.integers(min_value=0, max_value=10),
    st.floats(min_value=-0.49, max_value=5.0),
    st.floats(min_value=SQRT_HALF, max_value=0.999),
)
def test_e4_odd_nonnegative(n, mu, b):
    assert e4_odd_moment(n, mu, b).value >= 0.0


# --- dispatch ----------------------------------------------------------------


def test_moment_dispatch_examples():
    assert moment(MomentQuery(SetKind.FULL, 4, 0.0)).value == pytest.approx(3 * math.pi / 8, rel=1e-15)
    assert moment(MomentQuery(SetKind.E4, 0, 0.5, 0.9)).value == e4_even_moment(0, 0.5).value
    quad = moment(MomentQuery(SetKind.E4, 1, 0.0, 0.8), Method.QUADRATURE)
    assert abs(quad.value - E4_ODD_0_0_08) <= 1e-9
    assert quad.method is Method.QUADRATURE and quad.terms_or_nodes > 0


def test_moment_dispatch_series_and_parity():
    q = MomentQuery(SetKind.E2, 5, 0.5, 0.4)
    s = moment(q, "series")
    assert s.method is Method.SERIES
    assert s.value == pytest.approx(e2_odd_moment_hyp(2, 0.5, 0.4).value, rel=1e-12)
    assert moment(MomentQuery(SetKind.E2, 4, 0.5, 0.4)).value == e2_even_moment(2, 0.5).value
    with pytest.raises(DomainError):
        moment(MomentQuery(SetKind.E4, 1, 0.5, 0.8), Method.SERIES)
    with pytest.raises(DomainError):
        moment(MomentQuery(SetKind.E2, 2, 0.5, 0.8), Method.SERIES)


@pytest.mark.parametrize("kind, b", [(SetKind.FULL, None), (SetKind.HALF, None), (SetKind.E2, 0.6), (SetKind.E4, 0.85)])
def test_all_families_closed_vs_quadrature(kind, b):
    for n, mu in itertools.product(range(6), (-0.25, 0.5, 2.5)):
        q = MomentQuery(kind, n, mu, b)
        c = moment(q).value
        quad = moment(q, Method.QUADRATURE).value
        assert abs(c - quad) <= 1e-10 * max(1.0, abs(quad))
