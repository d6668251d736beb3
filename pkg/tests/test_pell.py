import math
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gapmoments.errors import DomainError
from gapmoments.pell import (
    X,
    PellSolution,
    Polynomial,
    branch_inverse_p2,
    branch_inverse_p4,
    chebyshev_t,
    chebyshev_u,
    classical_solution,
    e2_odd_weight,
    e2_solution,
    e4_solution,
    make_p2_e2,
    make_p2_e4,
    make_p4,
    make_q2_e2,
    make_q2_e4,
    make_q4,
    middle_weight_deficit,
    p2_of_e2,
    p2_of_e4,
    partial_fraction_weights,
    pell_residual,
)

B_GRID = (0.72, 0.8, 0.9, 0.95)


def assert_coeffs(p, expect, tol=1e-14):
    assert len(p.coeffs) == len(expect)
    for c, e in zip(p.coeffs, expect):
        assert c == pytest.approx(e, abs=tol)


# --- Polynomial --------------------------------------------------------------


def test_polynomial_trims_and_degree():
    assert Polynomial([1.0, 2.0, 0.0, 0.0]).degree == 1
    assert Polynomial([0.0]).degree == -1
    assert Polynomial([]).leading == 0.0


def test_polynomial_arithmetic():
    p = Polynomial([1.0, 2.0])
    q = Polynomial([-1.0, 0.0, 3.0])
    assert (p + q).coeffs == (0.0, 2.0, 3.0)
    assert (p - p).degree == -1
    assert (p * q).coeffs == (-1.0, -2.0, 3.0, 6.0)
    assert (p**2).coeffs == (1.0, 4.0, 4.0)
    assert q.deriv().coeffs == (0.0, 6.0)
    assert (2 * X + 1) == p
    assert (1 - p).coeffs == (0.0, -2.0)


@given(
    st.lists(st.integers(min_value=-9, max_value=9), min_size=1, max_size=6),
    st.lists(st.integers(min_value=-9, max_value=9), min_size=1, max_size=6),
    st.floats(min_value=-2.0, max_value=2.0),
)
def test_polynomial_product_evaluates_as_product(a, b, x):
    p, q = Polynomial(a), Polynomial(b)
    assert (p * q)(x) == pytest.approx(p(x) * q(x), rel=1e-12, abs=1e-9)


def test_polynomial_evaluates_arrays():
    p = chebyshev_t(3)
    xs = np.linspace(-1, 1, 7)
    assert np.allclose(p(xs), np.cos(3 * np.arccos(xs)), atol=1e-14)


def test_polynomial_from_roots():
    p = Polynomial.from_roots([1.0, -2.0], leading=3.0)
    assert p(1.0) == 0.0 and p(-2.0) == 0.0 and p.leading == 3.0
    assert Polynomial.from_roots([]).coeffs == (1.0,)


# --- Chebyshev ---------------------------------------------------------------


def test_chebyshev_examples():
    assert chebyshev_t(2).coeffs == (-1.0, 0.0, 2.0)
    assert chebyshev_t(0).coeffs == (1.0,)
    assert chebyshev_u(1).coeffs == (0.0, 2.0)
    with pytest.raises(DomainError):
        chebyshev_t(-1)


@pytest.mark.parametrize("n", range(1, 21))
def test_classical_pell_residual(n):
    sol = classical_solution(n)
    assert pell_residual(sol).max_abs_coeff() <= 1e-10 * max(1.0, (sol.P**2).max_abs_coeff())
    assert sol.relative_residual() <= 1e-10


def test_classical_pell_t5_u4_is_exact():
    assert classical_solution(5).residual().max_abs_coeff() <= 1e-12


# --- mapping pairs -----------------------------------------------------------


def test_e2_pair_examples():
    assert_coeffs(make_p2_e2(0.0), [-1.0, 0.0, 2.0])
    assert_coeffs(make_p2_e2(0.6), [-2.125, 0.0, 3.125])
    assert_coeffs(make_q2_e2(0.6), [1.875, 3.125])


def test_e4_pair_examples():
    r = 2.0 / 0.2304
    assert_coeffs(make_p4(0.8), [1.0, 0.0, -r, 0.0, r], tol=1e-13)
    assert_coeffs(make_q2_e4(0.8), [0.0, 2.0833333333333335])
    assert make_p4(0.8)(0.8) == pytest.approx(-1.0, abs=1e-13)


def test_two_degree_two_polynomials_are_distinct():
    assert p2_of_e2 is make_p2_e2 and p2_of_e4 is make_p2_e4
    assert p2_of_e2(0.8) != p2_of_e4(0.8)


@pytest.mark.parametrize("b", B_GRID)
def test_e4_mapping_values(b):
    s = math.sqrt(1 - b * b)
    p4 = make_p4(b)
    for x in (-1.0, 1.0, 0.0):
        assert p4(x) == pytest.approx(1.0, abs=1e-12)
    for x in (-b, b, -s, s):
        assert p4(x) == pytest.approx(-1.0, abs=1e-12)
    p2 = make_p2_e4(b)
    assert p2.degree == 2
    assert p2(b) == pytest.approx(0.0, abs=1e-14) and p2(-s) == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("b", B_GRID + (0.99,))
def test_e4_pell_residuals(b):
    assert e4_solution(b, 4).relative_residual() <= 1e-10
    assert e4_solution(b, 2).relative_residual() <= 1e-10


@pytest.mark.parametrize("b", [0.0, 0.3, 0.6, 0.9])
def test_e2_pell_residual(b):
    assert e2_solution(b).relative_residual() <= 1e-10


def test_perturbed_q4_is_detected():
    sol = e4_solution(0.8, 4)
    bad = PellSolution(sol.P, sol.Q + 1.0, sol.data)
    assert pell_residual(bad).max_abs_coeff() > 0.1
    assert bad.relative_residual() > 1e-3


def test_residual_is_sign_invariant():
    sol = e4_solution(0.9, 4)
    flipped = PellSolution(-sol.P, -sol.Q, sol.data)
    assert flipped.relative_residual() <= 1e-10


def test_e4_solution_degree_check():
    with pytest.raises(DomainError):
        e4_solution(0.8, 3)


@pytest.mark.parametrize("b", B_GRID)
def test_p4_monotone_on_branch_intervals(b):
    s = math.sqrt(1 - b * b)
    dp = make_p4(b).deriv()
    pieces = [(-1.0, -b), (-s, 0.0), (0.0, s), (b, 1.0)]
    for lo, hi in pieces:
        xs = np.linspace(lo, hi, 52)[1:-1]
        signs = np.sign(dp(xs))
        assert np.all(signs == signs[0])


# --- branch inverses ---------------------------------------------------------


@pytest.mark.parametrize("b", [0.0, 0.3, 0.6, 0.9])
def test_branch_inverse_p2_examples(b):
    assert branch_inverse_p2(1, -1.0, b) == pytest.approx(-b, abs=1e-15)
    assert branch_inverse_p2(1, 1.0, b) == pytest.approx(-1.0, abs=1e-15)
    assert branch_inverse_p2(2, 1.0, b) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("b", B_GRID)
def test_branch_inverse_p4_examples(b):
    s = math.sqrt(1 - b * b)
    assert branch_inverse_p4(2, -1.0, b) == pytest.approx(-s, abs=1e-14)
    assert branch_inverse_p4(3, 1.0, b) == 0.0
    assert branch_inverse_p4(1, 1.0, b) == pytest.approx(-1.0, abs=1e-15)


def test_branch_inverse_rejects_bad_input():
    with pytest.raises(DomainError):
        branch_inverse_p4(5, 0.0, 0.8)
    with pytest.raises(DomainError):
        branch_inverse_p4(1, 1.5, 0.8)
    with pytest.raises(DomainError):
        branch_inverse_p2(3, 0.0, 0.5)


@pytest.mark.parametrize("b", B_GRID)
def test_branch_inverse_p4_round_trip(b):
    rng = random.Random(7)
    s = math.sqrt(1 - b * b)
    p4 = make_p4(b)
    pieces = {1: (-1.0, -b), 2: (-s, 0.0), 3: (0.0, s), 4: (b, 1.0)}
    for _ in range(200):
        z = rng.uniform(-1.0, 1.0)
        for i, (lo, hi) in pieces.items():
            x = branch_inverse_p4(i, z, b)
            assert lo - 1e-15 <= x <= hi + 1e-15
            assert p4(x) == pytest.approx(z, abs=1e-12)


@given(st.floats(min_value=0.0, max_value=0.99), st.floats(min_value=-1.0, max_value=1.0))
def test_branch_inverse_p2_round_trip(b, z):
    p2 = make_p2_e2(b)
    for i in (1, 2):
        assert p2(branch_inverse_p2(i, z, b)) == pytest.approx(z, abs=1e-12)


# --- partial fractions -------------------------------------------------------


def test_partial_fraction_example():
    assert sum(partial_fraction_weights(0.3, 0.8, 4)) == pytest.approx(1.0, abs=1e-11)


@pytest.mark.parametrize("b", B_GRID)
def test_partial_fraction_sum_rule_e4(b):
    rng = random.Random(11)
    for _ in range(100):
        z = rng.uniform(-0.99, 0.99)
        w = partial_fraction_weights(z, b, 4)
        assert abs(sum(w) - 1.0) <= 1e-11
        assert abs(1.0 - 2.0 * (w[1] + w[2]) - middle_weight_deficit(z, b)) <= 1e-11


@pytest.mark.parametrize("b", [0.0, 0.3, 0.6, 0.9])
def test_partial_fraction_sum_rule_e2(b):
    rng = random.Random(13)
    for _ in range(100):
        z = rng.uniform(-0.99, 0.99)
        w = partial_fraction_weights(z, b, 2)
        assert abs(sum(w) - 1.0) <= 1e-11
        assert 1.0 - 2.0 * w[0] == pytest.approx(e2_odd_weight(z, b), abs=1e-11)


def test_partial_fraction_weights_are_symmetric_in_pairs():
    w = partial_fraction_weights(0.0, 0.8, 4)
    assert w[1] + w[2] == pytest.approx(0.4727632, abs=1e-7)


def test_middle_weight_deficit_examples():
    assert middle_weight_deficit(0.0, 0.8) == pytest.approx(0.04 / math.sqrt(0.5392), rel=1e-14)
    assert middle_weight_deficit(0.0, 0.8) == pytest.approx(0.0544734711, abs=1e-10)
    for b in B_GRID:
        s = math.sqrt(1 - b * b)
        assert middle_weight_deficit(1.0, b) == pytest.approx(1 - 2 * b * s, rel=1e-12)
        assert middle_weight_deficit(-1.0, b) == pytest.approx((1 - 2 * b * s) / (2 * b * b - 1), rel=1e-12)


def test_partial_fractions_reject_endpoints():
    with pytest.raises(DomainError):
        partial_fraction_weights(1.0, 0.8, 4)
    with pytest.raises(DomainError):
        partial_fraction_weights(0.0, 0.8, 3)
