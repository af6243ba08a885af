from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, strategies as st

from heckedist.chebyshev_moments import (
    h_closed_form,
    h_coefficients,
    h_integral,
    main_term_power_sum,
    normalized_power_sum,
    trace_power,
)
from heckedist.trace_formula import dim_cusp_forms, eigenvalue_sum, trace_hecke


@pytest.mark.parametrize("n, h", [
    (0, (1,)), (1, (0, 1)), (2, (1, 0, 1)), (4, (2, 0, 3, 0, 1)), (3, (0, 2, 0, 1)),
])
def test_h_examples(n, h):
    assert h_coefficients(n).h == h


def test_h_rejects_negative():
    with pytest.raises(ValueError):
        h_coefficients(-1)


def test_recurrence_matches_closed_form():
    for n in range(41):
        assert list(h_coefficients(n).h) == [h_closed_form(n, j) for j in range(n + 1)]


def test_h_invariants():
    for n in range(41):
        h = h_coefficients(n).h
        assert h[n] == 1
        assert all(c >= 0 for c in h)
        assert all(h[j] == 0 for j in range(n + 1) if (n - j) % 2)
        assert sum(c * (j + 1) for j, c in enumerate(h)) == 2**n
        if n % 2 == 0:
            assert h[0] == comb(n, n // 2) // (n // 2 + 1)  # Catalan


def test_quadrature_matches():
    for n in range(13):
        h = h_coefficients(n).h
        for j in range(n + 1):
            assert abs(h_integral(n, j) - h[j]) <= 1e-9, (n, j)


@given(st.floats(0.0, np.pi), st.integers(0, 30))
def test_expansion_identity_pointwise(t, n):
    # (2cos t)^n = sum_j h_n(j) U_j(cos t), with U_j from the recurrence
    x = np.cos(t)
    u_prev, u = 0.0, 1.0
    total = 0.0
    for c in h_coefficients(n).h:
        total += c * u
        u_prev, u = u, 2 * x * u - u_prev
    assert total == pytest.approx((2 * x) ** n, rel=1e-9, abs=1e-9 * 2**n)


@pytest.mark.parametrize("n, expected", [(1, -24), (2, 576), (3, -13824), (0, 1)])
def test_trace_power_examples(n, expected):
    assert trace_power(12, 2, n) == expected


def test_trace_power_first_power_is_trace():
    for k in range(4, 61, 2):
        for p in (2, 3, 5, 7):
            assert trace_power(k, p, 1) == trace_hecke(k, p)


def test_trace_power_one_dimensional():
    for k in (12, 16, 18, 20, 22, 26):
        for p in (2, 3, 5):
            a = trace_hecke(k, p)
            for n in range(1, 8):
                assert trace_power(k, p, n) == a**n


def test_normalized_power_sum_examples():
    assert normalized_power_sum(12, 2, 0).value.to_fraction() == 1
    assert normalized_power_sum(12, 2, 2).value.to_fraction() == Fraction(9, 32)
    assert float(normalized_power_sum(12, 2, 2).value) == 0.28125
    assert normalized_power_sum(12, 2, 1).value == eigenvalue_sum(12, 2, 1)


def test_main_term():
    # (k/12) * sum_j h_n(2j) p^-j ; for n=2: (k/12)(1 + 1/p)
    assert main_term_power_sum(24, 3, 2) == Fraction(2) * Fraction(4, 3)
    assert normalized_power_sum(24, 3, 2).main_term == Fraction(8, 3)
    assert main_term_power_sum(36, 5, 0) == 3 == dim_cusp_forms(36)
