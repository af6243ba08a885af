from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from heckedist.exact_arith import (
    charpoly_power_sums,
    decimal_to_int,
    format_poly,
    int_to_decimal,
    lucas_sequence,
    lucas_term,
    newton_power_to_charpoly,
    poly_from_roots,
)


@pytest.mark.parametrize("m, n, length, expected", [
    (0, 1, 1, 1),
    (0, 2, 11, -32),
    (2, 2, 11, 32),
    (1, 2, 11, 23),
])
def test_lucas_examples(m, n, length, expected):
    assert lucas_term(m, n, length) == expected


def test_lucas_hand_recurrence():
    assert lucas_sequence(0, 2, 11) == [1, 0, -2, 0, 4, 0, -8, 0, 16, 0, -32]


@pytest.mark.parametrize("m, n", [(2, 1), (3, 2), (-4, 4), (5, 6)])
def test_lucas_rejects_real_eta(m, n):
    with pytest.raises(ValueError):
        lucas_term(m, n, 5)


@st.composite
def lucas_args(draw):
    n = draw(st.integers(1, 10**6))
    r = 0
    while (r + 1) ** 2 < 4 * n:
        r += 1
    m = draw(st.integers(-r, r))
    return m, n, draw(st.integers(1, 300))


@given(lucas_args())
def test_lucas_doubling_matches_recurrence(args):
    m, n, length = args
    assert lucas_term(m, n, length) == lucas_sequence(m, n, length)[-1]


@given(lucas_args())
def test_lucas_sign_symmetry(args):
    m, n, length = args
    assert lucas_term(-m, n, length) == (-1) ** (length + 1) * lucas_term(m, n, length)


@given(lucas_args())
def test_lucas_magnitude_bound(args):
    m, n, length = args
    g = lucas_term(m, n, length)
    # |G| <= len * n^((len-1)/2), compared after squaring to stay in integers
    assert g * g <= length * length * n ** (length - 1)


@pytest.mark.parametrize("sums, degree, expected", [
    ([5], 1, [-5, 1]),
    ([3, 5], 2, [2, -3, 1]),
    ([0, 2], 2, [-1, 0, 1]),
    ([], 0, [1]),
])
def test_newton_examples(sums, degree, expected):
    assert newton_power_to_charpoly(sums, degree) == [Fraction(c) for c in expected]


def test_newton_needs_enough_sums():
    with pytest.raises(ValueError):
        newton_power_to_charpoly([1], 2)


@settings(max_examples=200)
@given(st.lists(st.integers(-50, 50), min_size=1, max_size=8))
def test_newton_round_trip(roots):
    d = len(roots)
    sums = [sum(r**i for r in roots) for i in range(1, d + 1)]
    assert newton_power_to_charpoly(sums, d) == poly_from_roots(roots)


@given(st.lists(st.integers(-20, 20), min_size=1, max_size=6), st.integers(1, 12))
def test_power_sums_past_degree(roots, count):
    assert charpoly_power_sums(poly_from_roots(roots), count) == [
        sum(r**i for r in roots) for i in range(1, count + 1)
    ]


def test_format_poly():
    assert format_poly([2, -3, 1]) == "x^2 - 3*x + 2"
    assert format_poly([24, 1]) == "x + 24"
    assert format_poly([1]) == "1"


def test_decimal_strings_of_any_size():
    n = -(7**20000)
    s = int_to_decimal(n)
    assert len(s) > 16000 and s.startswith("-")
    assert decimal_to_int(s) == n
    assert int_to_decimal(0) == "0"
    with pytest.raises(ValueError):
        decimal_to_int("12x")
