import os
import threading
from fractions import Fraction
from math import isqrt

import pytest
from hypothesis import given, settings, strategies as st

from heckedist.class_number import (
    CACHE_FILENAME,
    CacheError,
    HurwitzLookup,
    form_weight,
    hurwitz_H,
    hurwitz_table,
    reduced_forms,
)


@pytest.mark.parametrize("d, forms", [
    (3, [(1, 1, 1)]),
    (4, [(1, 0, 1)]),
    (23, [(1, 1, 6), (2, -1, 3), (2, 1, 3)]),
])
def test_reduced_forms_examples(d, forms):
    assert reduced_forms(d) == forms


@pytest.mark.parametrize("d, h", [
    (3, Fraction(1, 3)), (4, Fraction(1, 2)), (7, 1), (8, 1),
    (12, Fraction(4, 3)), (23, 3), (15, 2), (16, Fraction(3, 2)), (20, 2),
])
def test_hurwitz_examples(d, h):
    assert hurwitz_H(d) == h


@pytest.mark.parametrize("d", [0, -3, 1, 2, 5, 6, 10])
def test_hurwitz_rejects_bad_discriminants(d):
    with pytest.raises(ValueError):
        hurwitz_H(d)
    if d > 0:
        with pytest.raises(ValueError):
            reduced_forms(d)


@pytest.mark.parametrize("d_max, table", [
    (4, {3: Fraction(1, 3), 4: Fraction(1, 2)}),
    (8, {3: Fraction(1, 3), 4: Fraction(1, 2), 7: 1, 8: 1}),
    (3, {3: Fraction(1, 3)}),
])
def test_table_examples(d_max, table):
    assert hurwitz_table(d_max) == table


def test_table_rejects_small_bound():
    with pytest.raises(ValueError):
        hurwitz_table(2)


def test_three_routes_agree_up_to_10_4():
    table = hurwitz_table(10_000)
    for d, h in table.items():
        direct = sum((form_weight(f) for f in reduced_forms(d)), Fraction(0))
        assert h == hurwitz_H(d) == direct, d


def test_denominators_divide_six():
    assert {h.denominator for h in hurwitz_table(20_000).values()} <= {1, 2, 3, 6}
    assert all(h > 0 for h in hurwitz_table(20_000).values())


def test_table_prefix_is_stable():
    big = hurwitz_table(5000)
    small = hurwitz_table(1234)
    assert small == {d: h for d, h in big.items() if d <= 1234}


def _sigma(n):
    return sum(d for d in range(1, n + 1) if n % d == 0)


def test_kronecker_hurwitz_relation():
    # sum_{t^2 <= 4n} H(4n - t^2) = 2 sigma(n) - sum_{d|n} min(d, n/d), with H(0) = -1/12
    table = hurwitz_table(4 * 800)
    table[0] = Fraction(-1, 12)
    for n in range(1, 801):
        r = isqrt(4 * n)
        lhs = sum(table[4 * n - t * t] for t in range(-r, r + 1))
        rhs = 2 * _sigma(n) - sum(min(d, n // d) for d in range(1, n + 1) if n % d == 0)
        assert lhs == rhs, n


@settings(max_examples=30, deadline=None)
@given(st.integers(10**6, 5 * 10**6).filter(lambda d: d % 4 in (0, 3)))
def test_large_values_from_forms(d):
    # the divisor walk and the form walk agree well past the sieve range
    direct = sum((form_weight(f) for f in reduced_forms(d)), Fraction(0))
    assert hurwitz_H(d) == direct


def test_cache_round_trip(tmp_path):
    table = hurwitz_table(500, tmp_path)
    path = tmp_path / CACHE_FILENAME
    lines = path.read_text().splitlines()
    assert lines[0] == "# hurwitz v1 d_max=500"
    assert lines[1] == "3,1,3"
    assert hurwitz_table(500, tmp_path) == table
    # a larger cache serves smaller requests
    assert hurwitz_table(100, tmp_path) == hurwitz_table(100)
    # a smaller cache is rebuilt for a larger request
    assert hurwitz_table(600, tmp_path) == hurwitz_table(600)
    assert path.read_text().splitlines()[0] == "# hurwitz v1 d_max=600"
    assert not [p for p in os.listdir(tmp_path) if p.endswith(".tmp")]


def test_cache_rejects_garbage(tmp_path):
    (tmp_path / CACHE_FILENAME).write_text("not a cache\n")
    with pytest.raises(CacheError):
        hurwitz_table(10, tmp_path)


def test_cache_unwritable(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    with pytest.raises(CacheError):
        hurwitz_table(10, blocker / "sub")


def test_lookup_concurrent_growth():
    lookup = HurwitzLookup(sieve_limit=50_000)
    errors = []

    def worker(lo):
        try:
            for d in range(lo, 60_000, 997):
                if d % 4 in (0, 3):
                    assert lookup(d) == hurwitz_H(d)
        except AssertionError as exc:
            errors.append(exc)

    threads = [threading.Thread(target=worker, args=(s,)) for s in (3, 4, 7, 8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors


def test_lookup_preload():
    lookup = HurwitzLookup()
    lookup.preload(hurwitz_table(2000))
    assert lookup.six_h(1999) == 6 * hurwitz_H(1999)
    assert lookup(12) == Fraction(4, 3)
