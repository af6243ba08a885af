"""Expansion of powers of ``2cos(theta)`` in the basis ``U_j(cos theta)``.

``(2cos t)^n = sum_j h_n(j) U_j(cos t)``, and since the normalised Hecke
eigenvalues satisfy ``a_f(p^j) = U_j(cos theta_f(p))`` the same
coefficients turn traces of ``T_{p^j}`` into traces of powers of ``T_p``.
"""
from __future__ import annotations

import functools
import math
from fractions import Fraction
from math import comb
from typing import NamedTuple

from scipy import integrate

from .trace_formula import ScaledExact, check_prime, check_weight, trace_hecke


class ChebyshevCoefficients(NamedTuple):
    n: int
    h: tuple[int, ...]


@functools.lru_cache(maxsize=512)
def _h_tuple(n: int) -> tuple[int, ...]:
    row = [1]
    for m in range(1, n + 1):
        # x * U_j = U_{j+1} + U_{j-1}, with U_{-1} = 0
        out = [0] * (m + 1)
        for j, c in enumerate(row):
            if c:
                out[j + 1] += c
                if j:
                    out[j - 1] += c
        row = out
    return tuple(row)


def h_coefficients(n: int) -> ChebyshevCoefficients:
    """``h_n(0..n)`` from the three-term recurrence, exact integers."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return ChebyshevCoefficients(n, _h_tuple(n))


def h_closed_form(n: int, j: int) -> int:
    """Ballot-number form ``C(n, (n-j)/2) - C(n, (n-j)/2 - 1)``."""
    if j < 0 or j > n or (n - j) % 2:
        return 0
    i = (n - j) // 2
    return comb(n, i) - (comb(n, i - 1) if i else 0)


def h_integral(n: int, j: int) -> float:
    """Numerical ``(2^{n+1}/pi) * int_0^pi cos^n t sin((j+1)t) sin t dt``."""
    val, _ = integrate.quad(
        lambda t: math.cos(t) ** n * math.sin((j + 1) * t) * math.sin(t),
        0.0, math.pi, epsabs=1e-14, epsrel=1e-13, limit=200,
    )
    return 2 ** (n + 1) / math.pi * val


def trace_power(k: int, p: int, n: int) -> int:
    """``Tr(T_p^n)`` on S_k as an exact integer.

    ``sum_j h_n(j) * p^{(k-1)(n-j)/2} * Tr T_{p^j}``; only ``j = n mod 2``
    contribute, so every power of ``p`` is integral.
    """
    check_weight(k)
    check_prime(p)
    if n < 0:
        raise ValueError("n must be >= 0")
    h = _h_tuple(n)
    total = 0
    for j in range(n % 2, n + 1, 2):
        total += h[j] * p ** ((k - 1) * (n - j) // 2) * trace_hecke(k, p**j)
    return total


class PowerSum(NamedTuple):
    value: ScaledExact
    main_term: Fraction


def main_term_power_sum(k: int, p: int, n: int) -> Fraction:
    """Large-weight prediction ``(k/12) * sum_j h_n(2j) p^{-j}``."""
    h = _h_tuple(n)
    return Fraction(k, 12) * sum(
        (Fraction(h[2 * j], p**j) for j in range(0, n // 2 + 1)), Fraction(0)
    )


def normalized_power_sum(k: int, p: int, n: int) -> PowerSum:
    """``sum_f a_f(p)^n`` exactly, alongside the main-term prediction."""
    value = ScaledExact(Fraction(trace_power(k, p, n)), p, -n * (k - 1))
    return PowerSum(value, main_term_power_sum(k, p, n))
