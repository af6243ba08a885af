"""Exact traces of Hecke operators on cusp forms of level one.

``trace_hecke(k, n)`` evaluates the Eichler-Selberg trace formula

    Tr T_n = -1/2 * sum_{m^2 < 4n} H(4n - m^2) * G_{k-1}(m, n)
             - sum'_{d | n, d <= sqrt n} d^{k-1}
             + [n square] * (k-1)/12 * n^{k/2 - 1}

in rational arithmetic and insists that the total is an integer.  The
primed sum gives ``d = sqrt(n)`` weight 1/2.

Eigenvalue sums use the normalisation ``a_f(n) = n^{(1-k)/2} * a_{f,n}``,
so they are carried as :class:`ScaledExact` values ``mantissa * p^{e/2}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import NamedTuple

import mpmath

from .class_number import SHARED_LOOKUP, HurwitzLookup
from .exact_arith import lucas_term


def check_weight(k: int) -> int:
    if not isinstance(k, int) or isinstance(k, bool):
        raise TypeError(f"weight must be an int, got {type(k).__name__}")
    if k % 2 or k < 4:
        raise ValueError(f"weight must be even and >= 4, got {k}")
    return k


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    return all(n % q for q in range(3, isqrt(n) + 1, 2))


def check_prime(p: int) -> int:
    if not is_prime(p):
        raise ValueError(f"expected a prime, got {p}")
    return p


def dim_formula(k: int) -> int:
    """Classical dimension of S_k(SL_2(Z)) for even k >= 4."""
    check_weight(k)
    return k // 12 - (1 if k % 12 == 2 else 0)


@dataclass(frozen=True)
class ScaledExact:
    """Exact number ``mantissa * base**(half_exponent / 2)``.

    Canonical: the mantissa carries no factor of ``base`` (those are moved
    into the exponent), and zero has exponent 0.  Equality is structural.
    """

    mantissa: Fraction
    base: int
    half_exponent: int = 0

    def __post_init__(self):
        if self.base < 2:
            raise ValueError("base must be >= 2")
        m = Fraction(self.mantissa)
        e = self.half_exponent
        if m == 0:
            e = 0
        else:
            num, den = m.numerator, m.denominator
            while num % self.base == 0:
                num //= self.base
                e += 2
            while den % self.base == 0:
                den //= self.base
                e -= 2
            m = Fraction(num, den)
        object.__setattr__(self, "mantissa", m)
        object.__setattr__(self, "half_exponent", e)

    @property
    def is_rational(self) -> bool:
        return self.half_exponent % 2 == 0

    def to_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is irrational")
        e = self.half_exponent // 2
        return self.mantissa * Fraction(self.base) ** e

    def _align(self, other: "ScaledExact") -> tuple[Fraction, Fraction, int]:
        if not isinstance(other, ScaledExact):
            other = ScaledExact(Fraction(other), self.base)
        if other.mantissa == 0:
            return self.mantissa, Fraction(0), self.half_exponent
        if self.mantissa == 0:
            return Fraction(0), other.mantissa, other.half_exponent
        if other.base != self.base:
            raise ValueError("cannot add ScaledExact values with different bases")
        if (self.half_exponent - other.half_exponent) % 2:
            raise ValueError("sum of rational and irrational scaled values is not representable")
        e = min(self.half_exponent, other.half_exponent)
        a = self.mantissa * self.base ** ((self.half_exponent - e) // 2)
        b = other.mantissa * self.base ** ((other.half_exponent - e) // 2)
        return a, b, e

    def __add__(self, other):
        a, b, e = self._align(other)
        return ScaledExact(a + b, self.base, e)

    __radd__ = __add__

    def __neg__(self):
        return ScaledExact(-self.mantissa, self.base, self.half_exponent)

    def __sub__(self, other):
        return self + (-other if isinstance(other, ScaledExact) else -Fraction(other))

    def __mul__(self, other):
        if isinstance(other, ScaledExact):
            if other.base != self.base:
                raise ValueError("cannot multiply ScaledExact values with different bases")
            return ScaledExact(self.mantissa * other.mantissa, self.base,
                               self.half_exponent + other.half_exponent)
        return ScaledExact(self.mantissa * Fraction(other), self.base, self.half_exponent)

    __rmul__ = __mul__

    def to_mpf(self, dps: int = 30) -> mpmath.mpf:
        with mpmath.workdps(dps + 10):
            m = mpmath.mpf(self.mantissa.numerator) / self.mantissa.denominator
            val = m * mpmath.sqrt(self.base) ** self.half_exponent
        return +val

    def __float__(self) -> float:
        return float(self.to_mpf(20))

    def decimal(self, digits: int = 12) -> str:
        """Numeric rendering with ``digits`` significant digits."""
        return mpmath.nstr(self.to_mpf(digits + 20), digits)

    def __str__(self):
        e = self.half_exponent
        if e == 0:
            return str(self.mantissa)
        power = f"{e // 2}" if e % 2 == 0 else f"({e}/2)"
        return f"{self.mantissa}*{self.base}^{power}"


class TraceTerms(NamedTuple):
    """Pieces of the trace formula; ``total`` is their sum."""

    elliptic: Fraction
    hyperbolic: Fraction
    identity: Fraction

    @property
    def total(self) -> Fraction:
        return self.elliptic + self.hyperbolic + self.identity


def _divisors_upto_sqrt(n: int) -> list[int]:
    return [d for d in range(1, isqrt(n) + 1) if n % d == 0]


def trace_terms(k: int, n: int, lookup: HurwitzLookup = SHARED_LOOKUP) -> TraceTerms:
    """The three rational contributions to Tr T_n on S_k."""
    check_weight(k)
    if n < 1:
        raise ValueError(f"Hecke index must be >= 1, got {n}")
    r = isqrt(4 * n)
    m_max = r if r * r < 4 * n else r - 1
    lookup.ensure(4 * n)
    # G_{k-1}(-m) = (-1)^k G_{k-1}(m) = G_{k-1}(m) for even k.
    six_sum = 0
    for m in range(0, m_max + 1):
        term = lookup.six_h(4 * n - m * m) * lucas_term(m, n, k - 1)
        six_sum += term if m == 0 else 2 * term
    elliptic = Fraction(-six_sum, 12)

    root = isqrt(n)
    hyper = Fraction(0)
    for d in _divisors_upto_sqrt(n):
        w = Fraction(1, 2) if d * d == n else Fraction(1)
        hyper -= w * d ** (k - 1)

    ident = Fraction(k - 1, 12) * n ** (k // 2 - 1) if root * root == n else Fraction(0)
    return TraceTerms(elliptic, hyper, ident)


def trace_hecke(k: int, n: int, lookup: HurwitzLookup = SHARED_LOOKUP) -> int:
    """Exact trace of T_n acting on S_k(SL_2(Z))."""
    total = trace_terms(k, n, lookup).total
    if total.denominator != 1:
        raise ArithmeticError(f"trace formula gave non-integer {total} for k={k}, n={n}")
    return total.numerator


def dim_cusp_forms(k: int) -> int:
    """dim S_k, computed as Tr T_1 and checked against the classical formula."""
    dim = trace_hecke(k, 1)
    expected = dim_formula(k)
    if dim != expected:
        raise ArithmeticError(f"Tr T_1 = {dim} but dim S_{k} = {expected}")
    return dim


def eigenvalue_sum(k: int, p: int, j: int) -> ScaledExact:
    """``sum_f a_f(p^j) = Tr T_{p^j} * p^{-j(k-1)/2}``, exactly."""
    check_prime(p)
    if j < 0:
        raise ValueError("j must be >= 0")
    return ScaledExact(Fraction(trace_hecke(k, p**j)), p, -j * (k - 1))


def large_weight_main_term(k: int, p: int, j: int) -> ScaledExact:
    """Large-weight prediction ``[j even] * (k/12) * p^{-j/2}``."""
    if j % 2:
        return ScaledExact(Fraction(0), p)
    return ScaledExact(Fraction(k, 12), p, -j)


def large_weight_residual(k: int, p: int, j: int) -> ScaledExact:
    """Eigenvalue sum minus its large-weight main term."""
    if j < 1:
        raise ValueError("j must be >= 1")
    return eigenvalue_sum(k, p, j) - large_weight_main_term(k, p, j)
