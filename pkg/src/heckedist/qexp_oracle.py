"""Brute-force q-expansion oracle for small weights.

Everything here is exact integer/rational arithmetic on truncated power
series in plain Python: Eisenstein series, Delta, the Miller basis of
S_k, Hecke matrices acting on coefficients, and traces of T_n.  It is
deliberately independent of the trace formula and is only meant for
k up to about 100.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .trace_formula import check_prime, check_weight, dim_formula

Matrix = list[list[Fraction]]


@dataclass(frozen=True)
class QExpansion:
    """Truncated series ``sum_{n >= offset} coeffs[n - offset] q^n``.

    ``offset`` is 0 for modular forms and 1 for cusp forms.  Coefficients
    past the truncation are unknown, so indexing them raises.
    """

    weight: int
    coeffs: tuple[int, ...]
    offset: int = 0

    @property
    def length(self) -> int:
        return len(self.coeffs)

    @property
    def precision(self) -> int:
        """First exponent whose coefficient is unknown."""
        return self.offset + len(self.coeffs)

    def __getitem__(self, n: int) -> int:
        if n < self.offset:
            return 0
        if n >= self.precision:
            raise IndexError(f"q^{n} is beyond the truncation O(q^{self.precision})")
        return self.coeffs[n - self.offset]

    def full(self) -> list[int]:
        """Coefficients from q^0 up to the truncation."""
        return [0] * self.offset + list(self.coeffs)


def divisor_sigma(n_max: int, e: int) -> list[int]:
    out = [0] * (n_max + 1)
    for d in range(1, n_max + 1):
        de = d**e
        for m in range(d, n_max + 1, d):
            out[m] += de
    return out


def _mul(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] += x * y
    return out


def _pow(a: Sequence[int], e: int, n: int) -> list[int]:
    out = [1] + [0] * (n - 1)
    for _ in range(e):
        out = _mul(out, a, n)
    return out


def eisenstein(weight: int, terms: int) -> QExpansion:
    """E_4 or E_6 to ``terms`` coefficients (q^0 .. q^{terms-1})."""
    if weight not in (4, 6):
        raise ValueError(f"only E_4 and E_6 are provided, got weight {weight}")
    if terms < 1:
        raise ValueError("terms must be >= 1")
    e, c = (3, 240) if weight == 4 else (5, -504)
    sig = divisor_sigma(terms - 1, e)
    return QExpansion(weight, tuple([1] + [c * sig[n] for n in range(1, terms)]))


def delta(terms: int) -> QExpansion:
    """Delta = (E_4^3 - E_6^2)/1728, coefficients tau(1) .. tau(terms)."""
    if terms < 1:
        raise ValueError("terms must be >= 1")
    n = terms + 1
    e4 = eisenstein(4, n).coeffs
    e6 = eisenstein(6, n).coeffs
    num = [x - y for x, y in zip(_pow(e4, 3, n), _mul(e6, e6, n))]
    if any(c % 1728 for c in num):
        raise ArithmeticError("E_4^3 - E_6^2 not divisible by 1728")
    return QExpansion(12, tuple(c // 1728 for c in num[1:]), offset=1)


def delta_product(terms: int) -> QExpansion:
    """Delta from the product ``q * prod (1 - q^n)^24``."""
    n = terms  # coefficients of prod up to q^{terms-1}
    series = [1] + [0] * (n - 1)
    for m in range(1, n):
        for _ in range(24):
            for i in range(n - 1, m - 1, -1):
                series[i] -= series[i - m]
    return QExpansion(12, tuple(series), offset=1)


def _residual_eisenstein(r: int, n: int) -> list[int]:
    e4 = eisenstein(4, n).coeffs
    e6 = eisenstein(6, n).coeffs
    a, b = {0: (0, 0), 4: (1, 0), 6: (0, 1), 8: (2, 0), 10: (1, 1), 14: (2, 1)}[r]
    return _mul(_pow(e4, a, n), _pow(e6, b, n), n)


def miller_basis(k: int, terms: int) -> list[QExpansion]:
    """Echelon basis ``f_i = q^i + O(q^{d+1})`` of S_k, ``i = 1..d``.

    Each ``f_i`` carries coefficients q^1 .. q^terms.
    """
    check_weight(k)
    d = dim_formula(k)
    if d == 0:
        return []
    if terms < d:
        raise ValueError(f"need at least {d} terms for S_{k}")
    n = terms + 1
    r = k - 12 * d
    d_series = [0] + list(delta(terms).coeffs)
    e6sq = _pow(eisenstein(6, n).coeffs, 2, n)
    rest = _residual_eisenstein(r, n)
    rows = []
    for i in range(1, d + 1):
        g = _mul(_mul(_pow(d_series, i, n), _pow(e6sq, d - i, n), n), rest, n)
        rows.append([Fraction(c) for c in g])
    # g_i = q^i + ..., so clearing above the diagonal needs no pivot search
    for i in range(d - 1, -1, -1):
        for j in range(i):
            c = rows[j][i + 1]
            if c:
                rows[j] = [x - c * y for x, y in zip(rows[j], rows[i])]
    basis = []
    for row in rows:
        if any(x.denominator != 1 for x in row):
            raise ArithmeticError("Miller basis has non-integral coefficients")
        basis.append(QExpansion(k, tuple(int(x) for x in row[1:]), offset=1))
    return basis


def hecke_matrix(k: int, p: int, terms: int | None = None) -> Matrix:
    """Matrix of T_p on the Miller basis; column j is the image of f_{j+1}.

    ``(T_p f)(n) = a(np) + p^{k-1} a(n/p)``.
    """
    check_weight(k)
    check_prime(p)
    d = dim_formula(k)
    needed = p * (d + 1)
    if terms is None:
        terms = needed
    if terms < needed:
        raise ValueError(f"T_{p} on S_{k} needs terms >= {needed}, got {terms}")
    basis = miller_basis(k, terms)
    pk = p ** (k - 1)
    mat = [[Fraction(0)] * d for _ in range(d)]
    for j, f in enumerate(basis):
        for i in range(d):
            n = i + 1
            val = f[n * p] + (pk * f[n // p] if n % p == 0 else 0)
            mat[i][j] = Fraction(val)
    return mat


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return [[sum((a[i][l] * b[l][j] for l in range(n)), Fraction(0)) for j in range(n)]
            for i in range(n)]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def trace(a: Matrix) -> Fraction:
    return sum((a[i][i] for i in range(len(a))), Fraction(0))


def charpoly(a: Matrix) -> list[Fraction]:
    """Ascending monic characteristic polynomial ``det(xI - A)``.

    Faddeev-LeVerrier, exact over the rationals.
    """
    n = len(a)
    coeffs = [Fraction(0)] * n + [Fraction(1)]
    am = [[Fraction(0)] * n for _ in range(n)]  # A * M_0
    for step in range(1, n + 1):
        c_prev = coeffs[n - step + 1]
        m = [[x + (c_prev if i == j else 0) for j, x in enumerate(row)] for i, row in enumerate(am)]
        am = mat_mul(a, m)
        coeffs[n - step] = -trace(am) / step
    return coeffs


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    q = 2
    while q * q <= n:
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
        q += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def hecke_matrix_n(k: int, n: int) -> Matrix:
    """Matrix of T_n from T_p and ``T_{p^{e+1}} = T_p T_{p^e} - p^{k-1} T_{p^{e-1}}``."""
    check_weight(k)
    if n < 1:
        raise ValueError("n must be >= 1")
    d = dim_formula(k)
    result = identity(d)
    for p, e in _factor(n).items():
        tp = hecke_matrix(k, p)
        pk = Fraction(p ** (k - 1))
        prev, cur = identity(d), tp
        for _ in range(e - 1):
            nxt = mat_mul(tp, cur)
            prev, cur = cur, [[x - pk * y for x, y in zip(r1, r2)] for r1, r2 in zip(nxt, prev)]
        result = mat_mul(result, cur)
    return result


def oracle_trace(k: int, n: int) -> int:
    """Tr T_n on S_k from q-expansions alone."""
    t = trace(hecke_matrix_n(k, n))
    if t.denominator != 1:
        raise ArithmeticError(f"non-integral oracle trace {t}")
    return int(t)
