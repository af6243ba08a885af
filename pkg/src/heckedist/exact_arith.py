"""Big-integer kernels shared by the trace formula and the spectra code.

Integers are plain Python ``int`` and rationals are ``fractions.Fraction``;
both are unbounded and canonical, which is all the trace computations need.
Polynomials are lists of coefficients in ascending degree order.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from flint import fmpz

ExactInteger = int
ExactRational = Fraction


def int_to_decimal(n: int) -> str:
    """Decimal string of any size (``str(int)`` stops at a few thousand digits)."""
    return str(fmpz(n))


def decimal_to_int(s: str) -> int:
    return int(fmpz(s.strip()))


def lucas_term(m: int, n: int, length: int) -> int:
    """Return ``(eta**length - conj(eta)**length) / (eta - conj(eta))``.

    Here ``eta = (m + i*sqrt(4n - m^2)) / 2``, so the value is the Lucas
    sequence ``G_1 = 1, G_2 = m, G_{j+1} = m*G_j - n*G_{j-1}`` at ``length``.
    Evaluated with the index-doubling formulas, O(log length) products.
    """
    if n < 1 or length < 1:
        raise ValueError("lucas_term needs n >= 1 and length >= 1")
    if m * m >= 4 * n:
        raise ValueError(f"lucas_term needs m^2 < 4n, got m={m}, n={n}")
    # (U_j, V_j, n^j) with U the Lucas U-sequence and V its companion.
    u, v, q = 1, m, n
    for bit in bin(length)[3:]:
        u, v, q = u * v, v * v - 2 * q, q * q
        if bit == "1":
            # U_{j+1} = (m U_j + V_j)/2, V_{j+1} = ((m^2-4n) U_j + m V_j)/2
            u, v, q = (m * u + v) // 2, ((m * m - 4 * n) * u + m * v) // 2, q * n
    return u


def lucas_sequence(m: int, n: int, length: int) -> list[int]:
    """All terms ``G_1 .. G_length`` by the plain three-term recurrence."""
    if m * m >= 4 * n:
        raise ValueError(f"lucas_sequence needs m^2 < 4n, got m={m}, n={n}")
    seq = [1, m][:length]
    while len(seq) < length:
        seq.append(m * seq[-1] - n * seq[-2])
    return seq


def newton_power_to_charpoly(power_sums: Sequence, degree: int) -> list[Fraction]:
    """Monic polynomial whose roots have the given power sums.

    ``power_sums[i]`` is the sum of the (i+1)-th powers of the roots.  The
    result is ascending: ``[c_0, ..., c_{d-1}, 1]`` for
    ``x^d - e_1 x^{d-1} + e_2 x^{d-2} - ...``.
    """
    if len(power_sums) < degree:
        raise ValueError(f"need {degree} power sums, got {len(power_sums)}")
    ps = [Fraction(s) for s in power_sums[:degree]]
    e = [Fraction(1)]
    for i in range(1, degree + 1):
        acc = Fraction(0)
        for j in range(1, i + 1):
            term = e[i - j] * ps[j - 1]
            acc += term if j % 2 else -term
        e.append(acc / i)
    return [(-1) ** i * e[i] for i in range(degree, -1, -1)]


def charpoly_power_sums(coeffs: Sequence, count: int) -> list[Fraction]:
    """Power sums ``p_1 .. p_count`` of the roots of a monic polynomial.

    Inverse direction of :func:`newton_power_to_charpoly`; works past the
    degree (``e_i = 0`` for ``i > d``).
    """
    d = len(coeffs) - 1
    if d < 0 or coeffs[-1] != 1:
        raise ValueError("polynomial must be monic")
    # e_i = (-1)^i * c_{d-i}
    e = [Fraction((-1) ** i) * Fraction(coeffs[d - i]) for i in range(d + 1)]
    ps: list[Fraction] = []
    for i in range(1, count + 1):
        acc = Fraction(i) * e[i] if i <= d else Fraction(0)
        acc = acc if i % 2 else -acc
        # p_i = (-1)^{i-1} i e_i + sum_{j=1}^{i-1} (-1)^{j-1} e_j p_{i-j}
        for j in range(1, min(i - 1, d) + 1):
            term = e[j] * ps[i - j - 1]
            acc += term if j % 2 else -term
        ps.append(acc)
    return ps


def poly_from_roots(roots: Sequence) -> list[Fraction]:
    """Ascending monic coefficients of ``prod (x - r)``."""
    coeffs = [Fraction(1)]
    for r in roots:
        shifted = [Fraction(0)] + coeffs
        for i, c in enumerate(coeffs):
            shifted[i] -= Fraction(r) * c
        coeffs = shifted
    return coeffs


def format_poly(coeffs: Sequence, var: str = "x") -> str:
    """Human-readable form, highest degree first (``x^2 - 3*x + 2``)."""
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    if not parts:
        return "0"
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out
