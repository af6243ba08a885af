"""Exact characteristic polynomials of T_p on S_k and certified eigenangles.

Two routes produce ``det(xI - T_p)``:

``"trace"``
    power sums ``Tr(T_p^n)``, n = 1..dim, from the trace formula, turned
    into coefficients with Newton's identities.  Needs traces of
    ``T_{p^dim}``, so it is only used while ``p**dim`` stays small.
``"hecke"``
    the integer matrix of T_p on the basis ``Delta^i E_6^{2(d-i)} E_r`` of
    q-expansions, with an exact integer characteristic polynomial.  This
    is the route that reaches weights near 1000.

Roots are isolated with ball arithmetic on the exact integer polynomial;
every ball is proven real and simple, and mapped to an angle through
``x = 2 p^{(k-1)/2} cos t``.  ``chebyshev_form`` gives the exact
expansion of ``P`` in Chebyshev polynomials of the second kind, which is
the natural basis for the angle variable.
"""
from __future__ import annotations

import logging
from math import comb
import threading
from collections import OrderedDict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import mpmath
import numpy as np
import flint
from flint import arb, fmpz_mat, fmpz_poly
from mpmath.libmp import from_man_exp

from .chebyshev_moments import h_coefficients, trace_power
from .exact_arith import charpoly_power_sums, decimal_to_int, int_to_decimal, newton_power_to_charpoly
from .measures import ks_distance, plancherel, sato_tate
from .trace_formula import check_prime, check_weight, dim_cusp_forms

log = logging.getLogger(__name__)

TRACE_ROUTE_MAX_NORM = 50_000
MAX_DIGITS = 500
DELIGNE_MARGIN = 1e-15


class RootIsolationError(ArithmeticError):
    """The real roots of a characteristic polynomial could not be certified."""


@dataclass(frozen=True)
class CharPoly:
    """Monic integer ``det(xI - T_p)`` on S_k, ascending coefficients."""

    k: int
    p: int
    coefficients: tuple[int, ...]
    method: str = "hecke"

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __eq__(self, other):
        if not isinstance(other, CharPoly):
            return NotImplemented
        return (self.k, self.p, self.coefficients) == (other.k, other.p, other.coefficients)

    def __hash__(self):
        return hash((self.k, self.p, self.coefficients))


# -- q-expansion basis -------------------------------------------------------

_BASIS_CACHE: "OrderedDict[int, tuple[int, list[list[int]]]]" = OrderedDict()
_BASIS_LOCK = threading.Lock()
_BASIS_CACHE_SIZE = 2


def _sigma_list(n: int, e: int) -> list[int]:
    out = [0] * n
    for d in range(1, n):
        de = d**e
        for m in range(d, n, d):
            out[m] += de
    return out


def _build_basis(k: int, terms: int) -> list[list[int]]:
    d = dim_cusp_forms(k)
    n = terms + 1
    s3 = _sigma_list(n, 3)
    s5 = _sigma_list(n, 5)
    e4 = fmpz_poly([1] + [240 * s3[i] for i in range(1, n)])
    e6 = fmpz_poly([1] + [-504 * s5[i] for i in range(1, n)])
    num = (e4.mul_low(e4, n).mul_low(e4, n) - e6.mul_low(e6, n)).coeffs()
    dlt = fmpz_poly([int(c) // 1728 for c in num[:n]])
    r = k - 12 * d
    rest = {
        0: fmpz_poly([1]), 4: e4, 6: e6, 8: e4.mul_low(e4, n),
        10: e4.mul_low(e6, n), 14: e4.mul_low(e4, n).mul_low(e6, n),
    }[r]
    e6sq = e6.mul_low(e6, n)
    tails = [rest]  # E_6^{2j} E_r
    for _ in range(d):
        tails.append(tails[-1].mul_low(e6sq, n))
    basis = []
    power = fmpz_poly([1])
    for i in range(1, d + 1):
        power = power.mul_low(dlt, n)
        g = [int(c) for c in power.mul_low(tails[d - i], n).coeffs()]
        basis.append(g + [0] * (n - len(g)))
    return basis


def hecke_basis(k: int, terms: int) -> list[list[int]]:
    """q-expansions (q^0 .. q^terms) of ``Delta^i E_6^{2(d-i)} E_r``, i = 1..d.

    Element i starts ``q^i + ...``.  Results are cached per weight and
    shared between primes.
    """
    check_weight(k)
    with _BASIS_LOCK:
        hit = _BASIS_CACHE.get(k)
        if hit is not None and hit[0] >= terms:
            _BASIS_CACHE.move_to_end(k)
            return hit[1]
    basis = _build_basis(k, terms)
    with _BASIS_LOCK:
        _BASIS_CACHE[k] = (terms, basis)
        while len(_BASIS_CACHE) > _BASIS_CACHE_SIZE:
            _BASIS_CACHE.popitem(last=False)
    return basis


def hecke_matrix_int(k: int, p: int, terms: int | None = None) -> list[list[int]]:
    """Integer matrix of T_p in the basis of :func:`hecke_basis`."""
    check_prime(p)
    d = dim_cusp_forms(k)
    if d == 0:
        return []
    basis = hecke_basis(k, max(terms or 0, p * d))
    pk = p ** (k - 1)
    cols = []
    for g in basis:
        image = [0] + [g[n * p] + (pk * g[n // p] if n % p == 0 else 0) for n in range(1, d + 1)]
        # unipotent triangular solve: g_i has q^i coefficient 1
        x = [0] * (d + 1)
        for n in range(1, d + 1):
            x[n] = image[n] - sum(x[i] * basis[i - 1][n] for i in range(1, n))
        cols.append(x[1:])
    return [[cols[j][i] for j in range(d)] for i in range(d)]


def _charpoly_hecke(k: int, p: int) -> tuple[int, ...]:
    mat = hecke_matrix_int(k, p)
    if not mat:
        return (1,)
    return tuple(int(c) for c in fmpz_mat(mat).charpoly().coeffs())


def _charpoly_trace(k: int, p: int) -> tuple[int, ...]:
    d = dim_cusp_forms(k)
    sums = [trace_power(k, p, n) for n in range(1, d + 1)]
    coeffs = newton_power_to_charpoly(sums, d)
    if any(c.denominator != 1 for c in coeffs):
        raise ArithmeticError(f"non-integral characteristic polynomial for k={k}, p={p}")
    return tuple(int(c) for c in coeffs)


def char_poly_tp(k: int, p: int, method: str = "auto") -> CharPoly:
    """``det(xI - T_p)`` on S_k.  ``method`` is "auto", "trace" or "hecke"."""
    check_weight(k)
    check_prime(p)
    d = dim_cusp_forms(k)
    if method == "auto":
        method = "trace" if p**d <= TRACE_ROUTE_MAX_NORM else "hecke"
    if method == "trace":
        coeffs = _charpoly_trace(k, p)
    elif method == "hecke":
        coeffs = _charpoly_hecke(k, p)
    else:
        raise ValueError(f"unknown method {method!r}")
    if len(coeffs) != d + 1 or coeffs[-1] != 1:
        raise ArithmeticError(f"characteristic polynomial of wrong shape for k={k}, p={p}")
    return CharPoly(k, p, coeffs, method)


# -- root isolation ----------------------------------------------------------

def prime_power_trace(cp: CharPoly, j: int) -> int:
    """``Tr T_{p^j}`` from the characteristic polynomial of T_p alone.

    Uses ``T_{p^j} = sum_i (-1)^i C(j-i, i) p^{(k-1)i} T_p^{j-2i}`` and the
    power sums of the roots; independent of the trace formula.
    """
    if j < 0:
        raise ValueError("j must be >= 0")
    sums = [cp.degree] + [int(s) for s in charpoly_power_sums(cp.coefficients, j)]
    q = cp.p ** (cp.k - 1)
    return sum((-1) ** i * comb(j - i, i) * q**i * sums[j - 2 * i] for i in range(j // 2 + 1))


def chebyshev_form(cp: CharPoly) -> list[int]:
    """Integers ``B_j`` with ``P(2 s cos t) = sum_j B_j s^j U_j(cos t)``."""
    c = cp.coefficients
    d = cp.degree
    big = cp.p ** (cp.k - 1)  # s^2
    out = []
    for j in range(d + 1):
        acc = 0
        top = d if (d - j) % 2 == 0 else d - 1
        for i in range(top, j - 1, -2):
            acc = acc * big + c[i] * h_coefficients(i).h[j]
        out.append(acc)
    return out


def exact_sign(coeffs: Sequence[int], x) -> int:
    """Sign of the integer polynomial at the dyadic number ``x`` (an mpf)."""
    if not isinstance(x, mpmath.mpf):
        x = mpmath.mpf(x)
    # read the exact dyadic value; no re-rounding to the ambient precision
    neg, man, exp, _ = x._mpf_
    man = -int(man) if neg else int(man)
    d = len(coeffs) - 1
    if exp >= 0:
        val = 0
        xi = man << exp
        for c in reversed(coeffs):
            val = val * xi + c
    else:
        shift = -exp
        val = coeffs[d]
        for i in range(d - 1, -1, -1):
            val = val * man + (coeffs[i] << (shift * (d - i)))
    return (val > 0) - (val < 0)


@dataclass(frozen=True)
class AngleBracket:
    """Certified interval ``[lo, hi]`` holding one eigenangle, and its midpoint."""

    lo: mpmath.mpf
    hi: mpmath.mpf

    @property
    def mid(self):
        return (self.lo + self.hi) / 2


def _arb_to_mpf(x: arb) -> mpmath.mpf:
    """Exact conversion of an exact arb (a dyadic) to mpmath."""
    man, exp = x.man_exp()
    return mpmath.mp.make_mpf(from_man_exp(int(man), int(exp)))


def isolate_angles(cp: CharPoly, digits: int) -> list[AngleBracket]:
    """Certified angle brackets of width <= 10^-(digits+2), ascending.

    Roots of the integer polynomial are isolated with ball arithmetic;
    each ball is proven real, simple and inside the Deligne interval
    before it is mapped to an angle.
    """
    d = cp.degree
    if d == 0:
        return []
    poly = fmpz_poly(list(cp.coefficients))
    if poly.gcd(poly.derivative()).degree() > 0:
        raise RootIsolationError(f"characteristic polynomial for k={cp.k}, p={cp.p} has a repeated root")
    width = arb(10) ** (-(digits + 2))
    prec = int((digits + 2) * 3.33) + 64
    for _attempt in range(6):
        with flint.ctx.workprec(prec):
            roots = poly.complex_roots()
            scale = 2 * arb(cp.p).sqrt() ** (cp.k - 1)
            angles = []
            for z, mult in roots:
                if mult != 1 or not z.imag.is_zero():
                    raise RootIsolationError(
                        f"eigenvalue {z} for k={cp.k}, p={cp.p} is not certified real")
                y = z.real / scale
                if not abs(y) < 1:
                    raise RootIsolationError(
                        f"normalized eigenvalue {2 * y} violates |a| < 2 for k={cp.k}, p={cp.p}")
                angles.append(y.acos())
            if len(angles) == d and all(t.rad() < width for t in angles):
                out = [AngleBracket(_arb_to_mpf(t.lower()), _arb_to_mpf(t.upper())) for t in angles]
                return sorted(out, key=lambda b: b.lo)
        prec *= 2
        log.debug("angle balls too wide for k=%d p=%d; retrying at %d bits", cp.k, cp.p, prec)
    raise RootIsolationError(f"could not certify the roots for k={cp.k}, p={cp.p}")


def _fixed(x, digits: int) -> str:
    """Round to ``digits`` decimal places, rendered without exponent."""
    n = int(mpmath.nint(x * mpmath.mpf(10) ** digits))
    sign = "-" if n < 0 else ""
    n = abs(n)
    whole, frac = divmod(n, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}" if digits else f"{sign}{whole}"


# -- reports -----------------------------------------------------------------

@dataclass(frozen=True)
class SpectrumReport:
    """Eigenangles of T_p on S_k and their distance to the limit measures."""

    k: int
    p: int
    dim: int
    char_poly: tuple[int, ...]
    angles: tuple[str, ...]
    normalized_eigenvalues: tuple[str, ...]
    ks_plancherel: float | None
    ks_sato_tate: float | None
    digits: int = 12

    def angle_values(self) -> np.ndarray:
        return np.array([float(a) for a in self.angles])

    def eigenvalue_values(self) -> np.ndarray:
        return np.array([float(a) for a in self.normalized_eigenvalues])

    def to_json_dict(self) -> dict:
        return {
            "weight": self.k,
            "prime": self.p,
            "dim": self.dim,
            "digits": self.digits,
            "char_poly": [int_to_decimal(c) for c in self.char_poly],
            "eigenvalues_scaled": [
                {"mantissa": a, "half_exponent": self.k - 1} for a in self.normalized_eigenvalues
            ],
            "angles": list(self.angles),
            "ks": {"plancherel": self.ks_plancherel, "sato_tate": self.ks_sato_tate},
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "SpectrumReport":
        return cls(
            k=int(data["weight"]),
            p=int(data["prime"]),
            dim=int(data["dim"]),
            char_poly=tuple(decimal_to_int(c) for c in data["char_poly"]),
            angles=tuple(data["angles"]),
            normalized_eigenvalues=tuple(e["mantissa"] for e in data["eigenvalues_scaled"]),
            ks_plancherel=data["ks"]["plancherel"],
            ks_sato_tate=data["ks"]["sato_tate"],
            digits=int(data.get("digits", 12)),
        )


def _ks_pair(angles: np.ndarray, p: int) -> tuple[float | None, float | None]:
    if angles.size == 0:
        return None, None
    srt = np.sort(angles)
    return ks_distance(srt, plancherel(p)), ks_distance(srt, sato_tate())


def eigen_angles(k: int, p: int, digits: int = 12, cp: CharPoly | None = None,
                 method: str = "auto") -> SpectrumReport:
    """All eigenangles ``theta_f(p)`` on S_k to ``digits`` decimal places."""
    check_weight(k)
    check_prime(p)
    if not 1 <= digits <= MAX_DIGITS:
        raise ValueError(f"digits must be in [1, {MAX_DIGITS}], got {digits}")
    if cp is None:
        cp = char_poly_tp(k, p, method)
    brackets = isolate_angles(cp, digits)
    angles, eigs = [], []
    with mpmath.workdps(digits + 20):
        for br in brackets:
            t = br.mid
            a = 2 * mpmath.cos(t)
            if 2 - abs(a) < DELIGNE_MARGIN:
                raise RootIsolationError(
                    f"normalized eigenvalue {mpmath.nstr(a, 20)} violates |a| < 2 for k={k}, p={p}")
            angles.append(_fixed(t, digits))
            eigs.append(_fixed(a, digits))
    ks_pl, ks_st = _ks_pair(np.array([float(a) for a in angles]), p)
    return SpectrumReport(k, p, cp.degree, cp.coefficients, tuple(angles), tuple(eigs),
                          ks_pl, ks_st, digits)


@dataclass(frozen=True)
class ScanReport:
    """Angles pooled over several weights.

    Pooling across weights is a sampling convenience; the limit theorem
    itself concerns one weight at a time as k grows.
    """

    p: int
    weights: tuple[int, ...]
    per_weight: tuple[SpectrumReport, ...]
    angles: np.ndarray = field(repr=False)
    ks_plancherel: float
    ks_sato_tate: float

    @property
    def count(self) -> int:
        return int(self.angles.size)

    def to_json_dict(self) -> dict:
        return {
            "prime": self.p,
            "weights": list(self.weights),
            "count": self.count,
            "pooled_across_weights": True,
            "ks": {"plancherel": self.ks_plancherel, "sato_tate": self.ks_sato_tate},
            "per_weight": [
                {"weight": r.k, "dim": r.dim, "angles": list(r.angles),
                 "ks": {"plancherel": r.ks_plancherel, "sato_tate": r.ks_sato_tate}}
                for r in self.per_weight
            ],
        }


def pool_reports(p: int, reports: Iterable[SpectrumReport]) -> ScanReport:
    reports = tuple(reports)
    pooled = np.sort(np.concatenate([r.angle_values() for r in reports]) if reports else np.array([]))
    if pooled.size == 0:
        raise ValueError("no eigenvalues: every listed weight has dim S_k = 0")
    return ScanReport(p, tuple(r.k for r in reports), reports, pooled,
                      ks_distance(pooled, plancherel(p)), ks_distance(pooled, sato_tate()))


def _scan_job(args: tuple[int, int, int]) -> SpectrumReport:
    k, p, digits = args
    return eigen_angles(k, p, digits)


def distribution_scan(k_list: Sequence[int], p: int, digits: int = 12, jobs: int = 1) -> ScanReport:
    """Eigenangles of T_p pooled over the weights in ``k_list``."""
    if not k_list:
        raise ValueError("k_list must be nonempty")
    for k in k_list:
        check_weight(k)
    check_prime(p)
    tasks = [(k, p, digits) for k in k_list]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_scan_job, tasks))
    else:
        reports = [_scan_job(t) for t in tasks]
    return pool_reports(p, reports)
