"""Limit measures for eigenvalue angles on [0, pi].

* Sato-Tate: ``(2/pi) sin^2 t dt``.
* Plancherel at a prime p:
  ``(2/pi)(1 + 1/p) sin^2 t / ((1 - 1/p)^2 + (4/p) sin^2 t) dt``.

Expanding the Plancherel density as ``(2/pi) sin t sum_j p^{-j} sin((2j+1)t)``
gives exact rational moments of ``2cos t`` and a rapidly convergent series
for the CDF.  Quadrature is used only as a cross-check.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy import integrate
from scipy.optimize import brentq

from .chebyshev_moments import h_coefficients
from .trace_formula import check_prime

SATO_TATE = "sato_tate"
PLANCHEREL = "plancherel"


@dataclass(frozen=True)
class AngleMeasure:
    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind == SATO_TATE:
            if self.p is not None:
                raise ValueError("Sato-Tate measure takes no prime")
        elif self.kind == PLANCHEREL:
            if self.p is None:
                raise ValueError("Plancherel measure needs a prime")
            check_prime(self.p)
        else:
            raise ValueError(f"unknown measure kind {self.kind!r}")

    def __str__(self):
        return self.kind if self.p is None else f"{self.kind}({self.p})"


def sato_tate() -> AngleMeasure:
    return AngleMeasure(SATO_TATE)


def plancherel(p: int) -> AngleMeasure:
    return AngleMeasure(PLANCHEREL, p)


def _check_theta(theta) -> np.ndarray:
    t = np.asarray(theta, dtype=float)
    if np.any(t < 0) or np.any(t > math.pi) or np.any(np.isnan(t)):
        raise ValueError("theta must lie in [0, pi]")
    return t


def _out(values: np.ndarray, like):
    return float(values) if np.ndim(like) == 0 else values


def density(m: AngleMeasure, theta):
    """Density at ``theta``; accepts scalars or arrays."""
    t = _check_theta(theta)
    s2 = np.sin(t) ** 2
    if m.kind == SATO_TATE:
        val = 2 / math.pi * s2
    else:
        p = m.p
        val = 2 / math.pi * (1 + 1 / p) * s2 / ((1 - 1 / p) ** 2 + 4 / p * s2)
    return _out(val, theta)


def density_cos_form(m: AngleMeasure, theta):
    """Plancherel density with denominator ``1 + 1/p^2 - (2/p) cos 2t``."""
    t = _check_theta(theta)
    if m.kind == SATO_TATE:
        return density(m, theta)
    p = m.p
    val = 2 / math.pi * (1 + 1 / p) * np.sin(t) ** 2 / (1 + 1 / p**2 - 2 / p * np.cos(2 * t))
    return _out(val, theta)


def moment_exact(m: AngleMeasure, n: int) -> Fraction:
    """``int (2cos t)^n dmu`` as an exact rational.

    Sato-Tate: ``h_n(0)`` (a Catalan number for even n).
    Plancherel: ``sum_j h_n(2j) p^{-j}``.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    h = h_coefficients(n).h
    if m.kind == SATO_TATE:
        return Fraction(h[0])
    return sum((Fraction(h[2 * j], m.p**j) for j in range(n // 2 + 1)), Fraction(0))


def moment(m: AngleMeasure, n: int) -> float:
    return float(moment_exact(m, n))


def _series_terms(p: int, tol: float = 1e-18) -> int:
    return max(1, int(math.ceil(-math.log(tol) / math.log(p))) + 1)


def cdf(m: AngleMeasure, theta):
    """Distribution function on [0, pi]; scalars or arrays.

    Sato-Tate uses ``(t - sin t cos t)/pi``.  Plancherel integrates the sine
    series term by term; the truncated tail is below 1e-17.
    """
    t = _check_theta(theta)
    if m.kind == SATO_TATE:
        val = (t - np.sin(t) * np.cos(t)) / math.pi
    else:
        # int_0^t sin u sin((2j+1)u) du
        #   = (sin(2j t)/(2j) - sin((2j+2) t)/(2j+2)) / 2, and (t - sin 2t / 2)/2 at j=0
        acc = (t - np.sin(2 * t) / 2) / 2
        for j in range(1, _series_terms(m.p)):
            acc = acc + m.p ** (-j) * (np.sin(2 * j * t) / (2 * j)
                                       - np.sin((2 * j + 2) * t) / (2 * j + 2)) / 2
        val = 2 / math.pi * acc
    val = np.clip(val, 0.0, 1.0)
    return _out(val, theta)


def integrate_against(m: AngleMeasure, f: Callable[[float], float],
                      a: float = 0.0, b: float = math.pi) -> float:
    """Adaptive Gauss-Kronrod quadrature of ``f * density`` over ``[a, b]``."""
    with warnings.catch_warnings():
        # quad warns when it cannot reach 1e-13 relative; the result is still far inside 1e-10
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(lambda t: f(t) * density(m, t), a, b,
                                epsabs=1e-14, epsrel=1e-13, limit=400)
    return val


def cdf_quadrature(m: AngleMeasure, theta: float) -> float:
    _check_theta(theta)
    return integrate_against(m, lambda t: 1.0, 0.0, float(theta))


def moment_quadrature(m: AngleMeasure, n: int) -> float:
    return integrate_against(m, lambda t: (2 * math.cos(t)) ** n)


def quantile(m: AngleMeasure, u: float) -> float:
    """Inverse CDF by bracketing root search."""
    if not 0.0 <= u <= 1.0:
        raise ValueError("u must lie in [0, 1]")
    if u == 0.0:
        return 0.0
    if u == 1.0:
        return math.pi
    return brentq(lambda t: cdf(m, t) - u, 0.0, math.pi, xtol=1e-15, rtol=1e-15)


def ks_distance(samples: Sequence[float], m: AngleMeasure) -> float:
    """Two-sided Kolmogorov-Smirnov distance of sorted angles from ``m``.

    ``max_i max(i/N - F(x_i), F(x_i) - (i-1)/N)``.
    """
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise ValueError("ks_distance needs at least one sample")
    if np.any(np.diff(x) < 0):
        raise ValueError("samples must be sorted")
    f = np.asarray(cdf(m, x), dtype=float)
    n = x.size
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))
