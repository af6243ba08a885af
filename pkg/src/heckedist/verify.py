"""Self-checks run by ``heckedist verify``.

Each suite compares two independent routes to the same quantity and
returns ``(name, passed, detail)``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable

from .chebyshev_moments import h_closed_form, h_coefficients, h_integral, trace_power
from .class_number import form_weight, hurwitz_H, hurwitz_table, reduced_forms
from .exact_arith import charpoly_power_sums
from .measures import PLANCHEREL, AngleMeasure, integrate_against, moment_exact, moment_quadrature, sato_tate
from .qexp_oracle import charpoly, delta, hecke_matrix, oracle_trace
from .spectra import char_poly_tp
from .trace_formula import dim_cusp_forms, trace_hecke


def _hurwitz() -> str:
    table = hurwitz_table(10_000)
    for d, h in table.items():
        direct = sum((form_weight(f) for f in reduced_forms(d)), Fraction(0))
        if not h == hurwitz_H(d) == direct:
            raise AssertionError(f"H({d}): sieve {h}, hurwitz_H {hurwitz_H(d)}, forms {direct}")
    return f"{len(table)} discriminants <= 10^4"


def _tau() -> str:
    tau = delta(50)
    for n in range(1, 51):
        if trace_hecke(12, n) != tau[n]:
            raise AssertionError(f"trace_hecke(12, {n}) != tau({n})")
    return "n <= 50"


def _integrality() -> str:
    # trace_hecke raises unless the rational total is an integer
    count = sum(1 for k in range(4, 61, 2) for n in range(1, 61) if trace_hecke(k, n) is not None)
    return f"{count} pairs, k <= 60, n <= 60"


def _oracle_trace() -> str:
    for k in range(4, 61, 2):
        for n in range(1, 21):
            a, b = trace_hecke(k, n), oracle_trace(k, n)
            if a != b:
                raise AssertionError(f"k={k} n={n}: trace formula {a}, q-expansions {b}")
    return "k <= 60, n <= 20"


def _chebyshev() -> str:
    for n in range(41):
        h = h_coefficients(n).h
        if list(h) != [h_closed_form(n, j) for j in range(n + 1)]:
            raise AssertionError(f"h_{n}: recurrence and closed form differ")
        if sum(c * (j + 1) for j, c in enumerate(h)) != 2**n:
            raise AssertionError(f"h_{n}: sum h(j)(j+1) != 2^{n}")
    worst = max(abs(h_integral(n, j) - h_coefficients(n).h[j]) for n in range(13) for j in range(n + 1))
    if worst > 1e-9:
        raise AssertionError(f"quadrature differs by {worst:.2e}")
    return f"n <= 40 exact, n <= 12 quadrature (max err {worst:.1e})"


def _measures() -> str:
    worst = 0.0
    for m in [sato_tate()] + [AngleMeasure(PLANCHEREL, p) for p in (2, 3, 5, 7, 11, 101)]:
        worst = max(worst, abs(integrate_against(m, lambda t: 1.0) - 1.0))
    if worst > 1e-10:
        raise AssertionError(f"total mass off by {worst:.2e}")
    mom = 0.0
    for p in (2, 3, 5, 7):
        m = AngleMeasure(PLANCHEREL, p)
        for n in range(13):
            mom = max(mom, abs(float(moment_exact(m, n)) - moment_quadrature(m, n)))
    if mom > 1e-9:
        raise AssertionError(f"moments off by {mom:.2e}")
    return f"mass err {worst:.1e}, moment err {mom:.1e}"


def _charpoly() -> str:
    count = 0
    for k in range(4, 41, 2):
        for p in (2, 3, 5):
            cp = char_poly_tp(k, p)
            if cp.degree != dim_cusp_forms(k):
                raise AssertionError(f"k={k} p={p}: degree {cp.degree}")
            if cp.degree == 0:
                continue
            oracle = [Fraction(c) for c in charpoly(hecke_matrix(k, p))]
            if [Fraction(c) for c in cp.coefficients] != oracle:
                raise AssertionError(f"k={k} p={p}: char poly differs from the q-expansion matrix")
            sums = charpoly_power_sums(cp.coefficients, cp.degree)
            if sums != [trace_power(k, p, n) for n in range(1, cp.degree + 1)]:
                raise AssertionError(f"k={k} p={p}: power sums differ from trace powers")
            count += 1
    return f"{count} nonzero spaces, k <= 40, p in (2, 3, 5)"


SUITES: dict[str, Callable[[], str]] = {
    "hurwitz": _hurwitz,
    "tau": _tau,
    "integrality": _integrality,
    "oracle_trace": _oracle_trace,
    "chebyshev": _chebyshev,
    "measures": _measures,
    "charpoly": _charpoly,
}


def run_suite(name: str) -> tuple[str, bool, str]:
    try:
        return name, True, SUITES[name]()
    except Exception as exc:  # a crash is a failed check, reported not raised
        return name, False, f"{type(exc).__name__}: {exc}"
