"""Hurwitz class numbers H(d) for discriminants -d < 0.

Three independent routes are kept on purpose:

* :func:`reduced_forms` walks the leading coefficient ``a`` and lists
  every reduced form;
* :func:`hurwitz_H` walks the middle coefficient ``b`` and counts divisors;
* :func:`hurwitz_table` is a numpy sieve over all forms up to a bound.

Forms proportional to ``x^2 + y^2`` count 1/2 and forms proportional to
``x^2 + xy + y^2`` count 1/3.  With these weights ``6*H(d)`` is an integer,
which is what the sieve stores.
"""
from __future__ import annotations

import functools
import logging
import os
import tempfile
import threading
from fractions import Fraction
from math import isqrt
from pathlib import Path

import numpy as np

log = logging.getLogger(__name__)

CACHE_VERSION = "v1"
CACHE_FILENAME = "hurwitz_v1.csv"
CACHE_ENV = "HECKEDIST_CACHE_DIR"


class CacheError(OSError):
    """Persistent Hurwitz cache could not be read or written."""


def _check_disc(d: int) -> None:
    if d <= 0:
        raise ValueError(f"H(d) needs d > 0, got {d}")
    if d % 4 not in (0, 3):
        raise ValueError(f"no forms of discriminant -{d}: need d = 0, 3 mod 4")


def reduced_forms(d: int) -> list[tuple[int, int, int]]:
    """Reduced positive-definite forms ``(a, b, c)`` with ``b^2 - 4ac = -d``.

    Reduced means ``|b| <= a <= c`` with ``b >= 0`` whenever ``|b| = a`` or
    ``a = c``; the list is sorted lexicographically.
    """
    _check_disc(d)
    forms = []
    for a in range(1, isqrt(d // 3) + 1):
        for b in range(-a + 1, a + 1):
            num = b * b + d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            forms.append((a, b, c))
    forms.sort()
    return forms


def form_weight(form: tuple[int, int, int]) -> Fraction:
    a, b, c = form
    if b == 0 and a == c:
        return Fraction(1, 2)
    if a == b == c:
        return Fraction(1, 3)
    return Fraction(1)


_SMALL_PRIMES: list[int] = []


def _primes_upto(n: int) -> list[int]:
    global _SMALL_PRIMES
    if not _SMALL_PRIMES or _SMALL_PRIMES[-1] < n:
        limit = max(n, 1 << 12)
        sieve = np.ones(limit + 1, dtype=bool)
        sieve[:2] = False
        for q in range(2, isqrt(limit) + 1):
            if sieve[q]:
                sieve[q * q :: q] = False
        _SMALL_PRIMES = np.flatnonzero(sieve).tolist()
    return _SMALL_PRIMES


def _divisors(n: int) -> list[int]:
    divs = [1]
    rest = n
    for q in _primes_upto(isqrt(n) + 1):
        if q * q > rest:
            break
        if rest % q:
            continue
        e = 0
        while rest % q == 0:
            rest //= q
            e += 1
        divs = [x * q**i for x in divs for i in range(e + 1)]
    if rest > 1:
        divs += [x * rest for x in divs]
    return divs


@functools.lru_cache(maxsize=1 << 16)
def hurwitz_H(d: int) -> Fraction:
    """Weighted count of reduced forms of discriminant ``-d``."""
    _check_disc(d)
    six_h = 0
    for b in range(d % 2, isqrt(d // 3) + 1, 2):
        n = (b * b + d) // 4
        for a in _divisors(n):
            if a < max(b, 1) or a * a > n:
                continue
            c = n // a
            if b == 0:
                six_h += 3 if a == c else 6
            elif b == a:
                six_h += 2 if a == c else 6
            else:
                six_h += 6 if a == c else 12
    return Fraction(six_h, 6)


def _sieve_six_h(d_max: int) -> np.ndarray:
    """Array ``out[d] = 6*H(d)`` for ``0 <= d <= d_max`` (zero where undefined)."""
    out = np.zeros(d_max + 1, dtype=np.int64)
    for a in range(1, isqrt(d_max // 3) + 1):
        b = np.arange(-a + 1, a + 1, dtype=np.int64)
        c_hi = (d_max + b * b) // (4 * a)
        width = int(c_hi.max()) - a + 1
        if width <= 0:
            continue
        c = np.arange(a, a + width, dtype=np.int64)
        bb, cc = np.meshgrid(b, c, indexing="ij")
        disc = 4 * a * cc - bb * bb
        keep = (disc <= d_max) & ~((cc == a) & (bb < 0))
        w = np.full(disc.shape, 6, dtype=np.int64)
        w[(bb == 0) & (cc == a)] = 3
        w[(bb == a) & (cc == a)] = 2
        out += np.bincount(disc[keep], weights=w[keep], minlength=d_max + 1).astype(np.int64)
    return out


def default_cache_dir() -> Path | None:
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else None


def _read_cache(path: Path, d_max: int) -> dict[int, Fraction] | None:
    try:
        with open(path) as fh:
            header = fh.readline().strip()
            prefix = f"# hurwitz {CACHE_VERSION} d_max="
            if not header.startswith(prefix):
                raise CacheError(f"{path}: unrecognised header {header!r}")
            cached_max = int(header[len(prefix):])
            if cached_max < d_max:
                return None
            table = {}
            for line in fh:
                d, num, den = line.strip().split(",")
                if int(d) <= d_max:
                    table[int(d)] = Fraction(int(num), int(den))
            return table
    except FileNotFoundError:
        return None
    except (OSError, ValueError) as exc:
        raise CacheError(f"cannot read Hurwitz cache {path}: {exc}") from exc


def _write_cache(path: Path, d_max: int, table: dict[int, Fraction]) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".hurwitz-", suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            fh.write(f"# hurwitz {CACHE_VERSION} d_max={d_max}\n")
            for d in sorted(table):
                h = table[d]
                fh.write(f"{d},{h.numerator},{h.denominator}\n")
        os.replace(tmp, path)
    except OSError as exc:
        raise CacheError(f"cannot write Hurwitz cache {path}: {exc}") from exc


def hurwitz_table(d_max: int, cache_dir: str | Path | None = None) -> dict[int, Fraction]:
    """``{d: H(d)}`` for every valid ``3 <= d <= d_max``.

    With ``cache_dir`` set, a table covering ``d_max`` is read from
    ``hurwitz_v1.csv`` when present and otherwise computed and written
    atomically.
    """
    if d_max < 3:
        raise ValueError(f"hurwitz_table needs d_max >= 3, got {d_max}")
    path = Path(cache_dir) / CACHE_FILENAME if cache_dir is not None else None
    if path is not None:
        cached = _read_cache(path, d_max)
        if cached is not None:
            return cached
    six_h = _sieve_six_h(d_max)
    table = {
        d: Fraction(int(six_h[d]), 6)
        for d in range(3, d_max + 1)
        if d % 4 in (0, 3)
    }
    if path is not None:
        _write_cache(path, d_max, table)
        log.info("wrote Hurwitz cache %s (d_max=%d)", path, d_max)
    return table


class HurwitzLookup:
    """Shared read-mostly H(d) source for the trace formula.

    Values up to ``sieve_limit`` come from a sieve grown on demand (under a
    lock); larger ``d`` fall back to :func:`hurwitz_H`.
    """

    def __init__(self, sieve_limit: int = 1 << 20):
        self.sieve_limit = sieve_limit
        self._six_h = np.zeros(1, dtype=np.int64)
        self._lock = threading.Lock()

    def ensure(self, d_max: int) -> None:
        d_max = min(d_max, self.sieve_limit)
        if d_max < len(self._six_h):
            return
        with self._lock:
            if d_max >= len(self._six_h):
                size = max(d_max, 2 * len(self._six_h), 1024)
                self._six_h = _sieve_six_h(min(size, self.sieve_limit))

    def preload(self, table: dict[int, Fraction]) -> None:
        """Adopt a precomputed table (for instance one read from the cache)."""
        d_max = min(max(table), self.sieve_limit)
        if d_max < len(self._six_h):
            return
        six_h = np.zeros(d_max + 1, dtype=np.int64)
        for d, h in table.items():
            if d <= d_max:
                six_h[d] = int(h * 6)
        with self._lock:
            if d_max >= len(self._six_h):
                self._six_h = six_h

    def six_h(self, d: int) -> int:
        """``6*H(d)`` as an integer."""
        if d < len(self._six_h):
            return int(self._six_h[d])
        if d <= self.sieve_limit:
            self.ensure(d)
            return int(self._six_h[d])
        return int(hurwitz_H(d) * 6)

    def __call__(self, d: int) -> Fraction:
        _check_disc(d)
        return Fraction(self.six_h(d), 6)


SHARED_LOOKUP = HurwitzLookup()
