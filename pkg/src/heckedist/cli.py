"""Command-line front end.

    heckedist trace --weight 12 --index 2
    heckedist classnum --d 12
    heckedist moments --prime 2 --max-n 4 --measure plancherel --format csv
    heckedist density --measure plancherel --prime 3 --points 181 --format csv
    heckedist spectrum --weight 24 --prime 2 --digits 10 --format json
    heckedist scan --weights 950:1050 --prime 2 --jobs 4
    heckedist verify

Exit status: 0 success, 1 verification mismatch, 2 invalid parameters,
3 computational failure (for example uncertified roots), 4 cache I/O.
Errors go to stderr as a single JSON object.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .class_number import CacheError, default_cache_dir, hurwitz_H, hurwitz_table, SHARED_LOOKUP
from .exact_arith import int_to_decimal
from .measures import AngleMeasure, cdf, density, moment_exact, plancherel, sato_tate
from .spectra import MAX_DIGITS, RootIsolationError, SpectrumReport, distribution_scan, eigen_angles
from .trace_formula import check_prime, check_weight, trace_hecke

log = logging.getLogger("heckedist")

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_COMPUTE = 3
EXIT_CACHE = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- helpers -----------------------------------------------------------------

def _num(x, digits: int) -> str:
    return format(float(x), f".{digits}g")


def _csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj: dict, stamp: bool) -> str:
    if stamp:
        obj = dict(obj)
        obj["metadata"] = {"generated": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
                           "version": __version__}
    return json.dumps(obj, indent=2) + "\n"


def _measure(args) -> AngleMeasure:
    if args.measure == "sato_tate":
        return sato_tate()
    if args.prime is None:
        raise UsageError("--prime is required for the plancherel measure")
    return plancherel(args.prime)


def _weights(spec: str) -> list[int]:
    try:
        if ":" in spec:
            lo, hi = (int(s) for s in spec.split(":"))
            ks = [k for k in range(lo, hi + 1) if k % 2 == 0 and k >= 4]
        else:
            ks = [int(s) for s in spec.split(",") if s]
    except ValueError:
        raise UsageError(f"bad weight list {spec!r}; use a:b or k1,k2,...") from None
    if not ks:
        raise UsageError(f"weight list {spec!r} is empty")
    return ks


def _warm_hurwitz(args, d_max: int) -> None:
    """Seed the shared H(d) table from the on-disk cache when one is configured."""
    cache_dir = args.cache_dir or default_cache_dir()
    if cache_dir is not None and d_max >= 3:
        SHARED_LOOKUP.preload(hurwitz_table(min(d_max, SHARED_LOOKUP.sieve_limit), cache_dir))


# -- commands ----------------------------------------------------------------

def cmd_trace(args) -> str:
    check_weight(args.weight)
    if args.index < 1:
        raise ValueError(f"--index must be >= 1, got {args.index}")
    _warm_hurwitz(args, 4 * args.index)
    value = trace_hecke(args.weight, args.index)
    if args.format == "json":
        return _json({"weight": args.weight, "index": args.index, "trace": int_to_decimal(value)}, args.stamp)
    if args.format == "csv":
        return _csv(["weight", "index", "trace"], [[args.weight, args.index, int_to_decimal(value)]])
    return int_to_decimal(value) + "\n"


def cmd_classnum(args) -> str:
    if args.d is None and args.max is None:
        raise UsageError("give --d or --max")
    if args.d is not None:
        table = {args.d: hurwitz_H(args.d)}
    else:
        table = hurwitz_table(args.max, args.cache_dir or default_cache_dir())
    if args.format == "json":
        return _json({"hurwitz": [{"d": d, "value": str(h)} for d, h in sorted(table.items())]},
                     args.stamp)
    if args.format == "csv":
        return _csv(["d", "numerator", "denominator"],
                    [[d, h.numerator, h.denominator] for d, h in sorted(table.items())])
    return "".join(f"{h}\n" if args.d is not None else f"{d} {h}\n" for d, h in sorted(table.items()))


def cmd_moments(args) -> str:
    m = _measure(args)
    if args.max_n < 0:
        raise ValueError(f"--max-n must be >= 0, got {args.max_n}")
    rows = [(n, moment_exact(m, n)) for n in range(args.max_n + 1)]
    if args.format == "json":
        return _json({"measure": str(m),
                      "moments": [{"n": n, "moment": _num(v, args.digits), "exact": str(v)}
                                  for n, v in rows]}, args.stamp)
    if args.format == "csv":
        return _csv(["n", "moment"], [[n, _num(v, args.digits)] for n, v in rows])
    return "".join(f"{n} {_num(v, args.digits)}\n" for n, v in rows)


def cmd_density(args) -> str:
    m = _measure(args)
    if args.points < 2:
        raise ValueError(f"--points must be >= 2, got {args.points}")
    theta = np.linspace(0.0, np.pi, args.points)
    dens = density(m, theta)
    cum = cdf(m, theta)
    rows = [[_num(t, args.digits), _num(f, args.digits), _num(c, args.digits)]
            for t, f, c in zip(theta, dens, cum)]
    if args.format == "json":
        return _json({"measure": str(m),
                      "points": [dict(zip(("theta", "density", "cdf"), r)) for r in rows]}, args.stamp)
    if args.format == "csv":
        return _csv(["theta", "density", "cdf"], rows)
    return "".join(" ".join(r) + "\n" for r in rows)


def _check_digits(digits: int) -> None:
    if not 1 <= digits <= MAX_DIGITS:
        raise ValueError(f"--digits must be in [1, {MAX_DIGITS}], got {digits}")


def cmd_spectrum(args) -> str:
    check_weight(args.weight)
    check_prime(args.prime)
    _check_digits(args.digits)
    report = eigen_angles(args.weight, args.prime, args.digits, method=args.method)
    if args.format == "json":
        return _json(report.to_json_dict(), args.stamp)
    if args.format == "csv":
        return _csv(["angle", "eigenvalue"], list(zip(report.angles, report.normalized_eigenvalues)))
    lines = [f"weight {report.k}  prime {report.p}  dim {report.dim}"]
    lines += [f"{t}  {a}" for t, a in zip(report.angles, report.normalized_eigenvalues)]
    if report.dim:
        lines.append(f"ks plancherel {report.ks_plancherel:.6f}  sato_tate {report.ks_sato_tate:.6f}")
    return "\n".join(lines) + "\n"


def cmd_scan(args) -> str:
    ks = _weights(args.weights)
    for k in ks:
        check_weight(k)
    check_prime(args.prime)
    _check_digits(args.digits)
    scan = distribution_scan(ks, args.prime, args.digits, jobs=args.jobs)
    if args.format == "json":
        return _json(scan.to_json_dict(), args.stamp)
    if args.format == "csv":
        return _csv(["weight", "angle", "eigenvalue"],
                    [[r.k, t, a] for r in scan.per_weight
                     for t, a in zip(r.angles, r.normalized_eigenvalues)])
    return (f"prime {scan.p}  weights {len(scan.weights)}  angles {scan.count}\n"
            f"ks plancherel {scan.ks_plancherel:.6f}  sato_tate {scan.ks_sato_tate:.6f}\n")


def cmd_verify(args) -> str:
    from .verify import SUITES, run_suite

    names = list(SUITES) if not args.suite else args.suite
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s) {unknown}; choose from {sorted(SUITES)}")
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(run_suite, names))
    else:
        results = [run_suite(n) for n in names]
    args.failed = not all(ok for _, ok, _ in results)
    if args.format == "json":
        return _json({"suites": [{"name": n, "passed": ok, "detail": d} for n, ok, d in results],
                      "passed": not args.failed}, args.stamp)
    if args.format == "csv":
        return _csv(["suite", "passed", "detail"], [[n, ok, d] for n, ok, d in results])
    return "".join(f"{'PASS' if ok else 'FAIL'} {n}: {d}\n" for n, ok, d in results)


COMMANDS: dict[str, Callable] = {
    "trace": cmd_trace,
    "classnum": cmd_classnum,
    "moments": cmd_moments,
    "density": cmd_density,
    "spectrum": cmd_spectrum,
    "scan": cmd_scan,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--digits", type=int, default=12, help="decimal digits in numeric output")
    common.add_argument("--cache-dir", default=None,
                        help="Hurwitz cache directory (overrides $HECKEDIST_CACHE_DIR)")
    common.add_argument("--stamp", action="store_true", help="add a generated timestamp to JSON output")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for scan and verify")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="heckedist", description="Hecke traces, spectra and eigenangle statistics.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("trace", parents=[common], help="exact trace of T_n on S_k")
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--index", type=int, required=True)

    p = sub.add_parser("classnum", parents=[common], help="Hurwitz class numbers")
    p.add_argument("--d", type=int)
    p.add_argument("--max", type=int, help="table of H(d) for d <= MAX")

    for name, helptext in (("moments", "moments of an angle measure"),
                           ("density", "density and CDF of an angle measure on a grid")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--measure", choices=("plancherel", "sato_tate"), default="plancherel")
        p.add_argument("--prime", type=int)
        if name == "moments":
            p.add_argument("--max-n", type=int, default=12)
        else:
            p.add_argument("--points", type=int, default=181)

    p = sub.add_parser("spectrum", parents=[common], help="certified eigenangles of T_p on S_k")
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--method", choices=("auto", "trace", "hecke"), default="auto")

    p = sub.add_parser("scan", parents=[common], help="eigenangles pooled over several weights")
    p.add_argument("--weights", required=True, help="a:b (all even weights in range) or k1,k2,...")
    p.add_argument("--prime", type=int, required=True)

    p = sub.add_parser("verify", parents=[common], help="oracle and invariant checks")
    p.add_argument("--suite", action="append", help="run only this suite (repeatable)")
    return parser


def _fail(code: int, kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": {"code": code, "kind": kind, "message": message}}) + "\n")
    return code


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.jobs < 1:
            raise UsageError(f"--jobs must be >= 1, got {args.jobs}")
        if args.command not in ("spectrum", "scan"):
            _check_digits(args.digits)
        if args.command == "moments" or args.command == "density":
            if args.prime is not None:
                check_prime(args.prime)
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        out = COMMANDS[args.command](args)
    except UsageError as exc:
        return _fail(EXIT_USAGE, "invalid_parameters", str(exc))
    except CacheError as exc:
        return _fail(EXIT_CACHE, "cache_io", str(exc))
    except (RootIsolationError, ArithmeticError) as exc:
        return _fail(EXIT_COMPUTE, "computation", str(exc))
    except ValueError as exc:
        return _fail(EXIT_USAGE, "invalid_parameters", str(exc))
    sys.stdout.write(out)
    return EXIT_MISMATCH if getattr(args, "failed", False) else EXIT_OK


def load_spectrum_json(text: str) -> SpectrumReport:
    """Parse ``spectrum --format json`` output back into a report."""
    return SpectrumReport.from_json_dict(json.loads(text))


if __name__ == "__main__":
    sys.exit(main())
