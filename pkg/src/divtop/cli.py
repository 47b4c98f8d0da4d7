"""``divtop`` command line: Betti numbers, verification sweeps, series and
convergence reports.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 range or
resource error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import asymptotics, verify
from .betti import BettiVector, Method, betti_delta, betti_delta_shifted_count, betti_delta_tilde
from .oracle import (
    DEFAULT_FACE_CAP,
    ComplexTooLarge,
    MulticomplexError,
    build_delta_complex,
    homology_betti,
    multicomplex_betti,
    parse_multicomplex,
)
from .sieve import (
    DEFAULT_BUDGET,
    NumberTables,
    RangeError,
    SieveBudgetError,
    build_tables,
    segmented_summatory,
)

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_RANGE = 3

FORMATS = ("table", "csv", "json")
SERIES = ("mertens", "liouville", "sigma", "sigma-odd-k")
METHODS = {
    "delta": ("formula", "count", "oracle"),
    "delta-tilde": ("wedge", "oracle"),
}


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    limit: int | None
    counter_limit: int | None
    face_cap: int
    threads: int
    fmt: str
    output: str | None
    segment_length: int | None

    def __post_init__(self):
        if self.face_cap < 1:
            raise UsageError("face cap must be >= 1")
        if self.threads < 1:
            raise UsageError("thread count must be >= 1")
        if self.limit is not None and self.limit < 1:
            raise UsageError("limit must be >= 1")
        if self.counter_limit is not None:
            if self.counter_limit < 0:
                raise UsageError("counter limit must be >= 0")
            if self.limit is not None and self.counter_limit > self.limit:
                raise UsageError(f"counter limit {self.counter_limit} exceeds limit {self.limit}")

    def tables(self, need: int) -> NumberTables:
        """Tables covering ``need``; an explicit ``--limit`` below it is a range error."""
        need = max(need, 1)
        limit = need if self.limit is None else self.limit
        if limit < need:
            raise RangeError(f"n = {need} exceeds --limit {limit}")
        counter_limit = self.counter_limit
        if counter_limit is not None and counter_limit < need:
            raise RangeError(f"n = {need} exceeds --counter-limit {counter_limit}")
        return build_tables(
            limit,
            counter_limit,
            budget=DEFAULT_BUDGET,
            segment_length=self.segment_length,
            threads=self.threads,
        )


def parse_int(text: str) -> int:
    """Integers, with ``10^6`` and ``1e6`` shorthands."""
    s = text.strip().replace("_", "")
    try:
        if "^" in s:
            base, exp = s.split("^")
            return int(base) ** int(exp)
        if "e" in s.lower():
            mant, exp = s.lower().split("e")
            value = float(mant) * 10 ** int(exp)
            if value != int(value):
                raise ValueError
            return int(value)
        return int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None


def parse_range(text: str) -> tuple[int, int]:
    if ".." not in text:
        raise argparse.ArgumentTypeError(f"range must look like a..b, got {text!r}")
    a, b = text.split("..", 1)
    return parse_int(a), parse_int(b)


def parse_ns(values: list[str]) -> list[int]:
    out = []
    for v in values:
        out.extend(parse_int(x) for x in v.split(",") if x.strip())
    return out


def _env_int(name: str, default):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return parse_int(raw)
    except argparse.ArgumentTypeError:
        raise UsageError(f"{name}={raw!r} is not an integer") from None


def _add_common(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--limit", type=parse_int, default=d(None), help="sieve limit N (env DIVTOP_LIMIT)")
    p.add_argument("--counter-limit", type=parse_int, default=d(None), help="weight counter limit, <= N")
    p.add_argument("--face-cap", type=parse_int, default=d(None), help="largest complex the oracle will build (env DIVTOP_FACE_CAP)")
    p.add_argument("--threads", type=parse_int, default=d(None), help="worker count (env DIVTOP_THREADS); 1 is the sequential path")
    p.add_argument("--format", dest="fmt", choices=FORMATS, default=d("table"))
    p.add_argument("--output", "-o", default=d(None), help="write to this file instead of stdout")
    p.add_argument("--segment-length", type=parse_int, default=d(None), help="sieve block length")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="divtop", description=__doc__.splitlines()[0])
    _add_common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("betti", help="Betti numbers of Delta_n or DeltaTilde_n")
    _add_common(p, suppress=True)
    p.add_argument("--n", type=parse_int, default=None)
    p.add_argument("--complex", choices=tuple(METHODS), default="delta")
    p.add_argument("--method", choices=("formula", "count", "oracle", "wedge"), default=None)
    p.add_argument("--multicomplex-file", default=None, help="compute the oracle on a multicomplex read from file")

    p = sub.add_parser("verify", help="run verification sweeps")
    _add_common(p, suppress=True)
    p.add_argument("--suite", choices=verify.SUITES + ("all",), default="all")
    p.add_argument("--max-n", type=parse_int, default=2000)

    p = sub.add_parser("series", help="emit an arithmetic series")
    _add_common(p, suppress=True)
    p.add_argument("--quantity", choices=SERIES, required=True)
    p.add_argument("--k", type=int, default=1, help="weight for sigma-odd-k")
    p.add_argument("--range", dest="span", type=parse_range, required=True, help="a..b, inclusive")
    p.add_argument("--stride", type=parse_int, default=1)

    p = sub.add_parser("asymptotics", help="measured values against leading terms")
    _add_common(p, suppress=True)
    p.add_argument("report", choices=asymptotics.REPORTS)
    p.add_argument("--ns", nargs="+", required=True, help="values of n, space or comma separated")
    p.add_argument("--k", type=int, default=0, help="Betti index for fixed-k")
    return parser


def make_config(args) -> RunConfig:
    threads = args.threads if args.threads is not None else _env_int("DIVTOP_THREADS", os.cpu_count() or 1)
    face_cap = args.face_cap if args.face_cap is not None else _env_int("DIVTOP_FACE_CAP", DEFAULT_FACE_CAP)
    limit = args.limit if args.limit is not None else _env_int("DIVTOP_LIMIT", None)
    return RunConfig(limit, args.counter_limit, face_cap, threads, args.fmt, args.output, args.segment_length)


# --- betti -------------------------------------------------------------------


def _wedge_of_oracles(n: int, tables: NumberTables, face_cap: int) -> BettiVector:
    """``DeltaTilde_n`` as a wedge over squares, each piece through SNF homology."""
    vals: dict[int, int] = defaultdict(int)
    omega = tables.table.omega
    for r in range(1, math.isqrt(n) + 1):
        piece = homology_betti(build_delta_complex(n // (r * r), tables.table, face_cap), face_cap).betti
        for k, v in piece.values.items():
            vals[k + 2 * int(omega[r])] += v
    return BettiVector(n, vals, Method.HOMOLOGY_ORACLE)


def _betti_rows(bv: BettiVector) -> list[tuple[int, int]]:
    lo = -1 if bv[-1] else 0
    return [(k, bv[k]) for k in range(lo, max(bv.top, lo) + 1)]


def cmd_betti(args, cfg: RunConfig) -> tuple[str, int]:
    method = args.method or ("formula" if args.complex == "delta" else "wedge")
    if args.multicomplex_file:
        if method != "oracle":
            raise UsageError("--multicomplex-file needs --method oracle")
        mc = parse_multicomplex(Path(args.multicomplex_file).read_text())
        mc.validate()
        bv = multicomplex_betti(mc, cfg.face_cap, n=args.n or 0)
        return _format_betti(bv, "multicomplex", method, None, cfg.fmt), EXIT_OK
    if args.n is None:
        raise UsageError("--n is required")
    if method not in METHODS[args.complex]:
        raise UsageError(f"method {method!r} does not apply to {args.complex}; choose from {METHODS[args.complex]}")
    n = args.n
    if n < 1:
        raise UsageError(f"n must be >= 1, got {n}")
    tables = cfg.tables(n)
    if args.complex == "delta":
        if method == "formula":
            bv = betti_delta(n, tables.counters)
        elif method == "count":
            bv = betti_delta_shifted_count(n, tables.table)
        else:
            bv = homology_betti(build_delta_complex(n, tables.table, cfg.face_cap), cfg.face_cap).betti
        expected = ("M", int(tables.summatory.mertens[n]))
    else:
        if method == "wedge":
            bv = betti_delta_tilde(n, tables.counters, tables.table)
        else:
            bv = _wedge_of_oracles(n, tables, cfg.face_cap)
        expected = ("L", int(tables.summatory.liouville[n]))
    text = _format_betti(bv, args.complex, method, expected, cfg.fmt)
    code = EXIT_OK if bv.euler_sum() == expected[1] else EXIT_VERIFY
    return text, code


def _format_betti(bv: BettiVector, cx: str, method: str, expected, fmt: str) -> str:
    rows = _betti_rows(bv)
    euler = bv.euler_sum()
    if fmt == "json":
        doc = {
            "n": bv.n,
            "complex": cx,
            "method": method,
            "betti": {str(k): v for k, v in rows},
            "euler_sum": euler,
        }
        if expected is not None:
            doc[expected[0]] = expected[1]
        return json.dumps(doc, indent=1) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("n", "complex", "method", "k", "beta"))
        for k, v in rows:
            w.writerow((bv.n, cx, method, k, v))
        return buf.getvalue()
    lines = [f"n={bv.n} complex={cx} method={method}", f"{'k':>4}  beta_k"]
    lines += [f"{k:>4}  {v}" for k, v in rows]
    tail = f"euler: sum (-1)^(k-1) beta_k = {euler}"
    if expected is not None:
        tail += f"; {expected[0]}({bv.n}) = {expected[1]}"
    lines.append(tail)
    return "\n".join(lines) + "\n"


# --- verify ------------------------------------------------------------------


def cmd_verify(args, cfg: RunConfig) -> tuple[str, int]:
    if args.max_n < 0:
        raise UsageError("--max-n must be >= 0")
    tables = cfg.tables(args.max_n)
    results = verify.run_suite(args.suite, args.max_n, threads=cfg.threads, face_cap=cfg.face_cap, tables=tables)
    ok = all(r.ok for r in results)
    if cfg.fmt == "json":
        text = json.dumps({"ok": ok, "suites": [r.as_dict() for r in results]}, indent=1) + "\n"
    elif cfg.fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("suite", "max_n", "ok", "failures"))
        for r in results:
            w.writerow((r.name, r.max_n, int(r.ok), len(r.failures)))
        text = buf.getvalue()
    else:
        text = verify.render(results)
    return text, EXIT_OK if ok else EXIT_VERIFY


# --- series ------------------------------------------------------------------


def series_values(quantity: str, ns: np.ndarray, tables: NumberTables, k: int = 1) -> np.ndarray:
    if quantity == "mertens":
        return tables.summatory.mertens[ns]
    if quantity == "liouville":
        return tables.summatory.liouville[ns]
    if quantity == "sigma":
        return tables.counters.sigma(ns)
    if quantity == "sigma-odd-k":
        return tables.counters.sigma_k_odd(k, ns)
    raise UsageError(f"unknown quantity {quantity!r}")


def cmd_series(args, cfg: RunConfig) -> tuple[str, int]:
    a, b = args.span
    if args.stride < 1:
        raise UsageError("--stride must be >= 1")
    if a < 0:
        raise UsageError("range start must be >= 0")
    ns = np.arange(a, b + 1, args.stride, dtype=np.int64)
    if len(ns):
        tables = cfg.tables(int(ns[-1]))
        vals = [int(v) for v in np.asarray(series_values(args.quantity, ns, tables, args.k))]
    else:
        vals = []
    pairs = list(zip((int(n) for n in ns), vals))
    if cfg.fmt == "json":
        return json.dumps([{"n": n, "value": v} for n, v in pairs]) + "\n", EXIT_OK
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("n", "value"))
    w.writerows(pairs)
    return buf.getvalue(), EXIT_OK


# --- asymptotics -------------------------------------------------------------


def cmd_asymptotics(args, cfg: RunConfig) -> tuple[str, int]:
    ns = parse_ns(args.ns)
    if any(n < 1 for n in ns):
        raise UsageError("every n must be >= 1")
    values = None
    need = max(ns, default=1)
    if args.report == "growth" and cfg.limit is not None and need > cfg.limit:
        # stream past the table limit instead of materializing it
        values = segmented_summatory(need, ns, segment_length=cfg.segment_length or 2**22)
        tables = None
    else:
        tables = cfg.tables(need)
    rows = asymptotics.run_report(args.report, ns, tables, k=args.k, values=values)
    if cfg.fmt == "json":
        return asymptotics.rows_to_json(rows), EXIT_OK
    if cfg.fmt == "csv":
        return asymptotics.rows_to_csv(rows), EXIT_OK
    lines = [f"{'quantity':<24}{'n':>12}{'measured':>14}{'predicted':>18}{'ratio':>12}"]
    for r in rows:
        lines.append(f"{r.quantity:<24}{r.n:>12}{r.measured:>14}{r.predicted:>18.6g}{r.ratio:>12.6f}")
    return "\n".join(lines) + "\n", EXIT_OK


COMMANDS = {
    "betti": cmd_betti,
    "verify": cmd_verify,
    "series": cmd_series,
    "asymptotics": cmd_asymptotics,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = make_config(args)
        text, code = COMMANDS[args.command](args, cfg)
    except (UsageError, MulticomplexError) as exc:
        print(f"divtop: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RangeError, SieveBudgetError, ComplexTooLarge, MemoryError) as exc:
        print(f"divtop: range error: {exc}", file=sys.stderr)
        return EXIT_RANGE
    except OSError as exc:
        print(f"divtop: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
