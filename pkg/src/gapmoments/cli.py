"""Command-line front end: single moments, b-sweeps, tables and the verification suite.

Output is CSV with 17 significant digits (or JSON with the same fields).
Exit codes: 0 success, 1 domain error, 2 convergence failure, 3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import verify
from .errors import ConvergenceError, DomainError
from .geometry import Method, MomentQuery, SetKind, check_b, cos_phi_e4, complement
from .moments import moment
from .quadrature import QuadratureSpec

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_CONVERGENCE = 2
EXIT_VERIFY = 3

HEADER = ("b", "n", "mu", "method", "value", "err", "count")
THREADS_ENV = "GAPMOMENTS_THREADS"


def fmt(v) -> str:
    if isinstance(v, float):
        return format(v + 0.0, ".17g")  # folds -0.0 into 0
    return str(v)


def _thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _ordered_map(fn, items):
    """Map ``fn`` over ``items``, concurrently if requested, keeping input order."""
    threads = _thread_count()
    if threads == 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _emit(rows, header, as_json: bool, out) -> None:
    if as_json:
        objs = [dict(zip(header, r)) for r in rows]
        json.dump(objs, out, indent=2, allow_nan=True)
        out.write("\n")
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) for v in r])


def _record(q: MomentQuery, res) -> tuple:
    b = q.b if q.b is not None else 0.0
    return (b, q.n, q.mu, res.method.value, res.value, res.error_estimate, res.terms_or_nodes)


def _spec(tol: float | None) -> QuadratureSpec:
    if tol is None:
        return QuadratureSpec()
    return QuadratureSpec(abs_tol=tol, rel_tol=tol)


# --- moment ------------------------------------------------------------------


def cmd_moment(args, out=sys.stdout) -> int:
    q = MomentQuery(SetKind(args.set), args.n, args.mu, args.b)
    kw = {"spec": _spec(args.tol)}
    if args.tol is not None:
        kw["tol"] = args.tol
    res = moment(q, Method(args.method), **kw)
    _emit([_record(q, res)], HEADER, args.json, out)
    return EXIT_OK


# --- sweep -------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRequest:
    kind: SetKind
    odd: bool
    n: int  # half-order: the power is 2n + odd
    mu: float
    b_grid: tuple[float, float, int]
    methods: tuple[Method, ...]

    def __post_init__(self):
        start, stop, count = self.b_grid
        if count < 2:
            raise DomainError(f"sweep needs count >= 2, got {count}")
        if self.kind not in (SetKind.E2, SetKind.E4):
            raise DomainError("sweeps run over the gap parameter of e2 or e4")
        check_b(self.kind, start)
        check_b(self.kind, stop)
        for m in self.methods:
            if m is Method.SERIES and not (self.kind is SetKind.E2 and self.odd):
                raise DomainError("the series method is only defined for odd E2 moments")

    @property
    def power(self) -> int:
        return 2 * self.n + int(self.odd)

    def grid(self) -> list[float]:
        start, stop, count = self.b_grid
        return [start + (stop - start) * i / (count - 1) for i in range(count)]


def sweep_rows(req: SweepRequest, spec: QuadratureSpec | None = None):
    """Yield one wide row per b: (b, n, mu, value/err per method..., error message)."""
    spec = spec or QuadratureSpec()

    def one(b):
        q = MomentQuery(req.kind, req.power, req.mu, b)
        cells = []
        failures = []
        for m in req.methods:
            try:
                r = moment(q, m, spec=spec)
                cells += [r.value, r.error_estimate]
            except ConvergenceError as exc:
                cells += [exc.partial, exc.error]
                failures.append(f"{m.value}: {exc}")
        return (b, req.power, req.mu, *cells, "; ".join(failures))

    return _ordered_map(one, req.grid())


def _profile_rows(bs, count):
    rows = []
    for b in bs:
        b = check_b(SetKind.E4, b)
        s = complement(b)
        for lo, hi in [(-1.0, -b), (-s, s), (b, 1.0)]:
            for i in range(count):
                x = lo + (hi - lo) * i / (count - 1)
                rows.append((b, x, cos_phi_e4(x, b)))
    return rows


def cmd_sweep(args, out=sys.stdout) -> int:
    if args.profile == "cosphi":
        bs = args.b or [0.72, 0.9]
        _emit(_profile_rows(bs, args.count), ("b", "x", "cosphi"), args.json, out)
        return EXIT_OK
    methods = tuple(Method(m) for m in args.methods)
    req = SweepRequest(
        SetKind(args.set),
        args.parity == "odd",
        args.n,
        args.mu,
        (args.b_start, args.b_stop, args.count),
        methods,
    )
    rows = sweep_rows(req, _spec(args.tol))
    header = ["b", "n", "mu"]
    for m in methods:
        header += [f"{m.value}_value", f"{m.value}_err"]
    header.append("error")
    _emit(rows, header, args.json, out)
    if all(r[-1] for r in rows):
        return EXIT_CONVERGENCE
    return EXIT_OK


# --- table -------------------------------------------------------------------


def cmd_table(args, out=sys.stdout) -> int:
    kind = SetKind(args.set)
    spec = _spec(args.tol)

    def one(n):
        q = MomentQuery(kind, n, args.mu, args.b)
        row = _record(q, moment(q, Method.CLOSED))
        if args.check:
            qv = moment(q, Method.QUADRATURE, spec=spec).value
            row += (qv, abs(row[4] - qv))
        return row

    rows = _ordered_map(one, range(args.n_max + 1))
    header = HEADER + (("quad_value", "abs_diff") if args.check else ())
    _emit(rows, header, args.json, out)
    return EXIT_OK


# --- verify ------------------------------------------------------------------


def cmd_verify(args, out=sys.stdout) -> int:
    results = verify.run_all(quick=args.quick, perturb=args.perturb)
    for r in results:
        out.write(r.line() + "\n")
    failed = [r for r in results if not r.passed]
    total = sum(r.seconds for r in results)
    out.write(f"{len(results) - len(failed)}/{len(results)} checks passed in {total:.1f}s\n")
    return EXIT_VERIFY if failed else EXIT_OK


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="gapmoments",
        description="Ultraspherical moments on one- and two-gap interval sets.",
    )
    sub = p.add_subparsers(dest="command", required=True)
    sets = [k.value for k in SetKind]
    methods = [m.value for m in Method]

    m = sub.add_parser("moment", help="evaluate a single moment")
    m.add_argument("--set", required=True, choices=sets)
    m.add_argument("--n", required=True, type=int, help="power of cos(phi), or of x for full/half")
    m.add_argument("--mu", required=True, type=float)
    m.add_argument("--b", type=float, help="gap parameter (e2, e4)")
    m.add_argument("--method", default="closed", choices=methods)
    m.add_argument("--tol", type=float)
    m.add_argument("--json", action="store_true")
    m.set_defaults(func=cmd_moment)

    s = sub.add_parser("sweep", help="tabulate a moment over a grid of b")
    s.add_argument("--set", default="e2", choices=["e2", "e4"])
    s.add_argument("--parity", default="odd", choices=["even", "odd"])
    s.add_argument("--n", type=int, default=0, help="half-order: the power is 2n (even) or 2n+1 (odd)")
    s.add_argument("--mu", type=float, default=0.0)
    s.add_argument("--b-start", type=float, default=0.0)
    s.add_argument("--b-stop", type=float, default=0.95)
    s.add_argument("--count", type=int, default=50)
    s.add_argument("--methods", nargs="+", default=["series", "closed"], choices=methods)
    s.add_argument("--profile", choices=["cosphi"], help="dump x, cos(phi) rows on E4 instead")
    s.add_argument("--b", type=float, action="append", help="b value for --profile (repeatable)")
    s.add_argument("--tol", type=float)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_sweep)

    t = sub.add_parser("table", help="closed-form moments for n = 0..n-max")
    t.add_argument("--set", required=True, choices=sets)
    t.add_argument("--mu", required=True, type=float)
    t.add_argument("--n-max", required=True, type=int)
    t.add_argument("--b", type=float)
    t.add_argument("--check", action="store_true", help="add a quadrature cross-check column")
    t.add_argument("--tol", type=float)
    t.add_argument("--json", action="store_true")
    t.set_defaults(func=cmd_table)

    v = sub.add_parser("verify", help="run the cross-route verification suite")
    v.add_argument("--quick", action="store_true")
    v.add_argument("--perturb", type=float, default=0.0, help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None, out=None) -> int:
    args = build_parser().parse_args(argv)
    out = out if out is not None else sys.stdout
    try:
        return args.func(args, out)
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        print(f"convergence failure: {exc} (best estimate {exc.partial!r})", file=sys.stderr)
        return EXIT_CONVERGENCE


def run(argv=None) -> str:
    """Run the CLI and return its standard output as a string (for scripting)."""
    buf = io.StringIO()
    code = main(argv, buf)
    if code:
        raise SystemExit(code)
    return buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
