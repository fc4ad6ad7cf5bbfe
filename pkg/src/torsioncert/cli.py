"""Command-line front end.

Exit status: 0 when a check ends RuledOut (and for successful informational
commands), 2 when it ends Inconclusive, 1 on usage or internal errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from .arith import prime_power
from .certificate import CertificateDocument
from .gf import make_field
from .modcurves import decomposition_table, genus_x1, j1_finite_over_q
from .obstruction import (
    DEFAULT_DEGREE,
    DEFAULT_PRIME,
    Verdict,
    check_torsion,
    counterexamples,
)
from .traces import CONDITIONS, admissible_trace, trace_range
from .weierstrass import curves_with_point_of_order, group_shape, realized_orders

EXIT_RULED_OUT = 0
EXIT_ERROR = 1
EXIT_INCONCLUSIVE = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; 2 is reserved for Inconclusive.
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _fmt_set(values) -> str:
    return "{" + ", ".join(str(v) for v in sorted(values)) + "}"


def _field_from_q(q: int):
    pp = prime_power(q)
    if pp is None:
        raise ValueError(f"{q} is not a prime power")
    return make_field(*pp)


def _print_certificate(cert, out) -> None:
    print(f"Z/{cert.N}Z torsion over number fields of degree {cert.d}, reduction at p={cert.p}", file=out)
    print(f"{'#':>3}  {'kind':<15} {'status':<6} step", file=out)
    for i, s in enumerate(cert.steps, 1):
        print(f"{i:>3}  {s.kind.value:<15} {s.status.value:<6} {s.name}: {s.statement}", file=out)
        ev = s.evidence or {}
        if s.name == "reduction.good" and "residue_fields" in ev:
            for rf in ev["residue_fields"]:
                rejected = ", ".join(f"m={r['m']} (t={r['trace']})" for r in rf["rejected"]) or "-"
                surviving = ", ".join(f"m={r['m']} (t={r['trace']})" for r in rf["surviving"]) or "-"
                lo, hi = rf["hasse_interval"]
                print(f"{'':>27}f={rf['f']} q={rf['q']} Hasse [{lo}, {hi}] "
                      f"multiples={rf['multiples_of_N']} rejected: {rejected}; surviving: {surviving}",
                      file=out)
        elif "skipped" in ev:
            print(f"{'':>27}skipped: {ev['skipped']}", file=out)
    failing = cert.failing_steps()
    if failing:
        print(f"failing steps: {', '.join(s.name for s in failing)}", file=out)
    print(f"verdict: {cert.verdict.value}", file=out)


def cmd_check(args, out) -> int:
    cert = check_torsion(args.n, args.degree, args.prime)
    _print_certificate(cert, out)
    if args.certificate:
        Path(args.certificate).write_text(CertificateDocument.from_certificate(cert).to_json())
        print(f"certificate written to {args.certificate}", file=out)
    if args.cross_validate:
        try:
            found = counterexamples(args.n, args.prime, args.degree)
        except ValueError as exc:
            print(f"oracle: not run ({exc})", file=out)
        else:
            hits = {f: len(v) for f, v in found.items() if v}
            if not hits:
                print(f"oracle: confirmed, no curve over F_{args.prime}^f (f <= {args.degree}) "
                      f"has a point of order {args.n}", file=out)
            else:
                detail = ", ".join(f"f={f}: {k} curves" for f, k in hits.items())
                print(f"oracle: curves with a point of order {args.n} exist ({detail})", file=out)
                if cert.verdict is Verdict.RULED_OUT:
                    print("error: certificate contradicts the enumeration oracle", file=sys.stderr)
                    return EXIT_ERROR
    return EXIT_RULED_OUT if cert.verdict is Verdict.RULED_OUT else EXIT_INCONCLUSIVE


def _curve_line(E) -> str:
    shape = group_shape(E)
    coeffs = ", ".join(repr(a) for a in E.coefficients)
    return f"[{coeffs}]  |E|={shape.order}  Z/{shape.d1} x Z/{shape.d2}"


def cmd_enumerate(args, out) -> int:
    F = _field_from_q(args.q)
    if args.with_point_of_order is not None:
        curves = curves_with_point_of_order(F, args.with_point_of_order)
        print(f"curves over F_{F.q} with a point of order {args.with_point_of_order}: {len(curves)}", file=out)
        for E in curves:
            print(f"  {_curve_line(E)}", file=out)
        if not curves:
            print("[]", file=out)
    elif args.orders:
        orders = realized_orders(F)
        print(f"orders over F_{F.q} (order: number of curves)", file=out)
        for m in sorted(orders):
            print(f"  {m}: {orders[m]}", file=out)
        print(f"order set: {_fmt_set(orders)}", file=out)
    else:
        orders = realized_orders(F)
        print(f"traces over F_{F.q}: {_fmt_set(F.q + 1 - m for m in orders)}", file=out)
    return 0


def cmd_waterhouse(args, out) -> int:
    F = _field_from_q(args.q)
    p, n, q = F.p, F.n, F.q
    admissible = []
    for t in trace_range(q):
        tq = admissible_trace(t, p, n)
        if tq.admissible:
            admissible.append(t)
            c = tq.matched_condition
            print(f"t={t:>4}  |E|={q + 1 - t:>4}  admissible  ({c}) {CONDITIONS[c]}", file=out)
        else:
            print(f"t={t:>4}  |E|={q + 1 - t:>4}  inadmissible", file=out)
    print(f"admissible traces over F_{q}: {_fmt_set(admissible)}", file=out)
    return 0


def cmd_genus(args, out) -> int:
    print(f"genus(X_1({args.n})) = {genus_x1(args.n)}", file=out)
    return 0


def _print_row(row, out) -> bool:
    g = genus_x1(row.N)
    ok = row.dimension == g
    finite = "true" if row.finite_over_q else "false"
    print(f"N={row.N}  factors (dim(mult):L(A,1)=0?): {row.format_factors()}", file=out)
    print(f"  sum d_i*m_i = {row.dimension}, genus_X1({row.N}) = {g}: "
          f"{'consistent' if ok else 'MISMATCH'}", file=out)
    print(f"  J_1({row.N})(Q) finite: {finite}", file=out)
    return ok


def cmd_tables(args, out) -> int:
    table = decomposition_table()
    if args.n is not None:
        if j1_finite_over_q(args.n) is None:
            raise ValueError(f"level {args.n} is not in the decomposition table")
        rows = [table[args.n]]
    else:
        rows = [table[N] for N in sorted(table)]
    ok = all([_print_row(r, out) for r in rows])
    return 0 if ok else EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="torsioncert", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="build the obstruction certificate for Z/NZ")
    p.add_argument("--n", type=int, required=True, help="torsion order N")
    p.add_argument("--degree", type=int, default=DEFAULT_DEGREE, help="degree d of the number field (1-3)")
    p.add_argument("--prime", type=int, default=DEFAULT_PRIME, help="prime p used for reduction")
    p.add_argument("--certificate", metavar="PATH", help="write the JSON certificate here")
    p.add_argument("--cross-validate", action="store_true",
                   help="confirm with exhaustive curve enumeration over F_p^f, f <= d")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("enumerate", help="enumerate all curves over F_q")
    p.add_argument("--q", type=int, required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--orders", action="store_true", help="print the multiset of group orders")
    mode.add_argument("--traces", action="store_true", help="print the set of traces (default)")
    mode.add_argument("--with-point-of-order", type=int, metavar="N",
                      help="list curves whose group exponent is divisible by N")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("waterhouse", help="admissible Frobenius traces over F_q")
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(func=cmd_waterhouse)

    p = sub.add_parser("genus", help="genus of X_1(N)")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_genus)

    p = sub.add_parser("tables", help="J_1(N) decomposition rows with the genus check")
    p.add_argument("--n", type=int, help="level (default: all rows)")
    p.set_defaults(func=cmd_tables)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    try:
        args = build_parser().parse_args(argv)
        n = getattr(args, "n", None)
        if n is not None and n < 1:
            raise UsageError("--n must be a positive integer")
        return args.func(args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
