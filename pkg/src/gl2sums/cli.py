"""Command-line front end.

Subcommands: char-table, gauss-sum, pv-scan, count, fourier-coeffs, ps-count,
verify. JSON is the canonical output (CSV for scan grids); complex values are
rounded to 12 significant digits with a fixed key order, so identical
configurations print identical bytes (the one exception is the elapsed_ms
timing field of gauss-sum).

Exit codes: 0 success, 1 a checked bound or identity failed (the report names
the violated check), 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time

from .arith import is_prime
from .boxes import pv_scan
from .chartable import build_table, make_irrep
from .counting import (
    count_with_main_term,
    fourier_coeff,
    fourier_coeff_oracle,
    coeff_sum_report,
    naive_box_count,
    ps_char_sum_scan,
    ps_shifted_generator_count,
)
from .errors import VerificationError
from .gl2 import ClassLabel, Mat2
from .gauss import gauss_trace_bruteforce, gauss_trace_cells, gauss_trace_closed
from .numeric import complex_payload, sig_round
from .verify import applicable_checks, run_checks

SET_NAMES = {
    "nonsingular": "nonsingular",
    "elliptic": "elliptic",
    "primitive": "primitive",
    "disc-zero": "disc_zero",
    "disc_zero": "disc_zero",
}


def _positive_prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if not (3 <= p <= 101) or not is_prime(p):
        raise argparse.ArgumentTypeError(f"p must be a prime in [3, 101], got {p}")
    return p


def _parse_irrep(p: int, text: str):
    t = text.strip().lower()
    if t in ("trivial", "1"):
        return make_irrep(p, "onedim", (0,))
    if t in ("st", "steinberg"):
        return make_irrep(p, "steinberg", (0,))
    kind, _, rest = t.partition(":")
    kind = {"u": "onedim", "st": "steinberg", "i": "principal", "x": "cuspidal"}.get(
        kind, kind
    )
    if not rest:
        raise ValueError(f"representation label {text!r} needs parameters")
    params = tuple(int(v) for v in rest.split(","))
    return make_irrep(p, kind, params)


def _emit(args, text: str) -> None:
    if getattr(args, "out_path", None):
        with open(args.out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _json(payload) -> str:
    return json.dumps(payload, separators=(",", ":"))


def _split_out(args) -> str:
    """The spec'd --out flag doubles as a format selector when its value is
    literally json or csv; anything else is a file path."""
    out = getattr(args, "out", None)
    fmt = getattr(args, "format", None) or "json"
    if out in ("json", "csv"):
        fmt = out
        args.out_path = None
    else:
        args.out_path = out
    return fmt


def cmd_char_table(args) -> int:
    table = build_table(args.p)
    fmt = _split_out(args)
    values = []
    for i in range(table.n):
        row = table.row(i)
        values.extend([sig_round(z.real), sig_round(z.imag)] for z in row)
    payload = {
        "p": table.p,
        "irreps": [
            {"kind": r.kind, "params": list(r.params), "dim": int(table.dims[i])}
            for i, r in enumerate(table.irreps)
        ],
        "classes": [
            {
                "kind": cd.label.kind,
                "params": list(cd.label.params),
                "size": cd.size,
            }
            for cd in table.classes
        ],
        "values": values,
    }
    if fmt != "json":
        raise VerificationError("usage", "char-table emits JSON only")
    _emit(args, _json(payload))
    return 0


def cmd_gauss_sum(args) -> int:
    table = build_table(args.p)
    irrep = _parse_irrep(args.p, args.rep)
    matrix = Mat2.parse(args.matrix, args.p)
    _split_out(args)
    start = time.perf_counter()
    payload_extra = {}
    if args.method == "brute":
        value = gauss_trace_bruteforce(table, irrep, matrix, workers=args.workers)
    elif args.method == "cells":
        g1, g2 = gauss_trace_cells(table, irrep, matrix, workers=args.workers)
        value = g1 + g2
        payload_extra = {"g1": complex_payload(g1), "g2": complex_payload(g2)}
    else:
        value = gauss_trace_closed(table, irrep, matrix)
    elapsed_ms = (time.perf_counter() - start) * 1000.0
    payload = {
        "value": complex_payload(value),
        "method": args.method,
        "elapsed_ms": round(elapsed_ms, 3),
        **payload_extra,
    }
    _emit(args, _json(payload))
    return 0


def cmd_pv_scan(args) -> int:
    fmt = _split_out(args)
    if args.base is None and args.c is None and args.xmax >= args.p:
        raise ValueError("default scan expects xmax < p (pass --c for wider boxes)")
    xs = list(range(1, args.xmax + 1))
    base = Mat2.parse(args.base) if args.base else None
    rows = pv_scan(args.p, xs, c=args.c, base=base)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["p", "irrep_kind", "irrep_params", "dim", "x",
                         "abs_sum", "ratio"])
        for r in rows:
            writer.writerow([
                r.p, r.irrep.kind, ";".join(map(str, r.irrep.params)), r.dim,
                r.x, sig_round(r.abs_sum), sig_round(r.ratio),
            ])
        _emit(args, buf.getvalue().rstrip("\n"))
    else:
        payload = {
            "p": args.p,
            "rows": [
                {
                    "irrep": {"kind": r.irrep.kind, "params": list(r.irrep.params)},
                    "dim": r.dim,
                    "x": r.x,
                    "abs_sum": sig_round(r.abs_sum),
                    "ratio": sig_round(r.ratio),
                }
                for r in rows
            ],
            "max_ratio": sig_round(max(r.ratio for r in rows)),
        }
        _emit(args, _json(payload))
    return 0


def cmd_count(args) -> int:
    fmt = _split_out(args)
    name = args.set
    if name.startswith("class:"):
        set_kind = ClassLabel.parse(name[len("class:"):])
    else:
        try:
            set_kind = SET_NAMES[name]
        except KeyError:
            raise ValueError(f"unknown set {name!r}")
    report = count_with_main_term(args.p, args.x, set_kind)
    payload = report.payload()
    payload["main_term"] = sig_round(payload["main_term"])
    payload["residual"] = sig_round(payload["residual"])
    payload["normalized_residual"] = sig_round(payload["normalized_residual"])
    if args.compare:
        oracle = naive_box_count(args.p, args.x, set_kind)
        payload["enumeration_count"] = oracle
        if oracle != report.exact_count:
            raise VerificationError(
                "count-methods", f"{report.exact_count} != {oracle}"
            )
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(list(payload.keys()))
        writer.writerow(list(payload.values()))
        _emit(args, buf.getvalue().rstrip("\n"))
    else:
        _emit(args, _json(payload))
    return 0


def cmd_fourier_coeffs(args) -> int:
    _split_out(args)
    table = build_table(args.p)
    entries = []
    for irrep in table.irreps:
        value = fourier_coeff(args.p, irrep)
        oracle = fourier_coeff_oracle(table, irrep)
        entries.append(
            {
                "kind": irrep.kind,
                "params": list(irrep.params),
                "value": sig_round(value),
                "oracle_deviation": sig_round(abs(value - oracle)),
            }
        )
    s1, s2, s3 = coeff_sum_report(args.p)
    payload = {
        "p": args.p,
        "coefficients": entries,
        "family_abs_sums": {
            "onedim": sig_round(s1),
            "steinberg": sig_round(s2),
            "cuspidal": sig_round(s3),
        },
    }
    _emit(args, _json(payload))
    return 0


def cmd_ps_count(args) -> int:
    _split_out(args)
    payload = {"p": args.p, "x": args.x}
    if args.theta:
        tx, ty = (int(v) for v in args.theta.split(","))
        report = ps_shifted_generator_count(args.p, (tx, ty), args.x)
        payload["theta"] = [tx % args.p, ty % args.p]
        payload["count"] = report.exact_count
        payload["main_term"] = sig_round(report.main_term)
        payload["normalized_residual"] = sig_round(report.normalized_residual)
        if args.scan:
            payload["scan_max"] = sig_round(ps_char_sum_scan(args.p, args.x, (tx, ty)))
    elif args.scan:
        payload["scan_max"] = sig_round(ps_char_sum_scan(args.p, args.x))
    else:
        raise ValueError("ps-count needs --theta and/or --scan")
    _emit(args, _json(payload))
    return 0


def cmd_verify(args) -> int:
    names = args.check or applicable_checks(args.p)
    results = run_checks(args.p, names)
    failed = [r for r in results if not r.ok]
    for r in results:
        status = "PASS" if r.ok else "FAIL"
        print(f"{status} {r.name}: {r.detail}")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gl2sums",
        description="GL(2, F_p) character sums: tables, Gauss sums, box-sum "
        "scans, exact counts and a per-prime verification suite.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, x_flag=False):
        sp.add_argument("--p", type=_positive_prime, required=True)
        sp.add_argument("--workers", type=int,
                        default=int(os.environ.get("GL2_WORKERS", "1")))
        sp.add_argument("--out", default=None,
                        help="output file path, or literal json/csv to pick a format")
        sp.add_argument("--format", choices=("json", "csv"), default=None)
        if x_flag:
            sp.add_argument("--x", type=int, required=True)

    sp = sub.add_parser("char-table", help="emit the full character table")
    add_common(sp)
    sp.set_defaults(fn=cmd_char_table)

    sp = sub.add_parser("gauss-sum", help="trace of one matrix Gauss sum")
    add_common(sp)
    sp.add_argument("--rep", required=True,
                    help="irrep label, e.g. st, trivial, onedim:1, "
                    "principal:0,2, cuspidal:1")
    sp.add_argument("--matrix", required=True, help='matrix literal "a,b;c,d"')
    sp.add_argument("--method", choices=("brute", "closed", "cells"),
                    default="closed")
    sp.set_defaults(fn=cmd_gauss_sum)

    sp = sub.add_parser("pv-scan", help="normalized box-sum ratio scan")
    add_common(sp)
    sp.add_argument("--xmax", type=int, required=True)
    sp.add_argument("--c", type=float, default=None,
                    help="interval budget c (component lengths <= c*p)")
    sp.add_argument("--base", default=None,
                    help="optional base matrix literal for shifted boxes")
    sp.set_defaults(fn=cmd_pv_scan)

    sp = sub.add_parser("count", help="exact count with main-term comparison")
    add_common(sp, x_flag=True)
    sp.add_argument("--set", required=True,
                    help="nonsingular | elliptic | primitive | disc-zero | "
                    "class:<kind:params>")
    sp.add_argument("--compare", action="store_true",
                    help="also run the enumeration oracle")
    sp.set_defaults(fn=cmd_count)

    sp = sub.add_parser("fourier-coeffs",
                        help="primitive-indicator Fourier coefficients")
    add_common(sp)
    sp.set_defaults(fn=cmd_fourier_coeffs)

    sp = sub.add_parser("ps-count", help="shifted-generator counts in F_{p^2}")
    add_common(sp, x_flag=True)
    sp.add_argument("--theta", default=None, help='theta as "x,y" with y != 0')
    sp.add_argument("--scan", action="store_true",
                    help="include the character-sum scan maximum")
    sp.set_defaults(fn=cmd_ps_count)

    sp = sub.add_parser("verify", help="run the verification suite for one prime")
    add_common(sp)
    sp.add_argument("--check", action="append", default=None,
                    help="run only the named check (repeatable)")
    sp.set_defaults(fn=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.workers < 1:
        parser.error("--workers must be >= 1")
    try:
        return args.fn(args)
    except VerificationError as exc:
        print(_json({"error": exc.check, "detail": exc.detail}), file=sys.stderr)
        return 1
    except (ValueError, KeyError) as exc:
        parser.error(str(exc))  # exits 2
        return 2


if __name__ == "__main__":
    sys.exit(main())
