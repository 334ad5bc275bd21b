"""Command-line front end: ``stdqbose {sweep,asymptote,verify}``.

Exit codes: 0 success, 1 sweep finished with error rows or verification
failed, 2 configuration error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict

from .errors import ConfigError, DomainError
from .qkernel import Phase, Real
from .sweep import Quantity, SweepSpec, emit, parse_grid, parse_orders, run_sweep
from .verify import run_verify

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_IO = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _add_deformation(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--q", action="append", metavar="V", help="real q > 0; list a,b,c or range start:stop:steps[:log]; repeatable")
    g.add_argument("--theta", action="append", metavar="V", help="phase of q = exp(i theta) in radians; same syntax as --q")


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default="-", help="output path, '-' for stdout (default)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stdqbose", description="Observables of the symmetric Tamm-Dancoff q-deformed Bose gas.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sw = sub.add_parser("sweep", help="tabulate an observable over a (q, x, r) grid")
    _add_deformation(sw)
    sw.add_argument("--x", action="append", metavar="RANGE", help="x = beta*hbar*omega values; list or range, repeatable")
    sw.add_argument("--r", default="1", metavar="LIST", help="orders, e.g. '2,3' or '1-5' (default 1)")
    sw.add_argument("--quantity", choices=[q.value for q in Quantity], default=Quantity.DIST.value)
    sw.add_argument("--oracle-tol", type=float, default=None, metavar="V", help="add brute-force oracle columns at this relative tolerance")
    sw.add_argument("--jobs", type=int, default=1, help="worker threads (output order is unaffected)")
    _add_output(sw)

    asy = sub.add_parser("asymptote", help="large-x intercept limits {r}_q! - 1")
    _add_deformation(asy)
    asy.add_argument("--r", default="1-4", metavar="LIST")
    _add_output(asy)

    ver = sub.add_parser("verify", help="run the self-verification suites")
    ver.add_argument("--preset", choices=("quick", "full"), default="quick")
    ver.add_argument("--format", choices=("text", "json"), default="text")
    ver.add_argument("--out", default="-")
    return parser


def _deformations(args) -> list:
    try:
        if args.q:
            return [Real(v) for tok in args.q for v in parse_grid(tok)]
        return [Phase(v) for tok in args.theta for v in parse_grid(tok)]
    except DomainError as exc:
        raise ConfigError(str(exc)) from None


def _spec(args, quantity: Quantity) -> SweepSpec:
    xs = [v for tok in (getattr(args, "x", None) or []) for v in parse_grid(tok)]
    return SweepSpec(
        deformations=_deformations(args),
        x_grid=xs,
        orders=parse_orders(args.r),
        quantity=quantity,
        output_format=args.format,
        series_tolerance=getattr(args, "oracle_tol", None),
    )


def _write(text: str, destination: str) -> None:
    if destination == "-":
        sys.stdout.write(text)
        return
    with open(destination, "w", encoding="utf-8") as fh:
        fh.write(text)


def _run(args) -> int:
    if args.command == "verify":
        report = run_verify(args.preset)
        if args.format == "json":
            payload = {
                "preset": report.preset,
                "passed": report.passed,
                "families": [dict(asdict(f), passed=f.passed) for f in report.families],
            }
            text = json.dumps(payload, indent=2) + "\n"
        else:
            text = "\n".join(report.lines()) + "\n"
        _write(text, args.out)
        return EXIT_OK if report.passed else EXIT_FAILED

    quantity = Quantity.ASYMPTOTE if args.command == "asymptote" else Quantity(args.quantity)
    spec = _spec(args, quantity)
    rows = run_sweep(spec, jobs=getattr(args, "jobs", 1))
    emit(rows, spec.output_format, args.out)
    return EXIT_OK if all(row.ok for row in rows) else EXIT_FAILED


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _run(args)
    except ConfigError as exc:
        print(f"stdqbose: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"stdqbose: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
