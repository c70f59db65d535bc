"""Command-line entry point: ``oberwolfach <subcommand> ...``.

Exit status: 0 on success, 1 when a solve or a verification fails, 2 on
usage errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from pathlib import Path
from typing import Optional, Sequence

from .errors import BudgetExhausted, KnownUnsolvable, Unsupported
from .factors import verify_factorization
from .instances import CycleTypeError, enumerate_cycle_types, parse_cycle_type
from .op335 import emit_model, prove_infeasible
from .pipeline import (
    METHOD_CHOICES,
    TABLE_HEADER,
    Failed,
    default_out_dir,
    solve_instance,
    solve_order,
    solve_types,
    write_record,
)
from .serialize import FormatError, deserialize, to_json

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _ranged(lo: int, hi: Optional[int] = None):
    def parse(text: str) -> int:
        try:
            val = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
        if val < lo or (hi is not None and val > hi):
            bound = f">= {lo}" if hi is None else f"in [{lo}, {hi}]"
            raise argparse.ArgumentTypeError(f"{val} is not {bound}")
        return val
    return parse


def _cycle_type(text: str):
    try:
        return parse_cycle_type(text)
    except CycleTypeError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="oberwolfach", description="Solve Oberwolfach problem instances.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def common(sp, solve=True):
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        if solve:
            sp.add_argument("--seed", type=_ranged(0), default=0)
            sp.add_argument("--budget-ms", type=_ranged(1), default=None,
                            help="time limit per labeling search (default: size-scaled)")

    sp = sub.add_parser("partitions", help="count (and list) cycle types of an order")
    sp.add_argument("--order", type=_ranged(3), required=True)
    sp.add_argument("--min-cycles", type=_ranged(1), default=1)
    sp.add_argument("--list", action="store_true", help="also print every type")
    common(sp, solve=False)

    sp = sub.add_parser("solve", help="solve one cycle type and write its solution file")
    sp.add_argument("--type", dest="ctype", type=_cycle_type, required=True, help='e.g. "3^2,7" or "[5,6]"')
    sp.add_argument("--method", choices=METHOD_CHOICES, default="auto")
    sp.add_argument("--out", default=None, help="output directory (default $OBERWOLFACH_OUT or ./solutions)")
    common(sp)

    sp = sub.add_parser("solve-order", help="solve every cycle type of one order")
    sp.add_argument("--order", type=_ranged(9), required=True)
    sp.add_argument("--min-cycles", type=_ranged(1), default=1)
    sp.add_argument("--jobs", type=_ranged(1, 256), default=1)
    sp.add_argument("--out", default=None)
    common(sp)

    sp = sub.add_parser("verify", help="check a solution file")
    sp.add_argument("file")
    common(sp, solve=False)

    sp = sub.add_parser("prove-335", help="complete search showing OP(3,3,5) has no solution")
    sp.add_argument("--emit-model", metavar="FILE", default=None, help="also write the 0-1 model as LP text")
    sp.add_argument("--no-fix", action="store_true", help="do not fix day 1 (slow soundness check)")
    sp.add_argument("--budget-ms", type=_ranged(1), default=None)
    common(sp, solve=False)

    sp = sub.add_parser("bench", help="solve a range of orders and print a summary table")
    sp.add_argument("--from", dest="lo", type=_ranged(9), required=True)
    sp.add_argument("--to", dest="hi", type=_ranged(9), required=True)
    sp.add_argument("--min-cycles", type=_ranged(1), default=3)
    sp.add_argument("--jobs", type=_ranged(1, 256), default=1)
    sp.add_argument("--sample", type=_ranged(1), default=None, help="random sample of this many types per order")
    sp.add_argument("--out", default=None, help="also write solution files here")
    common(sp)
    return p


def _budget(args) -> Optional[float]:
    return None if args.budget_ms is None else args.budget_ms / 1000.0


def _emit(args, obj: dict, text: str):
    print(json.dumps(obj, indent=2) if args.json else text)


def cmd_partitions(args) -> int:
    types = list(enumerate_cycle_types(args.order, args.min_cycles))
    if args.json:
        print(json.dumps({"order": args.order, "min_cycles": args.min_cycles, "count": len(types),
                          "types": [str(t) for t in types] if args.list else None}))
        return EXIT_OK
    print(len(types))
    if args.list:
        for t in types:
            print(t)
    return EXIT_OK


def cmd_solve(args) -> int:
    ct = args.ctype
    try:
        rec = solve_instance(ct, _budget(args), args.seed, method=args.method)
    except KnownUnsolvable:
        _emit(args, {"type": str(ct), "status": "unsolvable"}, f"{ct}: known unsolvable")
        return EXIT_FAIL
    except (Unsupported, Failed) as exc:
        status = "unsupported" if isinstance(exc, Unsupported) else "failed"
        _emit(args, {"type": str(ct), "status": status, "message": str(exc)}, f"{ct}: {status}: {exc}")
        return EXIT_FAIL
    path = write_record(rec, args.out or default_out_dir())
    # round trip through the file before reporting success
    back = deserialize(Path(path).read_text())
    report = verify_factorization(back.order, back.cycle_type, back.factorization)
    if args.json:
        print(json.dumps({"type": str(ct), "status": "solved" if report.ok else "failed", "method": rec.method,
                          "order": ct.order, "path": path, "elapsed": round(rec.elapsed, 4),
                          "verified": report.ok, "violation": report.violation,
                          "solution": json.loads(to_json(back))}, indent=2))
    else:
        base = f" from {rec.base}" if rec.base is not None else ""
        verdict = "verified" if report.ok else f"VERIFICATION FAILED: {report.violation}"
        print(f"{ct}: solved by {rec.method}{base} in {rec.elapsed:.3f}s; {verdict}; wrote {path}")
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_solve_order(args) -> int:
    rep = solve_order(args.order, args.min_cycles, args.jobs, _budget(args), args.seed,
                      out_dir=args.out or default_out_dir())
    if args.json:
        print(json.dumps(rep.to_dict(), indent=2))
    else:
        print(TABLE_HEADER)
        print(rep.table_row())
        for o in rep.outcomes:
            if o.status != "solved":
                print(f"  {o.cycle_type}: {o.status} {o.message}")
    return EXIT_OK if rep.failed == 0 else EXIT_FAIL


def cmd_verify(args) -> int:
    try:
        rec = deserialize(Path(args.file).read_text())
    except OSError as exc:
        _emit(args, {"file": args.file, "ok": False, "violation": str(exc)}, f"{args.file}: {exc}")
        return EXIT_FAIL
    except FormatError as exc:
        _emit(args, {"file": args.file, "ok": False, "violation": str(exc)}, f"{args.file}: malformed: {exc}")
        return EXIT_FAIL
    report = verify_factorization(rec.order, rec.cycle_type, rec.factorization)
    text = (f"{args.file}: ok ({rec.cycle_type}, order {rec.order}, {report.checked_pairs} pairs)"
            if report.ok else f"{args.file}: violation: {report.violation}")
    _emit(args, {"file": args.file, "ok": report.ok, "violation": report.violation,
                 "type": str(rec.cycle_type), "order": rec.order}, text)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_prove_335(args) -> int:
    if args.emit_model:
        with open(args.emit_model, "w") as fh:
            n = emit_model(fh)
        print(f"wrote {n} constraints to {args.emit_model}", file=sys.stderr)
    budget = None if args.budget_ms is None else args.budget_ms / 1000.0
    try:
        cert = prove_infeasible(budget, fix_first_day=not args.no_fix)
    except BudgetExhausted as exc:
        _emit(args, {"status": "budget", "message": str(exc)}, f"budget exhausted: {exc}")
        return EXIT_FAIL
    _emit(args, {"status": cert.status, "nodes": cert.nodes, "elapsed": round(cert.elapsed, 4),
                 "fixed_first_day": cert.fixed_first_day, "notes": cert.notes}, cert.summary())
    return EXIT_OK if not cert.feasible else EXIT_FAIL


def cmd_bench(args) -> int:
    if args.hi < args.lo:
        print("bench: --to must be >= --from", file=sys.stderr)
        return EXIT_USAGE
    rows = []
    if not args.json:
        print(TABLE_HEADER)
    for v in range(args.lo, args.hi + 1):
        if args.sample:
            types = list(enumerate_cycle_types(v, args.min_cycles))
            rng = random.Random(f"{args.seed}:{v}")
            types = rng.sample(types, min(args.sample, len(types)))
            rep = solve_types(types, order=v, min_cycles=args.min_cycles, jobs=args.jobs, budget=_budget(args),
                              seed=args.seed, out_dir=args.out)
        else:
            rep = solve_order(v, args.min_cycles, args.jobs, _budget(args), args.seed, out_dir=args.out)
        rows.append(rep)
        if not args.json:
            print(rep.table_row(), flush=True)
    if args.json:
        print(json.dumps([r.to_dict() for r in rows], indent=2))
    return EXIT_OK if all(r.failed == 0 for r in rows) else EXIT_FAIL


COMMANDS = {
    "partitions": cmd_partitions,
    "solve": cmd_solve,
    "solve-order": cmd_solve_order,
    "verify": cmd_verify,
    "prove-335": cmd_prove_335,
    "bench": cmd_bench,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    return COMMANDS[args.command](args)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
