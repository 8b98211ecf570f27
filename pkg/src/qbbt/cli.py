"""Command-line entry point ``qbbt``. Exit codes: 0 PASS, 1 FAIL, 2 usage or error."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

from . import circuit
from .checkers import CHECKS, CheckConfig, id_check
from .params import eq_min_rounds, un_min_rounds
from .sim import Rng

EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="qbbt", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    chk = sub.add_parser("check", help="run one checking procedure")
    chk.add_argument("task", choices=["eq", "id", "un"])
    chk.add_argument("--p1", required=True, type=Path)
    chk.add_argument("--p2", type=Path)
    chk.add_argument("--k", required=True, type=int)
    chk.add_argument("--epsilon", type=float, default=0.15)
    rounds = chk.add_mutually_exclusive_group()
    rounds.add_argument("--s", type=int)
    rounds.add_argument("--auto-s", action="store_true")
    chk.add_argument("--alpha2", type=float, default=0.1)
    chk.add_argument("--optimized", action="store_true")
    chk.add_argument("--t", type=int, default=20)
    chk.add_argument("--seed", type=int, default=0)

    bench = sub.add_parser("bench", help="benchmark suite utilities")
    bsub = bench.add_subparsers(dest="bench_command", required=True, parser_class=_Parser)
    exp = bsub.add_parser("export", help="write the suite as Program JSON plus a manifest")
    exp.add_argument("dir", type=Path)
    exp.add_argument("--verify", action="store_true", help="confirm labels with the exact oracle")

    run = sub.add_parser("experiment", help="run an experiment plan")
    run.add_argument("--plan", required=True, type=Path)
    run.add_argument("--out", required=True, type=Path)
    run.add_argument("--quick", action="store_true", help="R=20 and s capped at 500")
    return ap


def _check(args) -> int:
    p1 = circuit.load(args.p1)
    n = p1.n_qubits
    if args.task == "id":
        verdict = id_check(n, args.k, p1, Rng(args.seed))
        s = None
    else:
        if args.auto_s:
            fn = eq_min_rounds if args.task == "eq" else un_min_rounds
            s = fn(args.k, args.epsilon, args.alpha2)
        elif args.s is not None:
            s = args.s
        else:
            raise ValueError("give --s or --auto-s")
        cfg = CheckConfig(k=args.k, s=s, epsilon=args.epsilon, t=args.t, seed=args.seed)
        variant = "optimized" if args.optimized else "original"
        if args.task == "eq":
            if args.p2 is None:
                raise ValueError("eq needs --p2")
            progs = (p1, circuit.load(args.p2))
        else:
            progs = (p1,)
        verdict = CHECKS[(args.task.upper(), variant)](n, cfg, *progs)
    out = asdict(verdict)
    out["s"] = s
    print(json.dumps(out, default=list))
    return EXIT_PASS if verdict.passed else EXIT_FAIL


def _experiment(args) -> int:
    from .harness import ExperimentPlan, emit_report, run_plan

    plan = ExperimentPlan.from_dict(json.loads(args.plan.read_text()), quick=args.quick)
    fmt = args.out.suffix.lstrip(".").lower()
    if fmt not in ("csv", "json"):
        raise ValueError("--out must end in .csv or .json")
    report = run_plan(plan)
    emit_report(report, fmt, args.out)
    print(f"wrote {len(report.cells)} cells to {args.out}")
    return EXIT_PASS


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "check":
            return _check(args)
        if args.command == "bench":
            from .bench import export_suite, suite
            path = export_suite(args.dir, suite(args.verify))
            print(f"wrote {path}")
            return EXIT_PASS
        return _experiment(args)
    except (ValueError, OSError, KeyError, RuntimeError) as exc:
        print(f"qbbt: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
