"""``polybound``: runtime-complexity bounds for integer transition systems."""

from __future__ import annotations

import argparse
import itertools
import math
import sys
from dataclasses import dataclass, field

from .. import smt
from ..analysis import TECHNIQUES, analyze
from ..interp import Machine, Verdict, check_bound_soundness
from .parser import InputError, load
from .report import check_failed, render_json, render_report

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL, EXIT_CHECK = 0, 1, 2, 3


@dataclass(frozen=True)
class CheckSummary:
    verdict: Verdict
    states: int
    violations: list = field(default_factory=list)


def check_all(result, radius: int, depth: int) -> CheckSummary:
    """Oracle check of every bound for all initial states in [-radius, radius]^|PV|."""
    program = result.program
    machine = Machine(program)
    violations = []
    inconclusive = False
    states = 0
    for values in itertools.product(range(-radius, radius + 1), repeat=len(program.pv)):
        sigma0 = dict(zip(program.pv, values))
        rep = check_bound_soundness(program, result.runtime, sigma0, depth_cap=depth, machine=machine)
        states += 1
        if rep.verdict is Verdict.INCONCLUSIVE:
            inconclusive = True
        for tid, seen, claimed in rep.violations:
            violations.append((sigma0, tid, seen, claimed if claimed != math.inf else "omega"))
    if violations:
        verdict = Verdict.FAIL
    elif inconclusive:
        verdict = Verdict.INCONCLUSIVE
    else:
        verdict = Verdict.PASS
    return CheckSummary(verdict, states, violations)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polybound", description=__doc__)
    ap.add_argument("input", help="integer transition system in TPDB ITS format")
    ap.add_argument("--technique", choices=TECHNIQUES, default="twn+rf")
    ap.add_argument("--solver", default="z3 -in", help="SMT-LIB solver command, or 'none' for the built-in backend only")
    ap.add_argument("--solver-timeout-ms", type=int, default=5000)
    ap.add_argument("--cycle-max-len", type=int, default=6)
    ap.add_argument("--full-chained-guard", action="store_true", help="use the full guard when chaining a twn loop with itself")
    ap.add_argument("--neq", choices=("guard", "split"), default="guard", help="encode != as a disjunction or by splitting rules")
    ap.add_argument("--check", action="store_true", help="compare bounds against exhaustive runs from small initial states")
    ap.add_argument("--check-range", type=int, default=3, metavar="K")
    ap.add_argument("--check-depth", type=int, default=10_000, metavar="N")
    ap.add_argument("--proof", action="store_true", help="print the derivation of every bound")
    ap.add_argument("--format", choices=("plain", "json"), default="plain")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        program = load(args.input, neq_mode=args.neq)
    except OSError as e:
        print(f"error: cannot read {args.input}: {e.strerror}", file=sys.stderr)
        return EXIT_INPUT
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    try:
        use_ext = args.solver.lower() != "none"
        solver = smt.Solver(smt.SolverConfig(args.solver if use_ext else None, args.solver_timeout_ms, use_ext))
        result = analyze(
            program,
            technique=args.technique,
            solver=solver,
            cycle_max_len=args.cycle_max_len,
            full_chained_guard=args.full_chained_guard,
        )
        check = check_all(result, args.check_range, args.check_depth) if args.check else None
    except Exception as e:  # noqa: BLE001 - report anything unexpected as an internal error
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    render = render_json if args.format == "json" else render_report
    sys.stdout.write(render(result, proof=args.proof, check=check))
    return EXIT_CHECK if check_failed(check) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
