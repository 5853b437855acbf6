"""Command-line front end (``bbinterp``).

Sub-commands::

    bbinterp solve PROBLEM [--solver S] [--ordering O] -o OUT
    bbinterp eval SOLUTION --points CSV -o CSV
    bbinterp cond PROBLEM
    bbinterp repro (--example K | --all) -o DIR

Failures print ``{"error": {"code": ..., "message": ..., "exit_code": ...}}``
to stderr. Exit codes: 0 success, 2 parse or validation error, 3 solver or
geometry error, 4 resource limit.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .errors import BBInterpError, ValidationError
from .experiments import EXAMPLES, run_example
from .fileio import (
    ORDERINGS,
    SOLVERS,
    atomic_write_text,
    dumps,
    evaluate_solution,
    load_problem,
    load_solution,
    problem_condition,
    read_points,
    solution_to_json,
    solve_problem,
    write_values,
)

__all__ = ["main", "build_parser"]


class _Parser(argparse.ArgumentParser):
    """Argument errors become validation errors instead of ``SystemExit``."""

    def error(self, message: str):
        raise ValidationError(f"{self.prog}: {message}")


def cmd_solve(args) -> int:
    problem = load_problem(args.problem)
    record = solve_problem(problem, solver=args.solver, ordering=args.ordering)
    atomic_write_text(args.output, solution_to_json(record))
    print(f"solved {record.kind} degree {record.degree} with {record.solver}; "
          f"residual {record.residual_max:.3e}; wrote {args.output}")
    return 0


def cmd_eval(args) -> int:
    record = load_solution(args.solution)
    points = read_points(args.points)
    values = evaluate_solution(record, points)
    write_values(args.output, points, values)
    print(f"evaluated {len(values)} points; wrote {args.output}")
    return 0


def cmd_cond(args) -> int:
    problem = load_problem(args.problem)
    kappa, size = problem_condition(problem)
    if args.json:
        print(dumps({"kind": problem.kind, "size": size, "condition_number": kappa}))
    else:
        print(f"kind: {problem.kind}")
        print(f"matrix size: {size} x {size}")
        print(f"condition number: {kappa:.6e}")
    return 0


def cmd_repro(args) -> int:
    ids = sorted(EXAMPLES) if args.all else [args.example]
    out = Path(args.output)
    for k in ids:
        table = run_example(k)
        atomic_write_text(out / f"example{k}.txt", table.to_text())
        atomic_write_text(out / f"example{k}.json", dumps(table.to_dict()) + "\n")
        sys.stdout.write(table.to_text() + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bbinterp", description="Bernstein-Bezier interpolation tools.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve an interpolation problem file")
    p.add_argument("problem")
    p.add_argument("--solver", choices=SOLVERS, default="newton-bernstein")
    p.add_argument("--ordering", choices=ORDERINGS, default=None,
                   help="node ordering (default: the problem's own, else 'given')")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("eval", help="evaluate a solution at CSV points")
    p.add_argument("solution")
    p.add_argument("--points", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("cond", help="2-norm condition number of the collocation matrix")
    p.add_argument("problem")
    p.add_argument("--json", action="store_true", help="print a JSON report")
    p.set_defaults(func=cmd_cond)

    p = sub.add_parser("repro", help="regenerate the benchmark tables")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--example", type=int, choices=sorted(EXAMPLES))
    which.add_argument("--all", action="store_true")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_repro)
    return parser


def _report(err: BBInterpError) -> int:
    print(json.dumps({"error": err.to_dict()}), file=sys.stderr)
    return err.exit_code


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except BBInterpError as err:
        return _report(err)
    except MemoryError:
        from .errors import ResourceError

        return _report(ResourceError("out of memory"))


if __name__ == "__main__":
    sys.exit(main())
