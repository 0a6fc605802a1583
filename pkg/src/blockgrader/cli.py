"""Instructor command-line tool: validate, inspect, grade, and serve problems.

Exit codes: 0 on success (for ``grade``: only when the submission is
exact), 1 for invalid problems or inexact grades, 2 for usage errors and
unreadable inputs. Every command accepts ``--json`` for machine-readable
output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from pathlib import Path

from .engine import collapse, enumerate_topological_orders, export_dot, stats
from .errors import BlockGraderError, ParseError, SolutionCapExceeded
from .grading import GradingPolicy, grade
from .model import Block, DependencyGroup, ProblemMultigraph, Submission
from .parsing import load_problem, parse_depends, parse_problem

ENV_PROBLEMS = "BLOCKGRADER_PROBLEMS"
ENV_PORT = "BLOCKGRADER_PORT"


def _read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise BlockGraderError(f"cannot read {path}: {exc.strerror}") from exc


def _collect_diagnostics(text: str) -> tuple[ProblemMultigraph | None, list[str], list[str]]:
    """Parse and validate, gathering as many errors as can be determined."""
    errors: list[str] = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        if text.lstrip().startswith("{"):
            try:
                problem = load_problem(text)
            except BlockGraderError as exc:
                problem = None
                errors.append(str(exc))
        else:
            problem = _collect_element_diagnostics(text, errors)
        warning_messages = [str(w.message) for w in caught]
    return problem, errors, warning_messages


def _collect_element_diagnostics(text: str, errors: list[str]) -> ProblemMultigraph | None:
    try:
        elements = parse_problem(text)
    except ParseError as exc:
        errors.append(str(exc))
        return None
    blocks: dict[str, Block] = {}
    groups: dict[str, tuple[DependencyGroup, ...]] = {}
    for el in elements:
        try:
            blocks[el.tag] = Block(el.tag, el.text, el.indent, el.final, el.distractor)
            if el.distractor and el.depends_expr.strip():
                raise BlockGraderError(
                    f"distractor block {el.tag!r} must not declare dependencies"
                )
            groups[el.tag] = () if el.distractor else tuple(parse_depends(el.depends_expr))
        except BlockGraderError as exc:
            errors.append(f"line {el.line}: {exc}")
            groups.setdefault(el.tag, ())
    finals = [el.tag for el in elements if el.final and not el.distractor]
    if not finals:
        errors.append("no block is marked final")
        return None
    if len(finals) > 1:
        errors.append(f"multiple final blocks: {', '.join(sorted(finals))}")
        return None
    if errors:
        return None
    lines = {el.tag: el.line for el in elements}
    problem = ProblemMultigraph(blocks=blocks, groups=groups, final_tag=finals[0])
    for violation in problem.iter_violations():
        tag = getattr(violation, "tag", None)
        where = f"line {lines[tag]}: " if tag in lines else ""
        errors.append(f"{where}{violation}")
    return None if errors else problem


def cmd_validate(args: argparse.Namespace) -> int:
    path = Path(args.path)
    try:
        text = _read_text(path)
    except BlockGraderError as exc:
        print(f"{path}: {exc}", file=sys.stderr)
        return 1
    problem, errors, warning_messages = _collect_diagnostics(text)
    if args.json:
        print(json.dumps({
            "path": str(path),
            "valid": problem is not None,
            "errors": errors,
            "warnings": warning_messages,
        }, indent=2))
    else:
        for message in warning_messages:
            print(f"{path}: warning: {message}")
        for message in errors:
            print(f"{path}: error: {message}")
        if problem is not None:
            print(f"{path}: OK ({len(problem.blocks)} blocks)")
    return 0 if problem is not None else 1


def _load(path: Path) -> ProblemMultigraph:
    return load_problem(_read_text(path))


def _dag_listing(problem: ProblemMultigraph) -> list[dict]:
    dags = sorted(collapse(problem), key=lambda d: d.canonical_key)
    return [
        {
            "id": dag.dag_id,
            "nodes": list(dag.canonical_key[0]),
            "edges": [[u, v] for u, v in dag.canonical_key[1]],
        }
        for dag in dags
    ]


def cmd_collapse(args: argparse.Namespace) -> int:
    try:
        problem = _load(Path(args.path))
        listing = _dag_listing(problem)
        if args.dot:
            dot_dir = Path(args.dot)
            dot_dir.mkdir(parents=True, exist_ok=True)
            (dot_dir / "multigraph.dot").write_text(export_dot(problem), encoding="utf-8")
            for dag in sorted(collapse(problem), key=lambda d: d.canonical_key):
                (dot_dir / f"{dag.dag_id}.dot").write_text(export_dot(dag), encoding="utf-8")
    except BlockGraderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.json:
        print(json.dumps({"dags": listing}, indent=2))
    else:
        print(f"{len(listing)} collapsed DAG(s)")
        for entry in listing:
            print(entry["id"])
            print("  nodes: " + ", ".join(entry["nodes"]))
            print("  edges: " + (", ".join(f"{u}->{v}" for u, v in entry["edges"]) or "(none)"))
    return 0


def _all_solutions(problem: ProblemMultigraph, limit: int) -> list[tuple[tuple[str, int], ...]]:
    distinct: set[tuple[tuple[str, int], ...]] = set()
    for dag in sorted(collapse(problem), key=lambda d: d.canonical_key):
        for order in enumerate_topological_orders(dag, limit):
            distinct.add(tuple((t, problem.blocks[t].indent) for t in order))
            if len(distinct) > limit:
                raise SolutionCapExceeded(limit)
    return sorted(distinct)


def cmd_solutions(args: argparse.Namespace) -> int:
    try:
        problem = _load(Path(args.path))
        solutions = _all_solutions(problem, args.limit)
    except BlockGraderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.json:
        print(json.dumps({
            "solutions": [
                [{"tag": t, "indent": i} for t, i in solution]
                for solution in solutions
            ],
        }, indent=2))
    else:
        print(f"{len(solutions)} solution(s)")
        for solution in solutions:
            print(" ".join(f"{t}({i})" for t, i in solution))
    return 0


def _read_submission(path: Path) -> Submission:
    text = _read_text(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"submission {path}: not valid JSON: {exc}") from exc
    if not isinstance(data, dict) or not isinstance(data.get("placed"), list):
        raise ParseError(f"submission {path}: expected an object with a 'placed' list")
    placed = []
    for entry in data["placed"]:
        if not isinstance(entry, dict) or "tag" not in entry:
            raise ParseError(f"submission {path}: each placement needs a 'tag'")
        placed.append((str(entry["tag"]), int(entry.get("indent", 0))))
    return Submission.of(placed)


def cmd_grade(args: argparse.Namespace) -> int:
    try:
        problem = _load(Path(args.path))
        submission = _read_submission(Path(args.submission))
        policy = GradingPolicy(indent_strict=not args.lenient_indent)
        report = grade(problem, submission, policy)
    except BlockGraderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(f"score: {report.score:g}")
        print(f"exact: {'yes' if report.exact else 'no'}")
        print(f"edit distance: {report.edit_distance}")
        print(f"best dag: {report.best_dag}")
        print(f"feedback: {report.message}")
    return 0 if report.exact else 1


def cmd_stats(args: argparse.Namespace) -> int:
    directory = args.dir or os.environ.get(ENV_PROBLEMS)
    if not directory:
        print(f"error: no problems directory (give one or set {ENV_PROBLEMS})",
              file=sys.stderr)
        return 2
    root = Path(directory)
    if not root.is_dir():
        print(f"error: {root} is not a directory", file=sys.stderr)
        return 2
    rows: list[dict] = []
    failed = False
    for path in sorted(p for p in root.iterdir() if p.is_file() and not p.name.startswith(".")):
        try:
            report = stats(_load(path))
            rows.append({"problem": path.name, **report.to_dict()})
        except BlockGraderError as exc:
            rows.append({"problem": path.name, "error": str(exc)})
            failed = True
    if args.json:
        print(json.dumps({"problems": rows}, indent=2))
    else:
        width = max([len(r["problem"]) for r in rows], default=7)
        print(f"{'problem':<{width}}  {'n':>4}  {'m':>4}  {'d':>4}  {'bound':>5}")
        for row in rows:
            if "error" in row:
                print(f"{row['problem']:<{width}}  ERROR: {row['error']}")
            else:
                print(f"{row['problem']:<{width}}  {row['n']:>4}  {row['m']:>4}  "
                      f"{row['d']:>4}  {row['bound']:>5}")
    return 1 if failed else 0


def cmd_serve(args: argparse.Namespace) -> int:
    problems = args.problems or os.environ.get(ENV_PROBLEMS)
    if not problems:
        print(f"error: no problems directory (use --problems or set {ENV_PROBLEMS})",
              file=sys.stderr)
        return 2
    from .service import run_service

    run_service(
        problems_dir=Path(problems),
        data_dir=Path(args.data),
        port=args.port,
        seed=args.seed,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blockgrader",
        description="Autograder for block-ordering problems with optional blocks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a problem file")
    p.add_argument("path")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("collapse", help="list all collapsed dependency DAGs")
    p.add_argument("path")
    p.add_argument("--dot", metavar="DIR", help="also write DOT files to DIR")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_collapse)

    p = sub.add_parser("solutions", help="list every correct solution")
    p.add_argument("path")
    p.add_argument("--limit", type=int, default=10_000)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_solutions)

    p = sub.add_parser("grade", help="grade a submission file against a problem")
    p.add_argument("path")
    p.add_argument("--submission", required=True)
    p.add_argument("--lenient-indent", action="store_true",
                   help="ignore indentation when matching blocks")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_grade)

    p = sub.add_parser("stats", help="per-problem size statistics for a directory")
    p.add_argument("dir", nargs="?")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("serve", help="run the grading HTTP service")
    p.add_argument("--port", type=int, default=int(os.environ.get(ENV_PORT, "8080")))
    p.add_argument("--problems", help=f"problems directory (or ${ENV_PROBLEMS})")
    p.add_argument("--data", default="data", help="attempt-log directory")
    p.add_argument("--seed", type=int, help="seed the bank-shuffle RNG")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
