"""Grading: exact-match detection, edit-distance partial credit, feedback.

A submission is compared against every topological order of every
collapsed DAG. The reported distance is the global minimum; partial
credit is the fraction of the closest solution recovered. When several
solutions are equally close the longest wins, then the smallest DAG in
canonical order, so reports never depend on iteration order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .engine import DEFAULT_SOLUTION_CAP, collapse, enumerate_topological_orders
from .errors import UnknownTagError
from .model import CollapsedDag, GradeReport, ProblemMultigraph, Submission

__all__ = ["GradingPolicy", "edit_distance", "grade", "feedback"]

Placement = tuple[str, int]


@dataclass(frozen=True)
class GradingPolicy:
    """Knobs the grading contract leaves open."""

    indent_strict: bool = True
    score_floor: float = 0.0
    solution_cap: int = DEFAULT_SOLUTION_CAP

    def __post_init__(self) -> None:
        if not 0.0 <= self.score_floor < 1.0:
            raise ValueError("score_floor must be in [0, 1)")
        if self.solution_cap <= 0:
            raise ValueError("solution_cap must be positive")


def edit_distance(
    a: Sequence[Placement], b: Sequence[Placement], indent_strict: bool = True
) -> int:
    """Levenshtein distance over placements, unit insert/delete/substitute.

    Two placements match when their tags agree and, under strict
    indentation, their indents agree as well.
    """
    if indent_strict:
        xs = list(a)
        ys = list(b)
    else:
        xs = [(t, 0) for t, _ in a]
        ys = [(t, 0) for t, _ in b]
    prev = list(range(len(ys) + 1))
    for i, x in enumerate(xs, 1):
        cur = [i] + [0] * len(ys)
        for j, y in enumerate(ys, 1):
            cost = 0 if x == y else 1
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost)
        prev = cur
    return prev[-1]


def _solutions_of(
    problem: ProblemMultigraph, dag: CollapsedDag, cap: int
) -> list[tuple[Placement, ...]]:
    return [
        tuple((t, problem.blocks[t].indent) for t in order)
        for order in enumerate_topological_orders(dag, cap)
    ]


def grade(
    problem: ProblemMultigraph,
    submission: Submission,
    policy: GradingPolicy | None = None,
) -> GradeReport:
    """Grade a submission against every correct solution of the problem.

    Raises :class:`UnknownTagError` for tags absent from the problem
    (placed distractors are fine) and :class:`SolutionCapExceeded` when
    some DAG admits more orderings than the policy allows.
    """
    policy = policy or GradingPolicy()
    for tag, _ in submission.placed:
        if tag not in problem.blocks:
            raise UnknownTagError(tag, f"submission places unknown tag {tag!r}")

    best_key: tuple | None = None
    best_dag: CollapsedDag | None = None
    best_len = 0
    for dag in sorted(collapse(problem), key=lambda d: d.canonical_key):
        for solution in _solutions_of(problem, dag, policy.solution_cap):
            dist = edit_distance(submission.placed, solution, policy.indent_strict)
            key = (dist, -len(solution), dag.canonical_key, solution)
            if best_key is None or key < best_key:
                best_key, best_dag, best_len = key, dag, len(solution)

    assert best_key is not None and best_dag is not None  # every problem has >= 1 DAG
    dist = best_key[0]
    exact = dist == 0
    score = 1.0 if exact else max(policy.score_floor, 1.0 - dist / best_len)
    index, message = _first_error(problem, submission, best_dag, exact, policy)
    return GradeReport(
        score=score,
        exact=exact,
        best_dag=best_dag.dag_id,
        edit_distance=dist,
        first_error_index=index,
        message=message,
    )


def feedback(
    problem: ProblemMultigraph,
    submission: Submission,
    report: GradeReport,
    policy: GradingPolicy | None = None,
) -> tuple[int | None, str]:
    """Locate the first misplaced block relative to the report's best DAG."""
    policy = policy or GradingPolicy()
    dag = next(d for d in collapse(problem) if d.dag_id == report.best_dag)
    return _first_error(problem, submission, dag, report.exact, policy)


def _first_error(
    problem: ProblemMultigraph,
    submission: Submission,
    dag: CollapsedDag,
    exact: bool,
    policy: GradingPolicy,
) -> tuple[int | None, str]:
    if exact:
        return None, "Correct."
    placed_before: set[str] = set()
    for i, (tag, indent) in enumerate(submission.placed):
        position = i + 1
        if tag not in dag.nodes:
            return i, f"Block at position {position} is not part of this solution."
        if policy.indent_strict and indent != problem.blocks[tag].indent:
            return i, f"Block at position {position} is indented incorrectly."
        if not dag.predecessors(tag) <= placed_before:
            return i, f"Block at position {position} comes too early."
        placed_before.add(tag)
    return None, "Correct so far, but incomplete."
