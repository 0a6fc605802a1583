"""Domain types for block-ordering problems with alternative dependencies.

A problem is a set of blocks plus, for each block, a list of dependency
groups. Each group is one alternative set of prerequisites: the block is
correctly placed when every member of *some one* group precedes it.
Several groups on one block therefore express an or-relationship, which
makes the overall dependency structure a multigraph rather than a DAG.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    CycleError,
    DuplicateTagError,
    InvalidMultigraphError,
    MultipleFinalError,
    NoFinalError,
    SelfDependencyError,
    UnknownTagError,
)

__all__ = [
    "Block",
    "DependencyGroup",
    "ProblemMultigraph",
    "CollapsedDag",
    "Submission",
    "GradeReport",
    "StatsReport",
    "assemble_multigraph",
    "build_multigraph",
]


@dataclass(frozen=True)
class Block:
    """One draggable unit of a problem."""

    tag: str
    text: str
    indent: int = 0
    is_final: bool = False
    is_distractor: bool = False

    def __post_init__(self) -> None:
        if not self.tag:
            raise InvalidMultigraphError("block tag must be non-empty")
        if self.indent < 0:
            raise InvalidMultigraphError(f"block {self.tag!r}: indent must be >= 0")
        if self.is_final and self.is_distractor:
            raise InvalidMultigraphError(
                f"block {self.tag!r} cannot be both final and a distractor"
            )


@dataclass(frozen=True)
class DependencyGroup:
    """One alternative set of prerequisite tags. May be empty, meaning
    "this alternative requires nothing"."""

    members: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if len(set(self.members)) != len(self.members):
            raise InvalidMultigraphError(
                f"dependency group {self.members!r} contains duplicate tags"
            )


@dataclass(frozen=True)
class ProblemMultigraph:
    """A validated problem: blocks plus per-block dependency groups.

    ``blocks`` preserves authored document order (the default bank order).
    ``groups`` has an entry for every tag; distractors always map to ().
    An edge u -> v means "v depends on u".
    """

    blocks: Mapping[str, Block]
    groups: Mapping[str, tuple[DependencyGroup, ...]]
    final_tag: str

    @cached_property
    def _canonical(self) -> tuple:
        return (
            self.final_tag,
            tuple(sorted(
                (b.tag, b.text, b.indent, b.is_final, b.is_distractor)
                for b in self.blocks.values()
            )),
            tuple(sorted(
                (tag, tuple(g.members for g in gs))
                for tag, gs in self.groups.items()
            )),
        )

    def __hash__(self) -> int:
        return hash(self._canonical)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProblemMultigraph):
            return NotImplemented
        return self._canonical == other._canonical

    @property
    def solution_blocks(self) -> list[Block]:
        """Non-distractor blocks in document order."""
        return [b for b in self.blocks.values() if not b.is_distractor]

    def union_edges(self) -> set[tuple[str, str]]:
        """Every edge u -> v over all groups of all blocks."""
        return {
            (u, v)
            for v, gs in self.groups.items()
            for g in gs
            for u in g.members
        }

    def iter_violations(self) -> Iterator[InvalidMultigraphError]:
        """Yield every structural invariant violation, most local first."""
        if self.final_tag not in self.blocks:
            yield NoFinalError(f"final tag {self.final_tag!r} is not a block")
        elif not self.blocks[self.final_tag].is_final:
            yield NoFinalError(f"block {self.final_tag!r} is not marked final")
        finals = [b.tag for b in self.blocks.values() if b.is_final]
        if len(finals) > 1:
            yield MultipleFinalError(f"multiple final blocks: {', '.join(sorted(finals))}")
        for tag in self.groups:
            if tag not in self.blocks:
                yield UnknownTagError(tag, f"groups declared for unknown block {tag!r}")
        for tag, block in self.blocks.items():
            gs = self.groups.get(tag, ())
            if block.is_distractor and gs:
                yield InvalidMultigraphError(
                    f"distractor block {tag!r} must not declare dependencies"
                )
            for g in gs:
                for member in g.members:
                    if member == tag:
                        yield SelfDependencyError(f"block {tag!r} depends on itself")
                        continue
                    ref = self.blocks.get(member)
                    if ref is None:
                        yield UnknownTagError(
                            member, f"block {tag!r} depends on unknown tag {member!r}"
                        )
                    elif ref.is_distractor:
                        yield UnknownTagError(
                            member,
                            f"block {tag!r} depends on distractor block {member!r}",
                        )
        cycle = _find_cycle(self.union_edges(), sorted(self.blocks))
        if cycle is not None:
            yield CycleError(cycle)

    def validate(self) -> None:
        """Check every structural invariant; raise on the first violation."""
        for violation in self.iter_violations():
            raise violation


def _find_cycle(edges: set[tuple[str, str]], nodes: Iterable[str]) -> list[str] | None:
    """Return one directed cycle as a list of tags, or None if acyclic."""
    successors: dict[str, list[str]] = {n: [] for n in nodes}
    for u, v in sorted(edges):
        successors.setdefault(u, []).append(v)

    WHITE, GRAY, BLACK = 0, 1, 2
    color = {n: WHITE for n in successors}
    stack: list[str] = []

    def visit(node: str) -> list[str] | None:
        color[node] = GRAY
        stack.append(node)
        for nxt in successors[node]:
            if color[nxt] == GRAY:
                return stack[stack.index(nxt):]
            if color[nxt] == WHITE:
                found = visit(nxt)
                if found is not None:
                    return found
        stack.pop()
        color[node] = BLACK
        return None

    for n in sorted(successors):
        if color[n] == WHITE:
            found = visit(n)
            if found is not None:
                return found
    return None


@dataclass(frozen=True)
class CollapsedDag:
    """One fully resolved dependency DAG.

    ``nodes`` are the retained block tags, ``chosen_group`` maps each
    retained block that had any groups to the index of the group kept,
    and ``edges`` are exactly the edges induced by those choices.
    Identity is the (nodes, edges) pair; the chosen indices are carried
    for feedback but do not participate in equality.
    """

    nodes: frozenset[str]
    edges: frozenset[tuple[str, str]]
    chosen_group: Mapping[str, int] = field(compare=False, default_factory=dict)

    @cached_property
    def canonical_key(self) -> tuple[tuple[str, ...], tuple[tuple[str, str], ...]]:
        return (tuple(sorted(self.nodes)), tuple(sorted(self.edges)))

    @cached_property
    def dag_id(self) -> str:
        """Short content-derived identifier; stable and non-revealing."""
        nodes, edges = self.canonical_key
        text = ",".join(nodes) + ";" + ",".join(f"{u}>{v}" for u, v in edges)
        return "dag-" + hashlib.sha256(text.encode()).hexdigest()[:8]

    def __hash__(self) -> int:
        return hash((self.nodes, self.edges))

    def predecessors(self, tag: str) -> set[str]:
        return {u for u, v in self.edges if v == tag}


@dataclass(frozen=True)
class Submission:
    """A student's arranged sequence of (tag, indent) pairs."""

    placed: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        tags = [t for t, _ in self.placed]
        if len(set(tags)) != len(tags):
            raise InvalidMultigraphError("submission places the same tag twice")

    @classmethod
    def of(cls, pairs: Iterable[tuple[str, int]]) -> "Submission":
        return cls(tuple((str(t), int(i)) for t, i in pairs))


@dataclass(frozen=True)
class GradeReport:
    """Outcome of grading one submission."""

    score: float
    exact: bool
    best_dag: str
    edit_distance: int
    first_error_index: int | None
    message: str

    def __post_init__(self) -> None:
        if (self.edit_distance == 0) != self.exact or self.exact != (self.score == 1.0):
            raise ValueError("exact, edit_distance and score disagree")

    def to_dict(self) -> dict:
        return {
            "score": self.score,
            "exact": self.exact,
            "edit_distance": self.edit_distance,
            "best_dag": self.best_dag,
            "first_error_index": self.first_error_index,
            "message": self.message,
        }


@dataclass(frozen=True)
class StatsReport:
    """Size statistics of one problem.

    n: blocks excluding distractors
    m: dependency edges summed over every group
    d: distinct collapsed DAGs
    bound: product over blocks of max(1, number of groups)
    """

    n: int
    m: int
    d: int
    bound: int

    def to_dict(self) -> dict:
        return {"n": self.n, "m": self.m, "d": self.d, "bound": self.bound}


def assemble_multigraph(
    blocks: Mapping[str, Block],
    groups: Mapping[str, tuple[DependencyGroup, ...]],
) -> ProblemMultigraph:
    """Locate the final block, construct the problem, and validate it."""
    finals = [b.tag for b in blocks.values() if b.is_final]
    if not finals:
        raise NoFinalError("no block is marked final")
    if len(finals) > 1:
        raise MultipleFinalError(f"multiple final blocks: {', '.join(sorted(finals))}")
    problem = ProblemMultigraph(blocks=dict(blocks), groups=dict(groups), final_tag=finals[0])
    problem.validate()
    return problem


def build_multigraph(elements: Sequence) -> ProblemMultigraph:
    """Assemble and validate a problem from parsed answer elements.

    ``elements`` is the output of :func:`blockgrader.parsing.parse_problem`.
    Raises the specific validation error for the first invariant violated.
    """
    from .parsing import parse_depends  # local import to avoid a cycle

    blocks: dict[str, Block] = {}
    groups: dict[str, tuple[DependencyGroup, ...]] = {}
    for el in elements:
        if el.tag in blocks:
            raise DuplicateTagError(f"duplicate block tag {el.tag!r}")
        blocks[el.tag] = Block(
            tag=el.tag,
            text=el.text,
            indent=el.indent,
            is_final=el.final,
            is_distractor=el.distractor,
        )
        if el.distractor:
            if el.depends_expr.strip():
                raise InvalidMultigraphError(
                    f"distractor block {el.tag!r} must not declare dependencies"
                )
            groups[el.tag] = ()
        else:
            groups[el.tag] = tuple(parse_depends(el.depends_expr))

    return assemble_multigraph(blocks, groups)
