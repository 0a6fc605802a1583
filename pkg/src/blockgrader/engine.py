"""Graph algorithms: collapse a dependency multigraph into its valid DAGs.

The collapse works a queue of partially collapsed graphs. Each round runs
a depth-first search backward from the final block that halts at the
first node still carrying more than one dependency group. Halting splits
the graph into one copy per remaining group of that node; completing the
search without halting means every reachable node is down to a single
group, so the traversed subgraph is one finished DAG. Finished DAGs are
deduplicated by their (nodes, edges) form: distinct choice combinations
can produce the same graph once unreachable blocks are pruned.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import prod
from typing import Callable, Iterable, Literal, Mapping, Union

from .errors import OracleCapExceeded, SolutionCapExceeded, UnknownStartError
from .model import CollapsedDag, ProblemMultigraph, StatsReport

__all__ = [
    "TraversalResult",
    "dfs_until",
    "collapse",
    "brute_force_collapse",
    "enumerate_topological_orders",
    "stats",
    "export_dot",
    "DEFAULT_SOLUTION_CAP",
    "DEFAULT_ORACLE_CAP",
]

DEFAULT_SOLUTION_CAP = 10_000
DEFAULT_ORACLE_CAP = 4096

TraversalOrder = Literal["sorted", "reversed"]

# A graph argument is either a validated problem or a plain mapping
# tag -> groups, each group an iterable of prerequisite tags.
GraphLike = Union[ProblemMultigraph, Mapping[str, Iterable[Iterable[str]]]]


@dataclass(frozen=True)
class TraversalResult:
    """Outcome of a halting backward DFS.

    ``halt_node`` is the first visited node satisfying the halting
    condition, or None when the traversal exhausted every node reachable
    backward from the start. ``nodes`` and ``edges`` form the visited
    subgraph: each visited node together with all of its incoming edges.
    """

    halt_node: str | None
    nodes: frozenset[str]
    edges: frozenset[tuple[str, str]]


def _groups_view(graph: GraphLike) -> dict[str, tuple[tuple[str, ...], ...]]:
    if isinstance(graph, ProblemMultigraph):
        return {
            tag: tuple(tuple(g.members) for g in gs)
            for tag, gs in graph.groups.items()
            if not graph.blocks[tag].is_distractor
        }
    return {tag: tuple(tuple(g) for g in gs) for tag, gs in graph.items()}


def dfs_until(
    halt: Callable[[str], bool],
    graph: GraphLike,
    start: str,
    *,
    traversal_order: TraversalOrder = "sorted",
) -> TraversalResult:
    """Depth-first search backward along dependencies, stopping early.

    Visits each node at most once, checking ``halt`` as the node is
    taken off the stack. ``traversal_order`` fixes the tie-break among a
    node's dependencies; it affects which qualifying node halts the
    search first, never the exhaustive result.
    """
    groups = _groups_view(graph)
    if start not in groups:
        raise UnknownStartError(f"start node {start!r} is not in the graph")
    ascending = traversal_order == "sorted"
    stack = [start]
    seen: set[str] = set()
    edges: set[tuple[str, str]] = set()
    while stack:
        v = stack.pop()
        if v in seen:
            continue
        seen.add(v)
        incoming = sorted({u for g in groups.get(v, ()) for u in g})
        edges.update((u, v) for u in incoming)
        if halt(v):
            return TraversalResult(v, frozenset(seen), frozenset(edges))
        # pushed in reverse so dependencies pop in the requested order
        for u in (reversed(incoming) if ascending else incoming):
            if u not in seen:
                stack.append(u)
    return TraversalResult(None, frozenset(seen), frozenset(edges))


# A partially collapsed graph: tag -> remaining (original index, members)
# pairs. Splitting restricts one node's pairs to a single entry.
_Partial = dict[str, tuple[tuple[int, frozenset[str]], ...]]


def _emit_dag(partial: _Partial, result: TraversalResult) -> CollapsedDag:
    chosen: dict[str, int] = {}
    for node in result.nodes:
        remaining = partial[node]
        if remaining:
            chosen[node] = remaining[0][0]
    return CollapsedDag(nodes=result.nodes, edges=result.edges, chosen_group=chosen)


@lru_cache(maxsize=128)
def _collapse_cached(
    problem: ProblemMultigraph, traversal_order: TraversalOrder
) -> frozenset[CollapsedDag]:
    base: _Partial = {
        tag: tuple((i, frozenset(g.members)) for i, g in enumerate(gs))
        for tag, gs in problem.groups.items()
        if not problem.blocks[tag].is_distractor
    }
    found: dict[tuple, CollapsedDag] = {}
    queue: deque[_Partial] = deque([base])
    while queue:
        partial = queue.popleft()
        view = {tag: tuple(members for _, members in pairs) for tag, pairs in partial.items()}
        result = dfs_until(
            lambda v: len(view[v]) > 1,
            view,
            problem.final_tag,
            traversal_order=traversal_order,
        )
        if result.halt_node is None:
            dag = _emit_dag(partial, result)
            found.setdefault((dag.nodes, dag.edges), dag)
        else:
            for pair in partial[result.halt_node]:
                branch = dict(partial)
                branch[result.halt_node] = (pair,)
                queue.append(branch)
    return frozenset(found.values())


def collapse(
    problem: ProblemMultigraph, *, traversal_order: TraversalOrder = "sorted"
) -> frozenset[CollapsedDag]:
    """Resolve every group choice, returning all distinct dependency DAGs.

    Results are deduplicated by (nodes, edges); blocks with no path to
    the final block under a given choice combination are pruned, which
    is what makes blocks optional.
    """
    if traversal_order not in ("sorted", "reversed"):
        raise ValueError(f"unknown traversal order {traversal_order!r}")
    problem.validate()
    return _collapse_cached(problem, traversal_order)


def brute_force_collapse(
    problem: ProblemMultigraph, *, cap: int = DEFAULT_ORACLE_CAP
) -> frozenset[CollapsedDag]:
    """Ground-truth collapse by exhausting the full product of group choices.

    Independent of :func:`collapse`: builds every candidate graph, prunes
    nodes that cannot reach the final block, and deduplicates. Refuses
    problems whose choice product exceeds ``cap``.
    """
    problem.validate()
    tags = [
        tag for tag in problem.groups
        if not problem.blocks[tag].is_distractor
    ]
    bound = prod(max(1, len(problem.groups[t])) for t in tags)
    if bound > cap:
        raise OracleCapExceeded(f"choice product {bound} exceeds oracle cap {cap}")

    choosers = [range(max(1, len(problem.groups[t]))) for t in tags]
    found: dict[tuple, CollapsedDag] = {}
    for assignment in product(*choosers):
        members_of: dict[str, frozenset[str]] = {}
        index_of: dict[str, int] = {}
        for tag, idx in zip(tags, assignment):
            gs = problem.groups[tag]
            members_of[tag] = frozenset(gs[idx].members) if gs else frozenset()
            if gs:
                index_of[tag] = idx
        # keep only blocks with a path to the final block
        kept: set[str] = set()
        frontier = [problem.final_tag]
        while frontier:
            v = frontier.pop()
            if v in kept:
                continue
            kept.add(v)
            frontier.extend(members_of[v])
        edges = frozenset((u, v) for v in kept for u in members_of[v])
        chosen = {t: index_of[t] for t in kept if t in index_of}
        dag = CollapsedDag(nodes=frozenset(kept), edges=edges, chosen_group=chosen)
        found.setdefault((dag.nodes, dag.edges), dag)
    return frozenset(found.values())


@lru_cache(maxsize=512)
def _orders_cached(dag: CollapsedDag, limit: int) -> tuple[tuple[str, ...], ...]:
    preds: dict[str, set[str]] = {v: set() for v in dag.nodes}
    succs: dict[str, list[str]] = {v: [] for v in dag.nodes}
    for u, v in dag.edges:
        preds[v].add(u)
        succs[u].append(v)
    missing = {v: len(ps) for v, ps in preds.items()}

    orders: list[tuple[str, ...]] = []
    path: list[str] = []
    total = len(dag.nodes)

    def backtrack() -> None:
        if len(path) == total:
            if len(orders) >= limit:
                raise SolutionCapExceeded(limit)
            orders.append(tuple(path))
            return
        # choosing candidates in tag order yields lexicographic output
        for v in sorted(v for v, k in missing.items() if k == 0):
            missing[v] = -1
            for w in succs[v]:
                missing[w] -= 1
            path.append(v)
            backtrack()
            path.pop()
            for w in succs[v]:
                missing[w] += 1
            missing[v] = 0

    backtrack()
    return tuple(orders)


def enumerate_topological_orders(
    dag: CollapsedDag, limit: int = DEFAULT_SOLUTION_CAP
) -> list[tuple[str, ...]]:
    """All topological orders of the DAG, in lexicographic tag order.

    Raises :class:`SolutionCapExceeded` as soon as more than ``limit``
    orders exist.
    """
    if limit <= 0:
        raise ValueError("limit must be positive")
    return list(_orders_cached(dag, limit))


def stats(problem: ProblemMultigraph) -> StatsReport:
    """Size statistics: block count, edge count, DAG count, choice bound."""
    problem.validate()
    solution_tags = [t for t in problem.groups if not problem.blocks[t].is_distractor]
    edge_count = sum(
        len(g.members) for t in solution_tags for g in problem.groups[t]
    )
    return StatsReport(
        n=len(solution_tags),
        m=edge_count,
        d=len(collapse(problem)),
        bound=prod(max(1, len(problem.groups[t])) for t in solution_tags),
    )


_BARE_ID = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|[0-9]+")


def _dot_id(tag: str) -> str:
    if _BARE_ID.fullmatch(tag):
        return tag
    return '"' + tag.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(graph: ProblemMultigraph | CollapsedDag) -> str:
    """Render a multigraph or a collapsed DAG as deterministic DOT text.

    Multigraph edges carry their group index as a label; collapsed DAGs
    are plain. Nodes and edges are emitted in sorted order.
    """
    lines = ["digraph blocks {"]
    if isinstance(graph, ProblemMultigraph):
        tags = sorted(
            t for t in graph.blocks if not graph.blocks[t].is_distractor
        )
        labeled = sorted(
            (u, v, i)
            for v in tags
            for i, g in enumerate(graph.groups[v])
            for u in g.members
        )
        for tag in tags:
            lines.append(f"  {_dot_id(tag)};")
        for u, v, i in labeled:
            lines.append(f'  {_dot_id(u)} -> {_dot_id(v)} [label="{i}"];')
    else:
        for tag in sorted(graph.nodes):
            lines.append(f"  {_dot_id(tag)};")
        for u, v in sorted(graph.edges):
            lines.append(f"  {_dot_id(u)} -> {_dot_id(v)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
