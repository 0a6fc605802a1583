import pytest

from blockgrader import (
    Block,
    DependencyGroup,
    OracleCapExceeded,
    ProblemMultigraph,
    SolutionCapExceeded,
    UnknownStartError,
    brute_force_collapse,
    collapse,
    dfs_until,
    enumerate_topological_orders,
    export_dot,
    stats,
)
from conftest import SUM_DAGS, SUM_SOLUTIONS
from oracles import ref_topological_orders


def tiny_problem(groups_spec: dict[str, list[list[str]]], final: str) -> ProblemMultigraph:
    blocks = {
        tag: Block(tag=tag, text=tag.lower(), is_final=(tag == final))
        for tag in groups_spec
    }
    groups = {
        tag: tuple(DependencyGroup(tuple(g)) for g in gs)
        for tag, gs in groups_spec.items()
    }
    problem = ProblemMultigraph(blocks=blocks, groups=groups, final_tag=final)
    problem.validate()
    return problem


def canonical(dags):
    return {dag.canonical_key for dag in dags}


CHAIN = {"A": [], "B": [["A"]], "C": [["B"]]}


class TestDfsUntil:
    def test_halts_at_start_when_it_qualifies(self, sum_problem):
        result = dfs_until(
            lambda tag: len(sum_problem.groups[tag]) >= 2, sum_problem, "F"
        )
        assert result.halt_node == "F"
        assert "F" in result.nodes

    def test_exhaustive_traversal_of_chain(self):
        result = dfs_until(lambda tag: False, CHAIN, "C")
        assert result.halt_node is None
        assert result.nodes == {"A", "B", "C"}
        assert result.edges == {("A", "B"), ("B", "C")}

    def test_single_node_halting_immediately(self):
        result = dfs_until(lambda tag: True, {"X": []}, "X")
        assert result.halt_node == "X"
        assert result.nodes == {"X"}

    def test_unknown_start(self):
        with pytest.raises(UnknownStartError):
            dfs_until(lambda tag: False, CHAIN, "Q")

    def test_visits_each_node_once(self):
        # diamond: D depends on B and C, both depend on A
        graph = {"A": [], "B": [["A"]], "C": [["A"]], "D": [["B", "C"]]}
        visits = []
        dfs_until(lambda tag: visits.append(tag) or False, graph, "D")
        assert sorted(visits) == ["A", "B", "C", "D"]


class TestCollapse:
    def test_sum_problem_yields_exactly_three_dags(self, sum_problem):
        dags = collapse(sum_problem)
        assert canonical(dags) == SUM_DAGS
        assert canonical(dags) == canonical(brute_force_collapse(sum_problem))

    def test_monochrome_problem_is_its_own_dag(self):
        problem = tiny_problem(CHAIN, "C")
        (dag,) = collapse(problem)
        assert dag.nodes == {"A", "B", "C"}
        assert dag.edges == {("A", "B"), ("B", "C")}

    def test_two_source_alternatives(self):
        problem = tiny_problem({"A": [], "B": [], "F": [["A"], ["B"]]}, "F")
        dags = collapse(problem)
        assert canonical(dags) == {
            (("A", "F"), (("A", "F"),)),
            (("B", "F"), (("B", "F"),)),
        }
        assert canonical(dags) == canonical(brute_force_collapse(problem))

    def test_every_dag_is_monochrome_with_one_choice_per_node(self, sum_problem):
        for dag in collapse(sum_problem):
            for node in dag.nodes:
                groups = sum_problem.groups[node]
                if groups:
                    assert node in dag.chosen_group
                    chosen = groups[dag.chosen_group[node]]
                    assert {(u, node) for u in chosen.members} == {
                        (u, v) for u, v in dag.edges if v == node
                    }

    def test_optional_alternative_prunes_prerequisite(self):
        # B may require A or nothing; choosing nothing makes A optional
        problem = tiny_problem({"A": [], "B": [["A"], []], "F": [["B"]]}, "F")
        dags = collapse(problem)
        assert canonical(dags) == {
            (("A", "B", "F"), (("A", "B"), ("B", "F"))),
            (("B", "F"), (("B", "F"),)),
        }
        assert canonical(dags) == canonical(brute_force_collapse(problem))

    def test_traversal_order_does_not_change_result(self, sum_problem):
        assert collapse(sum_problem) == collapse(sum_problem, traversal_order="reversed")


class TestBruteForce:
    def test_sum_problem_four_assignments_three_dags(self, sum_problem):
        # the E-choice is moot when F picks the verbose branch, so two of
        # the four assignments collapse to the same DAG
        assert len(brute_force_collapse(sum_problem)) == 3

    def test_oracle_cap(self):
        spec: dict[str, list[list[str]]] = {f"S{i}": [] for i in range(13)}
        spec["F"] = [[f"S{i}"] for i in range(13)]
        for i in range(13):
            spec[f"T{i}"] = [[f"S{j}"] for j in range(13)]
        problem = tiny_problem({**spec}, "F")
        with pytest.raises(OracleCapExceeded):
            brute_force_collapse(problem, cap=100)


class TestEnumerateOrders:
    def test_sum_verbose_dag_has_two_orders(self, sum_problem):
        dag = next(
            d for d in collapse(sum_problem) if d.nodes == {"A", "B", "C", "D", "F"}
        )
        orders = enumerate_topological_orders(dag, 100)
        assert orders == [
            ("A", "B", "C", "D", "F"),
            ("A", "B", "D", "C", "F"),
        ]
        assert set(orders) == ref_topological_orders(set(dag.nodes), set(dag.edges))

    def test_all_sum_solutions(self, sum_problem):
        found = set()
        for dag in collapse(sum_problem):
            found.update(enumerate_topological_orders(dag, 100))
        assert found == SUM_SOLUTIONS

    def test_chain_has_one_order(self):
        (dag,) = collapse(tiny_problem(CHAIN, "C"))
        assert enumerate_topological_orders(dag, 10) == [("A", "B", "C")]

    def test_empty_group_leaves_final_alone(self):
        problem = tiny_problem({"A": [], "B": [], "F": [[]]}, "F")
        (dag,) = collapse(problem)
        # F kept alone: its chosen group is empty, so A and B are pruned
        assert dag.nodes == {"F"}

    def test_cap_on_independent_nodes(self):
        from blockgrader.model import CollapsedDag

        dag = CollapsedDag(nodes=frozenset("ABC"), edges=frozenset())
        with pytest.raises(SolutionCapExceeded) as excinfo:
            enumerate_topological_orders(dag, 5)
        assert excinfo.value.limit == 5
        assert len(enumerate_topological_orders(dag, 6)) == 6

    def test_orders_are_lexicographic_and_respect_edges(self, sum_problem):
        for dag in collapse(sum_problem):
            orders = enumerate_topological_orders(dag, 100)
            assert orders == sorted(orders)
            for order in orders:
                index = {tag: i for i, tag in enumerate(order)}
                assert all(index[u] < index[v] for u, v in dag.edges)


class TestStats:
    def test_sum_problem(self, sum_problem):
        report = stats(sum_problem)
        assert (report.n, report.m, report.d, report.bound) == (6, 8, 3, 4)
        assert report.d <= report.bound

    def test_single_block(self):
        problem = tiny_problem({"X": []}, "X")
        report = stats(problem)
        assert (report.n, report.m, report.d, report.bound) == (1, 0, 1, 1)

    def test_two_alternatives(self):
        problem = tiny_problem({"A": [], "B": [], "F": [["A"], ["B"]]}, "F")
        report = stats(problem)
        assert (report.n, report.m, report.d, report.bound) == (3, 2, 2, 2)

    def test_distractors_are_excluded(self, sum_problem):
        blocks = dict(sum_problem.blocks)
        blocks["X"] = Block(tag="X", text="red herring", is_distractor=True)
        groups = dict(sum_problem.groups)
        groups["X"] = ()
        noisy = ProblemMultigraph(blocks=blocks, groups=groups, final_tag="F")
        assert stats(noisy) == stats(sum_problem)


class TestExportDot:
    def test_chain_dag(self):
        (dag,) = collapse(tiny_problem(CHAIN, "C"))
        dot = export_dot(dag)
        assert dot.startswith("digraph")
        assert "  A -> B;" in dot.splitlines()
        assert "  B -> C;" in dot.splitlines()

    def test_sum_multigraph_labels(self, sum_problem):
        dot = export_dot(sum_problem)
        edge_lines = [line for line in dot.splitlines() if "->" in line]
        assert len(edge_lines) == 8
        assert '  A -> E [label="0"];' in edge_lines
        assert '  B -> E [label="1"];' in edge_lines
        assert '  C -> F [label="0"];' in edge_lines
        assert '  D -> F [label="0"];' in edge_lines
        assert '  E -> F [label="1"];' in edge_lines

    def test_single_node(self):
        (dag,) = collapse(tiny_problem({"X": []}, "X"))
        dot = export_dot(dag)
        assert "  X;" in dot.splitlines()
        assert "->" not in dot

    def test_deterministic(self, sum_problem):
        assert export_dot(sum_problem) == export_dot(sum_problem)

    def test_odd_tags_are_quoted(self):
        problem = tiny_problem({"a tag": [], "F": [["a tag"]]}, "F")
        dot = export_dot(problem)
        assert '"a tag" -> F [label="0"];' in dot
