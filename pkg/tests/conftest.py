from pathlib import Path

import pytest

from blockgrader import ProblemMultigraph, load_problem

PROBLEMS_DIR = Path(__file__).resolve().parent.parent / "problems"

SUM_PROBLEM = PROBLEMS_DIR / "python_sum_two_numbers.html"

# The three dependency DAGs of the sum problem, frozen after checking
# them against the brute-force choice-enumeration oracle.
SUM_DAGS = {
    (
        ("A", "B", "C", "D", "F"),
        (("A", "B"), ("B", "C"), ("B", "D"), ("C", "F"), ("D", "F")),
    ),
    (
        ("A", "E", "F"),
        (("A", "E"), ("E", "F")),
    ),
    (
        ("A", "B", "E", "F"),
        (("A", "B"), ("B", "E"), ("E", "F")),
    ),
}

# All four correct orders of the sum problem (two from the verbose DAG,
# one from each assignment-style DAG).
SUM_SOLUTIONS = {
    ("A", "B", "C", "D", "F"),
    ("A", "B", "D", "C", "F"),
    ("A", "B", "E", "F"),
    ("A", "E", "F"),
}

SUM_INDENTS = {"A": 0, "B": 1, "C": 1, "D": 1, "E": 1, "F": 1}


@pytest.fixture(scope="session")
def sum_problem() -> ProblemMultigraph:
    return load_problem(SUM_PROBLEM.read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def problems_dir() -> Path:
    return PROBLEMS_DIR
