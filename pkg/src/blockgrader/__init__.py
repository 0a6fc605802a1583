"""Autograder for block-ordering problems with optional and alternative blocks."""

from .errors import (
    BlockGraderError,
    CycleError,
    DuplicateTagError,
    DuplicateTagInGroupError,
    EmptyTagError,
    InvalidMultigraphError,
    MalformedElementError,
    MultipleFinalError,
    NoBlocksError,
    NoFinalError,
    OracleCapExceeded,
    ParseError,
    SchemaError,
    SelfDependencyError,
    SolutionCapExceeded,
    UnknownStartError,
    UnknownTagError,
)
from .model import (
    Block,
    CollapsedDag,
    DependencyGroup,
    GradeReport,
    ProblemMultigraph,
    StatsReport,
    Submission,
    assemble_multigraph,
    build_multigraph,
)
from .parsing import (
    ParsedAnswerElement,
    UnknownAttributeWarning,
    from_canonical,
    load_problem,
    parse_depends,
    parse_problem,
    to_canonical,
)
from .engine import (
    TraversalResult,
    brute_force_collapse,
    collapse,
    dfs_until,
    enumerate_topological_orders,
    export_dot,
    stats,
)
from .grading import GradingPolicy, edit_distance, feedback, grade

__version__ = "0.1.0"
