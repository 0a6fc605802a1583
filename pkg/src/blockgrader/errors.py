"""Exception types raised by parsing, validation, and grading."""

from __future__ import annotations


class BlockGraderError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(BlockGraderError):
    """Base class for errors while reading a problem document."""


class MalformedElementError(ParseError):
    """An answer element is syntactically invalid (unclosed, bad attribute, ...)."""


class EmptyTagError(ParseError):
    """A dependency group contains an empty tag (e.g. ",," or ", ,")."""


class DuplicateTagInGroupError(ParseError):
    """The same tag appears twice within one dependency group."""


class DuplicateTagError(ParseError):
    """Two answer elements in one document share a tag."""


class NoBlocksError(ParseError):
    """The document contains no answer elements."""


class SchemaError(ParseError):
    """A canonical-format document violates the schema.

    ``path`` locates the offending field, e.g. ``blocks[2].indent``.
    """

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class InvalidMultigraphError(BlockGraderError):
    """The assembled problem violates a structural invariant."""


class CycleError(InvalidMultigraphError):
    """The union of all dependency edges contains a cycle.

    ``cycle`` lists the tags along one offending cycle, in order.
    """

    def __init__(self, cycle: list[str]):
        super().__init__("dependency cycle: " + " -> ".join([*cycle, cycle[0]]))
        self.cycle = cycle


class UnknownTagError(InvalidMultigraphError):
    """A tag refers to no usable block (missing, or a distractor)."""

    def __init__(self, tag: str, message: str | None = None):
        super().__init__(message or f"unknown tag {tag!r}")
        self.tag = tag


class SelfDependencyError(InvalidMultigraphError):
    """A block lists itself as a prerequisite."""


class NoFinalError(InvalidMultigraphError):
    """No block is marked final."""


class MultipleFinalError(InvalidMultigraphError):
    """More than one block is marked final."""


class UnknownStartError(BlockGraderError):
    """Traversal was asked to start from a tag absent from the graph."""


class OracleCapExceeded(BlockGraderError):
    """Exhaustive group-choice enumeration would exceed the configured cap."""


class SolutionCapExceeded(BlockGraderError):
    """A graph admits more orderings than the enumeration limit.

    ``limit`` is the cap that was exceeded.
    """

    def __init__(self, limit: int):
        super().__init__(f"more than {limit} valid orderings")
        self.limit = limit
