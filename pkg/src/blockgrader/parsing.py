"""Problem-document parsing: answer elements, the depends DSL, canonical JSON.

Two interchangeable on-disk formats are supported:

* the element format, a flat sequence of ``<pl-answer ...>text</pl-answer>``
  fragments with ``tag``/``depends``/``indent``/``final`` attributes, and
* the canonical JSON format, a lossless structured serialization with a
  stable field order (byte-identical across runs).

The ``depends`` attribute is a tiny DSL: comma-separated tags form one
prerequisite group, and the pipe operator separates alternative groups,
so ``"C,D|E"`` means "requires C and D, or else just E".
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

from .errors import (
    DuplicateTagError,
    DuplicateTagInGroupError,
    EmptyTagError,
    MalformedElementError,
    NoBlocksError,
    SchemaError,
)
from .model import Block, DependencyGroup, ProblemMultigraph, assemble_multigraph, build_multigraph

__all__ = [
    "ParsedAnswerElement",
    "UnknownAttributeWarning",
    "parse_depends",
    "parse_problem",
    "to_canonical",
    "from_canonical",
    "load_problem",
]

CANONICAL_VERSION = "1"

_OPEN = "<pl-answer"
_CLOSE = "</pl-answer>"

# Attributes that carry meaning; anything else is ignored with a warning.
_KNOWN_ATTRS = frozenset({"tag", "depends", "indent", "final", "correct", "distractor"})


class UnknownAttributeWarning(UserWarning):
    """An answer element carried an attribute this parser does not use."""


@dataclass(frozen=True)
class ParsedAnswerElement:
    """One answer element, before graph assembly."""

    tag: str
    depends_expr: str
    indent: int
    final: bool
    distractor: bool
    text: str
    line: int = 0


def parse_depends(expr: str) -> list[DependencyGroup]:
    """Parse a ``depends`` expression into its list of alternative groups.

    An entirely empty expression yields no groups (the block is a source).
    An explicitly empty segment between pipes (``"A|"``) is a real group
    with no members: the alternative of requiring nothing.
    """
    if expr.strip() == "":
        return []
    groups: list[DependencyGroup] = []
    for segment in expr.split("|"):
        segment = segment.strip()
        if segment == "":
            groups.append(DependencyGroup())
            continue
        members: list[str] = []
        for piece in segment.split(","):
            tag = piece.strip()
            if not tag:
                raise EmptyTagError(f"empty tag in depends segment {segment!r}")
            if tag in members:
                raise DuplicateTagInGroupError(
                    f"tag {tag!r} repeated in depends segment {segment!r}"
                )
            members.append(tag)
        groups.append(DependencyGroup(tuple(members)))
    return groups


def _line_of(text: str, pos: int) -> int:
    return text.count("\n", 0, pos) + 1


def _trim_blank_lines(s: str) -> str:
    lines = s.split("\n")
    while lines and lines[0].strip() == "":
        lines.pop(0)
    while lines and lines[-1].strip() == "":
        lines.pop()
    return "\n".join(lines)


def _scan_attributes(text: str, i: int, line: int) -> tuple[dict[str, str], int]:
    """Scan ``name="value"`` pairs until the closing ``>`` of an open tag."""
    attrs: dict[str, str] = {}
    n = len(text)
    while True:
        while i < n and text[i].isspace():
            i += 1
        if i >= n:
            raise MalformedElementError(f"line {line}: element open tag never closed")
        c = text[i]
        if c == ">":
            return attrs, i + 1
        if c == "/":
            raise MalformedElementError(
                f"line {line}: self-closing elements are not supported"
            )
        start = i
        while i < n and text[i] not in "=>\"'" and not text[i].isspace():
            i += 1
        name = text[start:i]
        if not name or i >= n or text[i] != "=":
            raise MalformedElementError(
                f"line {line}: expected attribute name=\"value\", found {text[start:start + 12]!r}"
            )
        i += 1
        if i < n and text[i] == "'":
            raise MalformedElementError(
                f"line {line}: attribute {name!r} uses single quotes; values must be double-quoted"
            )
        if i >= n or text[i] != '"':
            raise MalformedElementError(f"line {line}: attribute {name!r} value is not quoted")
        i += 1
        end = text.find('"', i)
        if end == -1:
            raise MalformedElementError(f"line {line}: attribute {name!r} value never closes")
        if name in attrs:
            raise MalformedElementError(f"line {line}: duplicate attribute {name!r}")
        attrs[name] = text[i:end]
        i = end + 1


def _parse_bool(value: str, name: str, line: int) -> bool:
    if value == "true":
        return True
    if value == "false":
        return False
    raise MalformedElementError(
        f"line {line}: attribute {name!r} must be \"true\" or \"false\", got {value!r}"
    )


def _element_from_attrs(attrs: dict[str, str], inner: str, line: int) -> ParsedAnswerElement:
    for name in attrs:
        if name not in _KNOWN_ATTRS:
            warnings.warn(
                f"line {line}: ignoring unknown attribute {name!r}",
                UnknownAttributeWarning,
                stacklevel=3,
            )
    tag = attrs.get("tag")
    if not tag:
        raise MalformedElementError(f"line {line}: element is missing a non-empty tag attribute")
    indent_raw = attrs.get("indent", "0")
    if not indent_raw.isdigit():
        raise MalformedElementError(
            f"line {line}: indent must be a nonnegative integer, got {indent_raw!r}"
        )
    final = _parse_bool(attrs.get("final", "false"), "final", line)
    distractor = _parse_bool(attrs.get("distractor", "false"), "distractor", line)
    if "correct" in attrs:
        correct = _parse_bool(attrs["correct"], "correct", line)
        if correct and distractor:
            raise MalformedElementError(
                f"line {line}: correct=\"true\" conflicts with distractor=\"true\""
            )
        distractor = distractor or not correct
    return ParsedAnswerElement(
        tag=tag,
        depends_expr=attrs.get("depends", ""),
        indent=int(indent_raw),
        final=final,
        distractor=distractor,
        text=_trim_blank_lines(inner),
        line=line,
    )


def parse_problem(text: str) -> list[ParsedAnswerElement]:
    """Extract every answer element from a document, in document order.

    Content outside elements is ignored. Document order defines the
    default bank order before shuffling.
    """
    elements: list[ParsedAnswerElement] = []
    seen: set[str] = set()
    pos = 0
    n = len(text)
    while True:
        start = text.find(_OPEN, pos)
        if start == -1:
            break
        after = start + len(_OPEN)
        # reject lookalikes such as <pl-answers
        if after < n and not (text[after].isspace() or text[after] == ">"):
            pos = after
            continue
        line = _line_of(text, start)
        attrs, body_start = _scan_attributes(text, after, line)
        close = text.find(_CLOSE, body_start)
        if close == -1:
            raise MalformedElementError(f"line {line}: element is never closed")
        element = _element_from_attrs(attrs, text[body_start:close], line)
        if element.tag in seen:
            raise DuplicateTagError(f"line {line}: duplicate tag {element.tag!r}")
        seen.add(element.tag)
        elements.append(element)
        pos = close + len(_CLOSE)
    if not elements:
        raise NoBlocksError("document contains no answer elements")
    return elements


def to_canonical(problem: ProblemMultigraph) -> str:
    """Serialize a problem to canonical JSON text.

    Field order and layout are fixed, so equal problems serialize to
    byte-identical text.
    """
    payload = {
        "version": CANONICAL_VERSION,
        "blocks": [
            {
                "tag": b.tag,
                "text": b.text,
                "indent": b.indent,
                "final": b.is_final,
                "distractor": b.is_distractor,
                "depends": [list(g.members) for g in problem.groups[b.tag]],
            }
            for b in problem.blocks.values()
        ],
    }
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def _require(condition: bool, path: str, message: str) -> None:
    if not condition:
        raise SchemaError(path, message)


def _is_int(v: object) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def from_canonical(text: str) -> ProblemMultigraph:
    """Parse canonical JSON text back into a validated problem."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"not valid JSON: {exc}") from exc
    _require(isinstance(data, dict), "$", "top level must be an object")
    unknown = set(data) - {"version", "blocks"}
    _require(not unknown, sorted(unknown)[0] if unknown else "$", "unknown field")
    _require("version" in data, "version", "missing")
    _require(data["version"] == CANONICAL_VERSION,
             "version", f"expected {CANONICAL_VERSION!r}, got {data['version']!r}")
    _require("blocks" in data, "blocks", "missing")
    _require(isinstance(data["blocks"], list), "blocks", "must be a list")
    if not data["blocks"]:
        raise NoBlocksError("canonical document lists no blocks")

    blocks: dict[str, Block] = {}
    groups: dict[str, tuple[DependencyGroup, ...]] = {}
    for i, raw in enumerate(data["blocks"]):
        path = f"blocks[{i}]"
        _require(isinstance(raw, dict), path, "must be an object")
        unknown = set(raw) - {"tag", "text", "indent", "final", "distractor", "depends"}
        _require(not unknown, f"{path}.{sorted(unknown)[0]}" if unknown else path,
                 "unknown field")
        for field_name in ("tag", "text", "indent", "final", "distractor", "depends"):
            _require(field_name in raw, f"{path}.{field_name}", "missing")
        _require(isinstance(raw["tag"], str) and raw["tag"] != "", f"{path}.tag",
                 "must be a non-empty string")
        _require(isinstance(raw["text"], str), f"{path}.text", "must be a string")
        _require(_is_int(raw["indent"]) and raw["indent"] >= 0, f"{path}.indent",
                 "must be a nonnegative integer")
        _require(isinstance(raw["final"], bool), f"{path}.final", "must be a boolean")
        _require(isinstance(raw["distractor"], bool), f"{path}.distractor",
                 "must be a boolean")
        _require(isinstance(raw["depends"], list), f"{path}.depends", "must be a list")
        tag = raw["tag"]
        if tag in blocks:
            raise DuplicateTagError(f"{path}.tag: duplicate tag {tag!r}")
        parsed_groups: list[DependencyGroup] = []
        for j, raw_group in enumerate(raw["depends"]):
            gpath = f"{path}.depends[{j}]"
            _require(isinstance(raw_group, list), gpath, "must be a list of tags")
            members: list[str] = []
            for k, member in enumerate(raw_group):
                _require(isinstance(member, str) and member != "", f"{gpath}[{k}]",
                         "must be a non-empty string")
                if member in members:
                    raise DuplicateTagInGroupError(
                        f"{gpath}: tag {member!r} repeated within one group"
                    )
                members.append(member)
            parsed_groups.append(DependencyGroup(tuple(members)))
        blocks[tag] = Block(
            tag=tag,
            text=raw["text"],
            indent=raw["indent"],
            is_final=raw["final"],
            is_distractor=raw["distractor"],
        )
        groups[tag] = tuple(parsed_groups)
    return assemble_multigraph(blocks, groups)


def load_problem(text: str) -> ProblemMultigraph:
    """Parse problem text in either supported format (sniffed, not by extension)."""
    if text.lstrip().startswith("{"):
        return from_canonical(text)
    return build_multigraph(parse_problem(text))
