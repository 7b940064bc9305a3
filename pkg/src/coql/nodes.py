"""AST for CoQL statements.

Spans are carried for error reporting but excluded from equality so that
parse -> pretty-print -> parse is a fixpoint on node values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional, Union


@dataclass(frozen=True)
class Span:
    line: int
    col: int
    end_line: int
    end_col: int


def _span_field():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Node:
    pass


@dataclass(frozen=True)
class Literal(Node):
    value: Any  # str | int | float
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class IdentityLit(Node):
    """Complex identity literal: ``<seg/seg/...>``, segments are value tuples."""

    segments: tuple[tuple[Any, ...], ...]
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class FieldDef(Node):
    kind: str  # "identity" | "entity"
    type_name: str
    name: str
    char_len: Optional[int] = None
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class ConceptDecl(Node):
    name: str
    parent: Optional[str]
    fields: tuple[FieldDef, ...]
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class CreateTable(Node):
    table: str
    concept: str
    parent_table: Optional[str]
    bindings: tuple[tuple[str, str], ...]
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Insert(Node):
    table: str
    under: Optional[IdentityLit]
    assigns: tuple[tuple[str, Node], ...]  # field -> Literal | IdentityLit
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class PathExpr(Node):
    """Dotted path: fields, `parent` steps, aliases or collection names."""

    parts: tuple[str, ...]
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Compare(Node):
    op: str  # = == != < <= > >=
    left: Node
    right: Node
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class BoolOp(Node):
    op: str  # AND | OR
    left: Node
    right: Node
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class NotOp(Node):
    operand: Node
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class AggCall(Node):
    fn: str  # SUM | SIZE | MIN | MAX | AVG
    arg: Node
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Term(Node):
    """Collection term: name with optional alias, restriction and field suffix."""

    name: str
    alias: Optional[str] = None
    predicate: Optional[Node] = None
    field_suffix: Optional[str] = None
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Step(Node):
    direction: str  # "->" | "<-"
    dims: tuple[str, ...]  # labels, or ("parent",)
    term: "Term | ProductExpr"
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class AccessPath(Node):
    head: Union[Term, PathExpr, "ProductExpr"]
    steps: tuple[Step, ...]
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Binding(Node):
    type_name: Optional[str]  # "Collection", a primitive type, or None
    name: str
    expr: Node
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class SourceRef(Node):
    name: str
    alias: Optional[str] = None
    predicate: Optional[Node] = None
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class ProductExpr(Node):
    sources: tuple[SourceRef, ...]
    bindings: tuple[Binding, ...] = ()
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class ForAll(Node):
    sources: tuple[SourceRef, ...]
    where: Optional[Node]
    bindings: tuple[Binding, ...]
    returns: tuple[PathExpr, ...]
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Select(Node):
    columns: tuple[PathExpr, ...]
    table: str
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Assignment(Node):
    name: str
    expr: Node
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Query(Node):
    """Bare expression statement (access path or product)."""

    expr: Node
    span: Optional[Span] = _span_field()


Statement = Union[ConceptDecl, CreateTable, Insert, Select, Assignment, ForAll, Query]
