"""Canonical CoQL formatter.

``parse(pretty_print(parse(x))) == parse(x)`` for every valid program.
"""

from __future__ import annotations

from .nodes import (
    AccessPath,
    AggCall,
    Assignment,
    Binding,
    BoolOp,
    Compare,
    ConceptDecl,
    CreateTable,
    FieldDef,
    ForAll,
    IdentityLit,
    Insert,
    Literal,
    Node,
    NotOp,
    PathExpr,
    ProductExpr,
    Query,
    Select,
    SourceRef,
    Step,
    Term,
)


def _literal_text(value) -> str:
    if isinstance(value, str):
        return "'" + value.replace("'", "''") + "'"
    return str(value)


def _segment_text(segment: tuple) -> str:
    parts = [_segment_value_text(v) for v in segment]
    if len(parts) == 1:
        return parts[0]
    return "(" + ", ".join(parts) + ")"


def _segment_value_text(value) -> str:
    if isinstance(value, str):
        return _literal_text(value)
    return str(value)


def _field_text(f: FieldDef) -> str:
    if f.type_name == "CHAR":
        return f"CHAR({f.char_len}) {f.name}"
    return f"{f.type_name} {f.name}"


def _source_text(src: SourceRef) -> str:
    out = src.name
    if src.alias:
        out += f" {src.alias}"
    if src.predicate is not None:
        out += f" | {expr_text(src.predicate)}"
    return out


def _binding_text(b: Binding) -> str:
    prefix = f"{b.type_name} " if b.type_name else ""
    return f"{prefix}{b.name} = {expr_text(b.expr)}"


def expr_text(node: Node) -> str:
    if isinstance(node, Literal):
        return _literal_text(node.value)
    if isinstance(node, IdentityLit):
        return "<" + "/".join(_segment_text(s) for s in node.segments) + ">"
    if isinstance(node, PathExpr):
        return ".".join(node.parts)
    if isinstance(node, AggCall):
        return f"{node.fn}({expr_text(node.arg)})"
    if isinstance(node, Compare):
        return f"{expr_text(node.left)} {node.op} {expr_text(node.right)}"
    if isinstance(node, BoolOp):
        left, right = expr_text(node.left), expr_text(node.right)
        if isinstance(node.left, BoolOp) and node.left.op != node.op:
            left = f"({left})"
        if isinstance(node.right, BoolOp):
            right = f"({right})"
        return f"{left} {node.op} {right}"
    if isinstance(node, NotOp):
        inner = expr_text(node.operand)
        if isinstance(node.operand, (BoolOp, Compare)):
            inner = f"({inner})"
        return f"NOT {inner}"
    if isinstance(node, Term):
        if node.alias is None and node.predicate is None:
            out = node.name
        else:
            out = "(" + _source_text(SourceRef(node.name, node.alias, node.predicate)) + ")"
        if node.field_suffix:
            out += f".{node.field_suffix}"
        return out
    if isinstance(node, ProductExpr):
        parts = [_source_text(s) for s in node.sources]
        parts += [_binding_text(b) for b in node.bindings]
        return "(" + ", ".join(parts) + ")"
    if isinstance(node, AccessPath):
        head = expr_text(node.head)
        if isinstance(node.head, Term) and node.head.alias is None and node.head.predicate is None:
            head = node.head.name
        out = head
        for step in node.steps:
            out += _step_text(step)
        return out
    raise TypeError(f"cannot format {type(node).__name__}")


def _step_text(step: Step) -> str:
    dim = ".".join(step.dims)
    return f" {step.direction} {dim} {step.direction} {expr_text(step.term)}"


def statement_text(stmt: Node) -> str:
    if isinstance(stmt, ConceptDecl):
        head = f"CONCEPT {stmt.name}"
        if stmt.parent:
            head += f" IN {stmt.parent}"
        identity = [f for f in stmt.fields if f.kind == "identity"]
        entity = [f for f in stmt.fields if f.kind == "entity"]
        lines = [head, "IDENTITY " + ", ".join(_field_text(f) for f in identity)]
        if entity:
            lines.append("ENTITY " + ", ".join(_field_text(f) for f in entity))
        return "\n".join(lines)
    if isinstance(stmt, CreateTable):
        out = f"CREATE TABLE {stmt.table} CONCEPT {stmt.concept}"
        if stmt.parent_table:
            out += f" IN {stmt.parent_table}"
        if stmt.bindings:
            out += "\n" + ", ".join(f"{f} = {c}" for f, c in stmt.bindings)
        return out
    if isinstance(stmt, Insert):
        out = f"INSERT INTO {stmt.table}"
        if stmt.under is not None:
            out += f" UNDER {expr_text(stmt.under)}"
        out += " (" + ", ".join(f"{f} = {expr_text(v)}" for f, v in stmt.assigns) + ")"
        return out
    if isinstance(stmt, Select):
        cols = ", ".join(expr_text(c) for c in stmt.columns)
        return f"SELECT {cols} FROM {stmt.table}"
    if isinstance(stmt, Assignment):
        return f"Collection {stmt.name} = {expr_text(stmt.expr)}"
    if isinstance(stmt, ForAll):
        lines = ["FORALL (" + ", ".join(_source_text(s) for s in stmt.sources) + ")"]
        if stmt.where is not None:
            lines.append(f"WHERE ({expr_text(stmt.where)})")
        if stmt.bindings:
            lines.append("BODY (" + ", ".join(_binding_text(b) for b in stmt.bindings) + ")")
        lines.append("RETURN (" + ", ".join(expr_text(r) for r in stmt.returns) + ")")
        return "\n".join(lines)
    if isinstance(stmt, Query):
        return expr_text(stmt.expr)
    raise TypeError(f"cannot format {type(stmt).__name__}")


def pretty_print(statements) -> str:
    if isinstance(statements, Node):
        statements = [statements]
    return "\n".join(statement_text(s) for s in statements)
