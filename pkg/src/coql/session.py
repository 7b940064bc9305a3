"""Statement execution: declarations, access paths, predicates and cubes."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Optional

from . import navigate as nav
from .errors import (
    BudgetExceeded,
    TypeCheckError,
    UnknownField,
)
from .navigate import ItemSet
from .nodes import (
    AccessPath,
    AggCall,
    Assignment,
    Binding,
    BoolOp,
    Compare,
    ConceptDecl,
    CreateTable,
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
    Term,
)
from .parser import parse
from .schema import ComplexIdentity, Concept, Database, FieldSpec, Item

DEFAULT_EVAL_BUDGET = 1_000_000


@dataclass(frozen=True)
class ResultTable:
    columns: tuple[tuple[str, str], ...]  # (name, type)
    rows: tuple[tuple, ...]

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.columns)


def _type_name(value: Any) -> str:
    if isinstance(value, bool):
        return "INT"
    if isinstance(value, int):
        return "INT"
    if isinstance(value, float):
        return "DOUBLE"
    if isinstance(value, str):
        return "CHAR"
    if isinstance(value, ComplexIdentity):
        return "IDENTITY"
    return "ANY"


def _make_table(names, rows) -> ResultTable:
    rows = tuple(tuple(r) for r in rows)
    types = []
    for i, name in enumerate(names):
        sample = next((row[i] for row in rows if row[i] is not None), None)
        types.append(_type_name(sample))
    return ResultTable(tuple(zip(names, types)), rows)


class Session:
    """One evaluation context over a database: named collection variables
    plus budget counters.  Queries are read-only; declarations mutate."""

    def __init__(self, db: Optional[Database] = None, budget: int = DEFAULT_EVAL_BUDGET):
        self.db = db if db is not None else Database()
        self.vars: dict[str, ItemSet] = {}
        self.budget = budget

    # --- entry points ----------------------------------------------------------

    def run(self, text: str) -> list[Optional[ResultTable]]:
        return [self.execute(stmt) for stmt in parse(text)]

    def execute(self, stmt: Node) -> Optional[ResultTable]:
        if isinstance(stmt, ConceptDecl):
            self._declare_concept(stmt)
            return None
        if isinstance(stmt, CreateTable):
            self.db.create_collection(
                stmt.table, stmt.concept, stmt.parent_table, dict(stmt.bindings)
            )
            return None
        if isinstance(stmt, Insert):
            self._insert(stmt)
            return None
        if isinstance(stmt, Select):
            return self._select(stmt)
        if isinstance(stmt, Assignment):
            return self._assignment(stmt)
        if isinstance(stmt, ForAll):
            return self._forall(stmt.sources, stmt.where, stmt.bindings,
                                [r.parts for r in stmt.returns])
        if isinstance(stmt, Query):
            return self._query(stmt)
        raise TypeCheckError(f"cannot execute {type(stmt).__name__}", getattr(stmt, "span", None))

    # --- declarations -------------------------------------------------------------

    def _declare_concept(self, stmt: ConceptDecl) -> None:
        fields = tuple(
            FieldSpec(f.name, f.kind, f.type_name, f.char_len) for f in stmt.fields
        )
        concept = Concept(
            stmt.name,
            stmt.parent,
            tuple(f for f in fields if f.kind == "identity"),
            tuple(f for f in fields if f.kind == "entity"),
        )
        self.db.declare_concept(concept)

    def _insert(self, stmt: Insert) -> ComplexIdentity:
        values = {}
        for field, node in stmt.assigns:
            if isinstance(node, IdentityLit):
                values[field] = ComplexIdentity(node.segments)
            else:
                values[field] = node.value
        under = ComplexIdentity(stmt.under.segments) if stmt.under else None
        return self.db.insert_item(stmt.table, values, under)

    # --- queries --------------------------------------------------------------------

    def _select(self, stmt: Select) -> ResultTable:
        items = self._named_set(stmt.table, stmt.span)
        rows = []
        for item in items:
            rows.append(
                tuple(self._scalar(self._walk(item, col.parts)) for col in stmt.columns)
            )
        return _make_table([".".join(c.parts) for c in stmt.columns], rows)

    def _assignment(self, stmt: Assignment) -> ResultTable:
        if stmt.name in self.db.collections:
            raise TypeCheckError(
                f"variable {stmt.name!r} would shadow a collection", stmt.span
            )
        value = self._eval(stmt.expr, None, {})
        if not isinstance(value, ItemSet):
            raise TypeCheckError(
                f"Collection {stmt.name} must be bound to a collection value", stmt.span
            )
        self.vars[stmt.name] = value
        return self._set_table(value)

    def _query(self, stmt: Query) -> ResultTable:
        expr = stmt.expr
        if isinstance(expr, ProductExpr) and expr.bindings:
            # inline cube: sources with measures, returned as alias columns
            returns = [
                ((s.alias or s.name),) for s in expr.sources
            ] + [(b.name,) for b in expr.bindings]
            return self._forall(expr.sources, None, expr.bindings, returns)
        value = self._eval(expr, None, {})
        if isinstance(value, ItemSet):
            return self._set_table(value)
        if isinstance(value, list):
            return _make_table(["value"], [(v,) for v in value])
        return _make_table(["value"], [(self._scalar(value),)])

    def _forall(self, sources, where, bindings, returns) -> ResultTable:
        sets, aliases = [], []
        for src in sources:
            s = self._named_set(src.name, src.span)
            if src.predicate is not None:
                s = self._restrict(s, src.predicate, src.alias, {})
            sets.append(s)
            aliases.append(src.alias or src.name)
        total = 1
        for s in sets:
            total *= len(s)
        if total > self.budget:
            raise BudgetExceeded(f"product of {total} cells exceeds budget {self.budget}")
        rows = []
        for combo in itertools.product(*(s.items for s in sets)):
            env: dict[str, Any] = dict(zip(aliases, combo))
            if where is not None and not self._truthy(self._eval(where, None, env)):
                continue
            for b in bindings:
                env[b.name] = self._eval(b.expr, None, env)
            rows.append(tuple(self._scalar(self._resolve_path(parts, None, env))
                              for parts in returns))
        return _make_table([".".join(parts) for parts in returns], rows)

    def _set_table(self, s: ItemSet) -> ResultTable:
        rows = [(self._scalar(item),) for item in s]
        return _make_table(["identity"], rows)

    # --- expression evaluation -------------------------------------------------------

    def _eval(self, node: Node, item: Optional[Item], env: dict) -> Any:
        if isinstance(node, Literal):
            return node.value
        if isinstance(node, IdentityLit):
            return ComplexIdentity(node.segments)
        if isinstance(node, PathExpr):
            return self._resolve_path(node.parts, item, env)
        if isinstance(node, AggCall):
            return self._aggregate(node, item, env)
        if isinstance(node, Compare):
            return self._compare(node, item, env)
        if isinstance(node, BoolOp):
            left = self._truthy(self._eval(node.left, item, env))
            if node.op == "AND":
                return left and self._truthy(self._eval(node.right, item, env))
            return left or self._truthy(self._eval(node.right, item, env))
        if isinstance(node, NotOp):
            return not self._truthy(self._eval(node.operand, item, env))
        if isinstance(node, Term):
            s, suffix = self._resolve_term(node, item, env)
            return self._field_values(s, suffix) if suffix else s
        if isinstance(node, ProductExpr):
            if node.bindings:
                raise TypeCheckError("measure bindings are not allowed here", node.span)
            return self._product(node, item, env)
        if isinstance(node, AccessPath):
            return self._access_path(node, item, env)
        raise TypeCheckError(f"cannot evaluate {type(node).__name__}",
                             getattr(node, "span", None))

    def _product(self, node: ProductExpr, item, env) -> ItemSet:
        sets, names = [], []
        for src in node.sources:
            s = self._named_set(src.name, src.span)
            if src.predicate is not None:
                s = self._restrict(s, src.predicate, src.alias, env)
            sets.append(s)
            names.append(src.alias or src.name)
        total = 1
        for s in sets:
            total *= len(s)
        if total > self.budget:
            raise BudgetExceeded(f"product of {total} cells exceeds budget {self.budget}")
        return nav.product(sets, names)

    def _aggregate(self, node: AggCall, item, env) -> Any:
        value = self._eval(node.arg, item, env)
        if isinstance(value, ItemSet):
            if node.fn == "SIZE":
                return len(value)
            raise TypeCheckError(
                f"{node.fn} needs a field, e.g. Collection.field", node.span
            )
        if isinstance(value, list):
            return nav.aggregate_values(value, node.fn)
        raise TypeCheckError(f"{node.fn} expects a collection", node.span)

    def _compare(self, node: Compare, item, env) -> bool:
        left = self._scalar(self._eval(node.left, item, env))
        right = self._scalar(self._eval(node.right, item, env))
        op = node.op
        if op in ("=", "=="):
            return left == right
        if op == "!=":
            return left != right
        for v in (left, right):
            if not isinstance(v, (int, float, str)):
                raise TypeCheckError(f"cannot order {v!r}", node.span)
        if isinstance(left, str) != isinstance(right, str):
            raise TypeCheckError(f"cannot compare {left!r} with {right!r}", node.span)
        if op == "<":
            return left < right
        if op == "<=":
            return left <= right
        if op == ">":
            return left > right
        return left >= right

    def _truthy(self, value: Any) -> bool:
        if isinstance(value, bool):
            return value
        raise TypeCheckError(f"predicate did not evaluate to a boolean: {value!r}")

    def _scalar(self, value: Any) -> Any:
        if isinstance(value, Item):
            return value.identity
        if isinstance(value, nav.TransientItem):
            return tuple(self._scalar(v) for v in value.values.values())
        return value

    # --- path resolution ---------------------------------------------------------------

    def _resolve_path(self, parts: tuple[str, ...], item: Optional[Item], env: dict) -> Any:
        first = parts[0]
        if first == "this":
            if item is None:
                raise TypeCheckError("'this' is only available inside a restriction")
            return self._walk(item, parts[1:])
        if first == "parent":
            if item is None:
                raise TypeCheckError("'parent' needs a current item")
            return self._walk(item, parts)
        if item is not None:
            try:
                return self._walk(item, parts)
            except UnknownField:
                pass
        if first in env:
            base = env[first]
            if isinstance(base, (Item, nav.TransientItem)):
                return self._walk(base, parts[1:])
            if len(parts) == 1:
                return base
            if isinstance(base, ItemSet):
                return self._set_path(base, parts[1:])
            raise TypeCheckError(f"cannot navigate into {first!r}")
        if first in self.vars or first in self.db.collections:
            return self._set_path(self._named_set(first, None), parts[1:])
        raise TypeCheckError(f"cannot resolve {'.'.join(parts)!r}")

    def _set_path(self, s: ItemSet, rest: tuple[str, ...]) -> Any:
        if not rest:
            return s
        if len(rest) == 1:
            return self._field_values(s, rest[0])
        raise TypeCheckError(f"collection paths take at most one field, got {'.'.join(rest)!r}")

    def _field_values(self, s: ItemSet, field: str) -> list:
        values = []
        for item in s:
            if isinstance(item, nav.TransientItem):
                raise TypeCheckError(f"product cells have no field {field!r}")
            values.append(self.db.step_field(item, field))
        return [self._scalar(v) for v in values]

    def _walk(self, item, steps) -> Any:
        cur: Any = item
        for step in steps:
            if isinstance(cur, nav.TransientItem):
                if step not in cur.values:
                    raise UnknownField(f"product cell has no field {step!r}")
                cur = cur.values[step]
                continue
            if not isinstance(cur, Item):
                raise UnknownField(f"cannot navigate {step!r} from {cur!r}")
            cur = self._step_lenient(cur, step)
        return cur

    def _step_lenient(self, item: Item, step: str) -> Any:
        try:
            return self.db.step_field(item, step)
        except UnknownField:
            concept = self.db.collection(item.collection).concept
            if step.lower() == concept.name.lower():
                return item  # redundant concept-name step is a no-op
            ancestor = item.parent
            while ancestor is not None:
                anc_concept = self.db.collection(ancestor.collection).concept
                if any(f.name == step for f in anc_concept.identity_fields):
                    return self.db.step_field(ancestor, step)
                ancestor = ancestor.parent
            raise

    # --- access paths ----------------------------------------------------------------------

    def _named_set(self, name: str, span) -> ItemSet:
        if name in self.vars:
            return self.vars[name]
        if name in self.db.collections:
            return nav.from_collection(self.db, name)
        raise TypeCheckError(f"unknown collection {name!r}", span)

    def _restrict(self, s: ItemSet, predicate: Node, alias: Optional[str], env: dict) -> ItemSet:
        def check(candidate) -> bool:
            local = dict(env)
            if alias:
                local[alias] = candidate
            return self._truthy(self._eval(predicate, candidate, local))

        return nav.restrict(s, check)

    def _resolve_term(self, term, item, env):
        if isinstance(term, ProductExpr):
            return self._product(term, item, env), None
        name = term.name
        if name in env and isinstance(env[name], (Item, nav.TransientItem)):
            base = ItemSet(getattr(env[name], "collection", None), (env[name],))
        else:
            base = self._named_set(name, term.span)
        if term.predicate is not None:
            base = self._restrict(base, term.predicate, term.alias, env)
        return base, term.field_suffix

    def _access_path(self, node: AccessPath, item, env):
        head = node.head
        suffix = None
        if isinstance(head, Term):
            cur, suffix = self._resolve_term(head, item, env)
        elif isinstance(head, ProductExpr):
            cur = self._product(head, item, env)
        else:  # PathExpr: alias, `this`, variable or collection name
            value = self._resolve_path(head.parts, item, env)
            if isinstance(value, ItemSet):
                cur = value
            elif isinstance(value, (Item, nav.TransientItem)):
                cur = ItemSet(getattr(value, "collection", None), (value,))
            else:
                raise TypeCheckError(
                    f"access path head {'.'.join(head.parts)!r} is not a collection",
                    head.span,
                )
        if suffix is not None and node.steps:
            raise TypeCheckError("field suffix is only allowed on the final term", node.span)
        for step in node.steps:
            if not cur.items:
                # nothing can flow further; skip restrictions entirely
                term = step.term
                cname = term.name if isinstance(term, Term) else None
                if cname is not None and cname not in self.vars \
                        and cname not in self.db.collections and cname not in env:
                    raise TypeCheckError(f"unknown collection {cname!r}", step.span)
                suffix = term.field_suffix if isinstance(term, Term) else None
                cur = ItemSet(cname, ())
                continue
            target_set, suffix = self._resolve_term(step.term, item, env)
            if step is not node.steps[-1] and suffix is not None:
                raise TypeCheckError("field suffix is only allowed on the final term",
                                     step.span)
            if not cur.items:
                cur = ItemSet(target_set.collection, ())
                continue
            if step.direction == "->":
                if step.dims == ("parent",):
                    result = nav.project_parent(self.db, cur)
                else:
                    result = nav.project(self.db, cur, step.dims)
                result = self._member_filter(result, target_set)
            else:
                if target_set.collection is None:
                    raise TypeCheckError("cannot de-project into a product", step.span)
                if step.dims == ("parent",):
                    result = nav.deproject_children(self.db, cur, target_set.collection)
                else:
                    if len(step.dims) != 1:
                        raise TypeCheckError("de-projection uses a simple dimension",
                                             step.span)
                    result = nav.deproject(self.db, cur, step.dims[0],
                                           target_set.collection)
                result = self._member_filter(result, target_set)
            self._check_budget(result)
            cur = result
        if suffix is not None:
            return self._field_values(cur, suffix)
        return cur

    @staticmethod
    def _member_filter(result: ItemSet, allowed: ItemSet) -> ItemSet:
        keys = {nav._key(i) for i in allowed}
        return ItemSet(
            allowed.collection,
            tuple(i for i in result if nav._key(i) in keys),
        )

    def _check_budget(self, s: ItemSet) -> None:
        if len(s) > self.budget:
            raise BudgetExceeded(
                f"intermediate collection of {len(s)} items exceeds budget {self.budget}"
            )
