"""Nested ordered set engine.

Elements live in two structures at once: a containment tree (one parent
each, single root) and a labelled strict-order DAG between synthetic top
and bottom bounds.  The engine validates both constraint families on every
mutation, enumerates labelled dimensions (upward paths) and sub-dimensions
(downward paths), and exports the canonical binary table whose columns are
all bottom-to-top paths.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Optional

from .errors import (
    CycleDetected,
    DuplicateLabel,
    NoSuchDimension,
    PathBudgetExceeded,
    SecondRoot,
    SyntacticViolation,
)

# Reserved prefixes for the implicit edges linking otherwise unbounded
# elements to the synthetic top/bottom bounds.
TOP_PREFIX = "⊤:"     # ⊤:
BOTTOM_PREFIX = "⊥:"  # ⊥:

DEFAULT_PATH_BUDGET = 10_000


def _check_label(label: str) -> None:
    if not label:
        raise ValueError("label must be non-empty")
    if "." in label:
        raise ValueError(f"label {label!r} may not contain a dot")
    if label.startswith((TOP_PREFIX, BOTTOM_PREFIX)):
        raise ValueError(f"label {label!r} uses a reserved prefix")


@dataclass(frozen=True)
class ComplexDimension:
    """An upward path: a dot-chained sequence of edge labels."""

    labels: tuple[str, ...]

    def __post_init__(self):
        if not self.labels:
            raise ValueError("a dimension has rank >= 1")

    @property
    def rank(self) -> int:
        return len(self.labels)

    @property
    def text(self) -> str:
        return ".".join(self.labels)

    def __str__(self) -> str:
        return self.text


class OrderEdge(NamedTuple):
    source: int
    label: str
    target: int


@dataclass
class PrimitiveTable:
    """Canonical binary table: one column per bottom-to-top path."""

    columns: list[ComplexDimension]
    rows: list[tuple[int, frozenset[str]]]  # (element, set of column texts)

    def to_csv(self, name_of: Callable[[int], str]) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["identity"] + [c.text for c in self.columns])
        for element, cells in self.rows:
            writer.writerow(
                [name_of(element)]
                + ["1" if c.text in cells else "0" for c in self.columns]
            )
        return buf.getvalue()


class OrderedModel:
    """Append-only model of elements, containment and labelled order edges.

    The first ``add_element(None)`` creates the root; the synthetic top and
    bottom bounds are created automatically as its children.  Elements
    without user edges are linked to the bounds implicitly with reserved
    labels, so the effective order graph is always a bounded DAG.
    """

    def __init__(self, path_budget: int = DEFAULT_PATH_BUDGET):
        self.path_budget = path_budget
        self._names: dict[int, str] = {}
        self._parents: dict[int, Optional[int]] = {}
        self._out: dict[int, dict[str, int]] = {}
        self._in: dict[int, list[tuple[str, int]]] = {}
        self._next_id = 0
        self.root: Optional[int] = None
        self.top: Optional[int] = None
        self.bottom: Optional[int] = None

    # --- construction -------------------------------------------------------

    def _new_node(self, parent: Optional[int], name: Optional[str]) -> int:
        node = self._next_id
        self._next_id += 1
        self._names[node] = name if name is not None else f"n{node}"
        self._parents[node] = parent
        self._out[node] = {}
        self._in[node] = []
        return node

    def add_element(self, parent: Optional[int] = None, name: Optional[str] = None) -> int:
        if parent is None:
            if self.root is not None:
                raise SecondRoot("the containment tree already has a root")
            self.root = self._new_node(None, name or "root")
            self.top = self._new_node(self.root, "⊤")
            self.bottom = self._new_node(self.root, "⊥")
            return self.root
        if parent not in self._names:
            raise KeyError(f"unknown parent element {parent}")
        return self._new_node(parent, name)

    def add_order_edge(self, source: int, label: str, target: int) -> OrderEdge:
        _check_label(label)
        for node in (source, target):
            if node not in self._names:
                raise KeyError(f"unknown element {node}")
            if node == self.root:
                raise SyntacticViolation("the root element does not participate in the order")
        if source == target:
            raise CycleDetected(f"self-loop {self._names[source]} -> {label}")
        if source == self.top:
            raise SyntacticViolation("top is the greatest element and has no super-elements")
        if target == self.bottom:
            raise SyntacticViolation("bottom is the least element and has no sub-elements")
        if label in self._out[source]:
            raise DuplicateLabel(f"{self._names[source]} already has dimension {label!r}")
        if self._reaches(target, source):
            raise CycleDetected(
                f"edge {self._names[source]} -> {self._names[target]} would close a cycle"
            )
        self._check_primitive_exclusivity(source, target)
        self._check_syntactic(source, label, target)
        self._out[source][label] = target
        self._in[target].append((label, source))
        return OrderEdge(source, label, target)

    def _reaches(self, start: int, goal: int) -> bool:
        stack = [start]
        seen = set()
        while stack:
            node = stack.pop()
            if node == goal:
                return True
            if node in seen:
                continue
            seen.add(node)
            stack.extend(self._out[node].values())
        return False

    def _check_primitive_exclusivity(self, source: int, target: int) -> None:
        # A primitive element (direct sub-element of top) has exactly one
        # outgoing edge, the one to top.
        outs = self._out[source]
        if target == self.top and outs:
            raise SyntacticViolation(
                f"{self._names[source]} already has super-elements and cannot become primitive"
            )
        if target != self.top and self.top in outs.values():
            raise SyntacticViolation(
                f"primitive element {self._names[source]} may only point to top"
            )

    def _check_syntactic(self, source: int, label: str, target: int) -> None:
        # Children may take super-elements only from among children of their
        # parent's super-elements.  Top/bottom are universal bounds and the
        # root does not participate in the order, so its children are exempt.
        if source in (self.top, self.bottom) or target in (self.top, self.bottom):
            return
        parent = self._parents[source]
        if parent is None or parent == self.root:
            return
        parent_targets = self._out[parent]
        if label not in parent_targets:
            raise SyntacticViolation(
                f"parent {self._names[parent]} has no dimension {label!r}"
            )
        bound = parent_targets[label]
        if not self._is_descendant_or_self(target, bound):
            raise SyntacticViolation(
                f"target {self._names[target]} is not under {self._names[bound]}"
            )

    def _is_descendant_or_self(self, node: int, ancestor: int) -> bool:
        cur: Optional[int] = node
        while cur is not None:
            if cur == ancestor:
                return True
            cur = self._parents[cur]
        return False

    # --- inspection -----------------------------------------------------------

    def elements(self, include_bounds: bool = True) -> list[int]:
        """All elements except the root, in creation order."""
        skip = {self.root} if include_bounds else {self.root, self.top, self.bottom}
        return [n for n in self._names if n not in skip]

    def name_of(self, e: int) -> str:
        return self._names[e]

    def parent_of(self, e: int) -> Optional[int]:
        return self._parents[e]

    def edges(self) -> list[OrderEdge]:
        return [
            OrderEdge(src, label, tgt)
            for src, outs in self._out.items()
            for label, tgt in outs.items()
        ]

    def super_element(self, e: int, label: str) -> int:
        try:
            return self._out[e][label]
        except KeyError:
            raise NoSuchDimension(f"{self._names.get(e, e)} has no dimension {label!r}") from None

    def arity(self, e: int) -> int:
        return len(self._out[e])

    def cardinality(self, e: int) -> int:
        return len(self._in[e])

    # --- effective (bounded) order graph --------------------------------------

    def _is_orderable(self, e: int) -> bool:
        return e not in (self.root, self.top, self.bottom)

    def effective_out(self, e: int) -> list[tuple[str, int]]:
        if e == self.top or e == self.root:
            return []
        if e == self.bottom:
            implicit = [
                (BOTTOM_PREFIX + self._names[n], n)
                for n in self._names
                if self._is_orderable(n) and not self._in[n]
            ]
            return list(self._out[e].items()) + implicit
        out = list(self._out[e].items())
        if not out:
            return [(TOP_PREFIX + self._names[e], self.top)]
        return out

    def effective_in(self, e: int) -> list[tuple[str, int]]:
        if e == self.bottom or e == self.root:
            return []
        if e == self.top:
            implicit = [
                (TOP_PREFIX + self._names[n], n)
                for n in self._names
                if self._is_orderable(n) and not self._out[n]
            ]
            return list(self._in[e]) + implicit
        inc = list(self._in[e])
        if not inc:
            return [(BOTTOM_PREFIX + self._names[e], self.bottom)]
        return inc

    # --- path enumeration -------------------------------------------------------

    def enumerate_dimensions(self, e: int, stop: Optional[int] = None) -> set[ComplexDimension]:
        """All upward paths from ``e`` (ending at ``stop`` when given)."""
        found: set[ComplexDimension] = set()
        steps = 0

        def walk(node: int, prefix: tuple[str, ...]) -> None:
            nonlocal steps
            for label, tgt in self.effective_out(node):
                steps += 1
                if steps > self.path_budget:
                    raise PathBudgetExceeded(f"more than {self.path_budget} paths explored")
                path = prefix + (label,)
                if stop is None or tgt == stop:
                    found.add(ComplexDimension(path))
                walk(tgt, path)

        walk(e, ())
        return found

    def enumerate_subdimensions(self, e: int, stop: Optional[int] = None) -> set[ComplexDimension]:
        """All downward paths from ``e``, reported in upward label order."""
        found: set[ComplexDimension] = set()
        steps = 0

        def walk(node: int, suffix: tuple[str, ...]) -> None:
            nonlocal steps
            for label, src in self.effective_in(node):
                steps += 1
                if steps > self.path_budget:
                    raise PathBudgetExceeded(f"more than {self.path_budget} paths explored")
                path = (label,) + suffix
                if stop is None or src == stop:
                    found.add(ComplexDimension(path))
                walk(src, path)

        walk(e, ())
        return found

    # --- canonical representation -------------------------------------------------

    def primitive_syntax(self) -> list[ComplexDimension]:
        """All bottom-to-top paths, lexicographic by dotted text."""
        if self.root is None:
            return []
        dims = self.enumerate_dimensions(self.bottom, self.top)
        return sorted(dims, key=lambda d: d.text)

    def primitive_semantics(self) -> PrimitiveTable:
        columns = self.primitive_syntax()
        rows: list[tuple[int, frozenset[str]]] = []
        if self.root is None:
            return PrimitiveTable(columns, rows)
        if columns:
            rows.append((self.top, frozenset()))
            rows.append((self.bottom, frozenset(c.text for c in columns)))
            for e in self.elements(include_bounds=False):
                supers = sorted(
                    self.enumerate_dimensions(e, self.top), key=lambda d: d.text
                )
                subs = sorted(
                    self.enumerate_subdimensions(e, self.bottom), key=lambda d: d.text
                )
                for f in subs:
                    cells = frozenset(f.text + "." + d.text for d in supers)
                    rows.append((e, cells))
        return PrimitiveTable(columns, rows)
