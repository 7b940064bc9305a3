"""Collection-level navigation algebra over item sets.

Projection moves up along concept-typed fields (duplicate-free),
de-projection moves down to referencing items, the `parent` variants walk
the containment hierarchy, and product builds transient cells that combine
one member per input.  All operations are read-only with respect to the
database.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

from .errors import (
    CollectionMismatch,
    EmptyAggregate,
    NoParentConcept,
    NonNumericField,
    NotAChildCollection,
    UnknownDimension,
)
from .schema import Collection, Database, Item

_transient_counter = itertools.count()


@dataclass(eq=False)
class TransientItem:
    """Product cell: fresh identity, one super-item per input set."""

    values: dict[str, Any]
    serial: int = field(default_factory=lambda: next(_transient_counter))


@dataclass(frozen=True)
class ItemSet:
    """Ordered, duplicate-free items drawn from one collection.

    ``collection`` is None for transient (product) sets.
    """

    collection: Optional[str]
    items: tuple = ()

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)


def _key(item) -> Any:
    if isinstance(item, Item):
        return (item.collection, item.identity.segments)
    return ("transient", item.serial)


def from_collection(db: Database, name: str) -> ItemSet:
    return ItemSet(name, tuple(db.collection(name).items))


def _concept_of(db: Database, s: ItemSet):
    if s.collection is None:
        return None
    return db.collection(s.collection).concept


def _project_step(db: Database, s: ItemSet, label: str) -> ItemSet:
    concept = _concept_of(db, s)
    target_name = None
    if concept is not None:
        spec = concept.field(label)
        if spec is None or not spec.is_concept:
            raise UnknownDimension(
                f"{label!r} is not a concept-typed field of {concept.name}"
            )
        target_name = db.collection(s.collection).bindings[label].name
    out: list = []
    seen: set = set()
    for item in s:
        if isinstance(item, TransientItem):
            value = item.values.get(label)
            if value is None:
                continue  # transient cells may lack the navigated field
            target = value
        else:
            target = db.resolve(target_name, item.values[label])
        k = _key(target)
        if k not in seen:
            seen.add(k)
            out.append(target)
    if target_name is None and out:
        target_name = out[0].collection if isinstance(out[0], Item) else None
    return ItemSet(target_name, tuple(out))


def project(db: Database, s: ItemSet, dimension: Sequence[str]) -> ItemSet:
    """Left fold of simple projections along a rank-k dimension."""
    if not dimension:
        raise UnknownDimension("projection needs a dimension of rank >= 1")
    for label in dimension:
        s = _project_step(db, s, label)
    return s


def deproject(db: Database, s: ItemSet, label: str, source_collection: str) -> ItemSet:
    """All items of ``source_collection`` whose field ``label`` lands in ``s``."""
    F = db.collection(source_collection)
    spec = F.concept.field(label)
    if spec is None or not spec.is_concept:
        raise UnknownDimension(
            f"{label!r} is not a concept-typed field of {F.concept.name}"
        )
    if s.collection is not None and spec.type_name != db.collection(s.collection).concept.name:
        raise UnknownDimension(
            f"field {label!r} of {F.concept.name} points to {spec.type_name}, "
            f"not {db.collection(s.collection).concept.name}"
        )
    wanted = {item.identity for item in s if isinstance(item, Item)}
    return ItemSet(
        source_collection,
        tuple(item for item in F.items if item.values[label] in wanted),
    )


def project_parent(db: Database, s: ItemSet) -> ItemSet:
    concept = _concept_of(db, s)
    if concept is None or concept.parent is None:
        raise NoParentConcept(s.collection or "<transient>")
    parent_name = db.collection(s.collection).parent.name
    out: list[Item] = []
    seen: set = set()
    for item in s:
        parent = item.parent
        k = _key(parent)
        if k not in seen:
            seen.add(k)
            out.append(parent)
    return ItemSet(parent_name, tuple(out))


def deproject_children(db: Database, s: ItemSet, child_collection: str) -> ItemSet:
    F = db.collection(child_collection)
    if s.collection is None or F.parent is None or F.parent.name != s.collection:
        raise NotAChildCollection(
            f"{child_collection} is not a child collection of {s.collection}"
        )
    wanted = {item.identity for item in s if isinstance(item, Item)}
    return ItemSet(
        child_collection,
        tuple(item for item in F.items if item.parent.identity in wanted),
    )


def restrict(s: ItemSet, predicate: Callable[[Any], bool]) -> ItemSet:
    return ItemSet(s.collection, tuple(item for item in s if predicate(item)))


def product(sets: Sequence[ItemSet], names: Optional[Sequence[str]] = None) -> ItemSet:
    if not sets:
        raise ValueError("product needs at least one input")
    if names is None:
        names = [f"f{i}" for i in range(len(sets))]
    cells = tuple(
        TransientItem(dict(zip(names, combo)))
        for combo in itertools.product(*(s.items for s in sets))
    )
    return ItemSet(None, cells)


def union(a: ItemSet, b: ItemSet) -> ItemSet:
    if a.collection != b.collection:
        raise CollectionMismatch(f"{a.collection} vs {b.collection}")
    out: list = []
    seen: set = set()
    for item in itertools.chain(a, b):
        k = _key(item)
        if k not in seen:
            seen.add(k)
            out.append(item)
    return ItemSet(a.collection, tuple(out))


def intersect(a: ItemSet, b: ItemSet) -> ItemSet:
    if a.collection != b.collection:
        raise CollectionMismatch(f"{a.collection} vs {b.collection}")
    keep = {_key(item) for item in b}
    out: list = []
    seen: set = set()
    for item in a:
        k = _key(item)
        if k in keep and k not in seen:
            seen.add(k)
            out.append(item)
    return ItemSet(a.collection, tuple(out))


AGGREGATES = ("SUM", "SIZE", "MIN", "MAX", "AVG")


def aggregate_values(values: Sequence[Any], fn: str):
    fn = fn.upper()
    if fn == "SIZE":
        return len(values)
    for v in values:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise NonNumericField(repr(v))
    if fn == "SUM":
        return sum(values) if values else 0
    if not values:
        raise EmptyAggregate(fn)
    if fn == "MIN":
        return min(values)
    if fn == "MAX":
        return max(values)
    if fn == "AVG":
        return sum(values) / len(values)
    raise ValueError(f"unknown aggregation {fn!r}")


def aggregate(s: ItemSet, fn: str, field_name: Optional[str] = None):
    fn = fn.upper()
    if fn == "SIZE":
        return len(s)
    if field_name is None:
        raise NonNumericField(f"{fn} needs a numeric field")
    values = []
    for item in s:
        if field_name not in item.values:
            raise NonNumericField(f"{field_name!r} missing on a member")
        values.append(item.values[field_name])
    return aggregate_values(values, fn)
