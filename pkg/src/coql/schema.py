"""Two-level model: concepts and collections above, items below.

Concepts pair an identity class with an entity class; concept-typed fields
induce super-concepts.  Collections are named extents bound to a parent
collection and to one super-collection per concept-typed field.  Items are
addressed by complex identity (root-first segment chain) and mirrored into
an :class:`~coql.order.OrderedModel` node with one order edge per
concept-typed field.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Any, Optional

from .errors import (
    BindingMismatch,
    DanglingReference,
    DuplicateCollection,
    DuplicateConcept,
    DuplicateIdentity,
    InclusionCycle,
    MissingBinding,
    MissingParent,
    MissingParentCollection,
    NotFound,
    NullParent,
    SchemaError,
    SegmentCountMismatch,
    TypeMismatch,
    UnknownCollection,
    UnknownConcept,
    UnknownField,
    UnknownFieldType,
    UnknownParent,
)
from .order import OrderedModel

PRIMITIVE_TYPES = ("CHAR", "DOUBLE", "INT")

IDENTITY = "identity"
ENTITY = "entity"


@dataclass(frozen=True)
class FieldSpec:
    name: str
    kind: str  # IDENTITY or ENTITY
    type_name: str  # "CHAR" | "DOUBLE" | "INT" | concept name
    char_len: Optional[int] = None

    @property
    def is_concept(self) -> bool:
        return self.type_name not in PRIMITIVE_TYPES


@dataclass(frozen=True)
class Concept:
    name: str
    parent: Optional[str]
    identity_fields: tuple[FieldSpec, ...]
    entity_fields: tuple[FieldSpec, ...]

    @property
    def fields(self) -> tuple[FieldSpec, ...]:
        return self.identity_fields + self.entity_fields

    def field(self, name: str) -> Optional[FieldSpec]:
        for f in self.fields:
            if f.name == name:
                return f
        return None

    def concept_fields(self) -> tuple[FieldSpec, ...]:
        return tuple(f for f in self.fields if f.is_concept)


@dataclass(frozen=True)
class ComplexIdentity:
    """Root-first chain of identity segments, each a tuple of field values."""

    segments: tuple[tuple[Any, ...], ...]

    def __post_init__(self):
        if not self.segments:
            raise ValueError("a complex identity has at least one segment")

    @property
    def text(self) -> str:
        def seg(s: tuple[Any, ...]) -> str:
            return ",".join(str(v) for v in s)

        return "/".join(seg(s) for s in self.segments)

    def __str__(self) -> str:
        return self.text


@dataclass(eq=False)
class Item:
    collection: str
    local: tuple[Any, ...]
    values: dict[str, Any]
    parent: Optional["Item"]
    node: int
    identity: ComplexIdentity = field(init=False)

    def __post_init__(self):
        parent_segments = self.parent.identity.segments if self.parent else ()
        self.identity = ComplexIdentity(parent_segments + (self.local,))


@dataclass
class Collection:
    name: str
    concept: Concept
    parent: Optional["Collection"]
    bindings: dict[str, "Collection"]
    items: list[Item] = field(default_factory=list)
    by_identity: dict[tuple, Item] = field(default_factory=dict)

    @property
    def depth(self) -> int:
        return 1 + (self.parent.depth if self.parent else 0)


def _coerce(spec: FieldSpec, value: Any) -> Any:
    if spec.type_name == "CHAR":
        if not isinstance(value, str):
            raise TypeMismatch(f"field {spec.name!r} expects text, got {value!r}")
        value = value.rstrip(" ")
        if spec.char_len is not None and len(value) > spec.char_len:
            raise TypeMismatch(
                f"field {spec.name!r} is CHAR({spec.char_len}), got {len(value)} chars"
            )
        return value
    if spec.type_name == "INT":
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeMismatch(f"field {spec.name!r} expects an integer, got {value!r}")
        return value
    if spec.type_name == "DOUBLE":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise TypeMismatch(f"field {spec.name!r} expects a number, got {value!r}")
        return float(value)
    if not isinstance(value, ComplexIdentity):
        raise TypeMismatch(
            f"field {spec.name!r} expects a {spec.type_name} identity, got {value!r}"
        )
    return value


class Database:
    """Holds the declared schema, the stored items and both order models."""

    def __init__(self, path_budget: int = 10_000):
        self.model = OrderedModel(path_budget=path_budget)
        self.model.add_element(None, name="database")
        self.concept_model = OrderedModel(path_budget=path_budget)
        self.concept_model.add_element(None, name="schema")
        self.concepts: dict[str, Concept] = {}
        self.concept_nodes: dict[str, int] = {}
        self.collections: dict[str, Collection] = {}
        self._node_display: dict[int, str] = {
            self.model.top: "⊤",
            self.model.bottom: "⊥",
        }

    # --- schema ------------------------------------------------------------------

    def declare_concept(self, concept: Concept) -> None:
        if concept.name in self.concepts:
            raise DuplicateConcept(concept.name)
        if concept.parent is not None and concept.parent not in self.concepts:
            raise UnknownParent(concept.parent)
        if not concept.identity_fields:
            raise SchemaError(f"concept {concept.name} needs at least one identity field")
        seen: set[str] = set()
        for f in concept.fields:
            if f.name in seen:
                raise SchemaError(f"duplicate field {f.name!r} in concept {concept.name}")
            seen.add(f.name)
            if f.is_concept and f.type_name not in self.concepts:
                raise UnknownFieldType(f"{f.type_name} (field {f.name!r})")
        self._check_inclusion_chain(concept)
        parent_node = (
            self.concept_nodes[concept.parent]
            if concept.parent
            else self.concept_model.root
        )
        node = self.concept_model.add_element(parent_node, name=concept.name)
        for f in concept.concept_fields():
            self.concept_model.add_order_edge(node, f.name, self.concept_nodes[f.type_name])
        self.concepts[concept.name] = concept
        self.concept_nodes[concept.name] = node

    def _check_inclusion_chain(self, concept: Concept) -> None:
        seen = {concept.name}
        cur = concept.parent
        while cur is not None:
            if cur in seen:
                raise InclusionCycle(cur)
            seen.add(cur)
            cur = self.concepts[cur].parent

    def inclusion_chain(self, concept: Concept) -> list[Concept]:
        """Root-first list of concepts on the inclusion chain."""
        chain = [concept]
        while chain[0].parent is not None:
            chain.insert(0, self.concepts[chain[0].parent])
        return chain

    def create_collection(
        self,
        name: str,
        concept_name: str,
        parent: Optional[str] = None,
        bindings: Optional[dict[str, str]] = None,
    ) -> Collection:
        bindings = bindings or {}
        if name in self.collections:
            raise DuplicateCollection(name)
        concept = self.concepts.get(concept_name)
        if concept is None:
            raise UnknownConcept(concept_name)
        parent_collection = None
        if concept.parent is not None:
            if parent is None or parent not in self.collections:
                raise MissingParentCollection(
                    f"collection {name} needs a parent collection of concept {concept.parent}"
                )
            parent_collection = self.collections[parent]
            if parent_collection.concept.name != concept.parent:
                raise BindingMismatch(
                    f"parent collection {parent} holds {parent_collection.concept.name}, "
                    f"not {concept.parent}"
                )
        elif parent is not None:
            raise BindingMismatch(f"concept {concept_name} has no parent concept")
        bound: dict[str, Collection] = {}
        for f in concept.concept_fields():
            target = bindings.get(f.name)
            if target is None:
                raise MissingBinding(f"field {f.name!r} of {name} is unbound")
            target_collection = self.collections.get(target)
            if target_collection is None:
                raise UnknownCollection(target)
            if target_collection.concept.name != f.type_name:
                raise BindingMismatch(
                    f"field {f.name!r} expects {f.type_name}, collection {target} "
                    f"holds {target_collection.concept.name}"
                )
            bound[f.name] = target_collection
        for extra in set(bindings) - {f.name for f in concept.concept_fields()}:
            raise BindingMismatch(f"{extra!r} is not a concept-typed field of {concept_name}")
        collection = Collection(name, concept, parent_collection, bound)
        self.collections[name] = collection
        return collection

    # --- data ------------------------------------------------------------------

    def collection(self, name: str) -> Collection:
        c = self.collections.get(name)
        if c is None:
            raise UnknownCollection(name)
        return c

    def insert_item(
        self,
        collection_name: str,
        values: dict[str, Any],
        parent: Optional[ComplexIdentity] = None,
    ) -> ComplexIdentity:
        collection = self.collection(collection_name)
        concept = collection.concept
        parent_item = None
        if collection.parent is not None:
            if parent is None:
                raise MissingParent(f"items of {collection_name} live under {collection.parent.name}")
            try:
                parent_item = self.resolve(collection.parent.name, parent)
            except (NotFound, SegmentCountMismatch) as exc:
                raise MissingParent(str(exc)) from None
        elif parent is not None:
            raise MissingParent(f"{collection_name} is a root collection")

        declared = {f.name for f in concept.fields}
        for name in values:
            if name not in declared:
                raise TypeMismatch(f"{name!r} is not a field of concept {concept.name}")
        stored: dict[str, Any] = {}
        refs: dict[str, Item] = {}
        for f in concept.fields:
            if f.name not in values:
                raise TypeMismatch(f"missing value for field {f.name!r}")
            value = _coerce(f, values[f.name])
            if f.is_concept:
                try:
                    refs[f.name] = self.resolve(collection.bindings[f.name].name, value)
                except (NotFound, SegmentCountMismatch) as exc:
                    raise DanglingReference(str(exc)) from None
            stored[f.name] = value

        local = tuple(stored[f.name] for f in concept.identity_fields)
        parent_key = parent_item.identity.segments if parent_item else ()
        key = parent_key + (local,)
        if key in collection.by_identity:
            raise DuplicateIdentity(f"{collection_name}: {ComplexIdentity(key).text}")

        parent_node = parent_item.node if parent_item else self.model.root
        item = Item(collection_name, local, stored, parent_item, node=-1)
        node = self.model.add_element(
            parent_node, name=f"{collection_name}:{item.identity.text}"
        )
        item.node = node
        self._node_display[node] = item.identity.text
        for fname, ref in refs.items():
            self.model.add_order_edge(node, fname, ref.node)
        collection.items.append(item)
        collection.by_identity[key] = item
        return item.identity

    def resolve(self, collection_name: str, identity: ComplexIdentity) -> Item:
        collection = self.collection(collection_name)
        if len(identity.segments) != collection.depth:
            raise SegmentCountMismatch(
                f"{collection_name} identities have {collection.depth} segment(s), "
                f"got {len(identity.segments)}"
            )
        item = collection.by_identity.get(identity.segments)
        if item is None:
            raise NotFound(f"{collection_name}: {identity.text}")
        return item

    def field_path_value(self, item: Item, path: str) -> Any:
        """Follow a dotted field path; `parent` steps climb the hierarchy."""
        cur: Any = item
        for step in path.split("."):
            if not isinstance(cur, Item):
                raise UnknownField(f"cannot navigate {step!r} from a primitive value")
            cur = self.step_field(cur, step)
        if isinstance(cur, Item):
            return cur.identity
        return cur

    def step_field(self, item: Item, step: str) -> Any:
        """One navigation step from an item: `parent`, a field, or a value."""
        if step == "parent":
            if item.parent is None:
                raise NullParent(f"{item.collection}:{item.identity.text} has no parent")
            return item.parent
        concept = self.collection(item.collection).concept
        spec = concept.field(step)
        if spec is None:
            raise UnknownField(f"{step!r} is not a field of concept {concept.name}")
        value = item.values[step]
        if spec.is_concept:
            return self.resolve(self.collection(item.collection).bindings[step].name, value)
        return value

    # --- integrity ---------------------------------------------------------------

    def check_referential_integrity(self) -> None:
        """Full scan: every stored identity reference must resolve."""
        for collection in self.collections.values():
            for item in collection.items:
                for f in collection.concept.concept_fields():
                    self.resolve(collection.bindings[f.name].name, item.values[f.name])

    def fingerprint(self) -> str:
        """Digest of the full model state, for read-only-query checks."""
        h = hashlib.sha256()
        for name in sorted(self.concepts):
            h.update(repr(self.concepts[name]).encode())
        for name in sorted(self.collections):
            collection = self.collections[name]
            h.update(name.encode())
            for item in collection.items:
                h.update(item.identity.text.encode())
                h.update(repr(sorted(item.values.items(), key=lambda kv: kv[0])).encode())
        h.update(repr(sorted(self.model.edges())).encode())
        return h.hexdigest()

    def display_name(self, node: int) -> str:
        return self._node_display.get(node, self.model.name_of(node))
