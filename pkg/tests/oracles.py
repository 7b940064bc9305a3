"""Independent oracles for the property suites.

Everything here recomputes results from first principles (plain dicts,
nested loops, exhaustive DFS) without calling the engine's enumeration or
navigation code, so agreement between the two is meaningful.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

TOP_PREFIX = "⊤:"
BOTTOM_PREFIX = "⊥:"


# --- raw view of an ordered model ---------------------------------------------


@dataclass
class RawGraph:
    """Snapshot of an OrderedModel taken through its public accessors."""

    root: int
    top: int
    bottom: int
    names: dict[int, str]
    parents: dict[int, int | None]
    out: dict[int, dict[str, int]] = field(default_factory=dict)

    @classmethod
    def of(cls, model) -> "RawGraph":
        nodes = [model.root] + model.elements()
        g = cls(
            root=model.root,
            top=model.top,
            bottom=model.bottom,
            names={n: model.name_of(n) for n in nodes},
            parents={n: model.parent_of(n) for n in nodes},
            out={n: {} for n in nodes},
        )
        for src, label, tgt in model.edges():
            g.out[src][label] = tgt
        return g

    def orderable(self) -> list[int]:
        return [n for n in self.names if n not in (self.root, self.top, self.bottom)]

    def user_in_degree(self, node: int) -> int:
        return sum(1 for outs in self.out.values() for t in outs.values() if t == node)


# --- criterion 1: brute-force edge validator -----------------------------------


def _reaches(g: RawGraph, start: int, goal: int) -> bool:
    stack, seen = [start], set()
    while stack:
        node = stack.pop()
        if node == goal:
            return True
        if node in seen:
            continue
        seen.add(node)
        stack.extend(g.out[node].values())
    return False


def _under(g: RawGraph, node: int, ancestor: int) -> bool:
    cur: int | None = node
    while cur is not None:
        if cur == ancestor:
            return True
        cur = g.parents[cur]
    return False


def edge_is_legal(g: RawGraph, source: int, label: str, target: int) -> bool:
    """First-principles check of every rule an order edge must satisfy."""
    if source == target:
        return False
    if source in (g.root,) or target in (g.root,):
        return False
    if source == g.top or target == g.bottom:
        return False
    if label in g.out[source]:
        return False
    if _reaches(g, target, source):
        return False
    # an element pointing at top is primitive and has no other super-elements
    if target == g.top and g.out[source]:
        return False
    if target != g.top and g.top in g.out[source].values():
        return False
    # syntactic constraint, with bounds and root children exempt
    if source not in (g.top, g.bottom) and target not in (g.top, g.bottom):
        parent = g.parents[source]
        if parent is not None and parent != g.root:
            bound = g.out[parent].get(label)
            if bound is None or not _under(g, target, bound):
                return False
    return True


def validate_graph(g: RawGraph) -> bool:
    """Accept a full graph exactly when every edge passes in isolation."""
    for src, outs in g.out.items():
        for label, tgt in outs.items():
            trimmed = RawGraph(g.root, g.top, g.bottom, g.names, g.parents,
                               {n: dict(o) for n, o in g.out.items()})
            del trimmed.out[src][label]
            if not edge_is_legal(trimmed, src, label, tgt):
                return False
    return True


# --- criterion 2: exhaustive path enumeration -----------------------------------


def effective_out(g: RawGraph, node: int) -> list[tuple[str, int]]:
    if node in (g.top, g.root):
        return []
    if node == g.bottom:
        implicit = [
            (BOTTOM_PREFIX + g.names[n], n)
            for n in g.names
            if n not in (g.root, g.top, g.bottom) and g.user_in_degree(n) == 0
        ]
        return list(g.out[node].items()) + implicit
    outs = list(g.out[node].items())
    return outs if outs else [(TOP_PREFIX + g.names[node], g.top)]


def paths_between(g: RawGraph, start: int, goal: int) -> set[tuple[str, ...]]:
    """All label sequences along effective edges from start to goal."""
    found: set[tuple[str, ...]] = set()

    def walk(node: int, prefix: tuple[str, ...]) -> None:
        for label, tgt in effective_out(g, node):
            path = prefix + (label,)
            if tgt == goal:
                found.add(path)
            walk(tgt, path)

    walk(start, ())
    return found


def primitive_table(g: RawGraph) -> tuple[list[str], list[tuple[int, frozenset]]]:
    """Columns and rows of the canonical table, from raw path enumeration."""
    columns = sorted(".".join(p) for p in paths_between(g, g.bottom, g.top))
    if not columns:
        return [], []
    rows: list[tuple[int, frozenset]] = [
        (g.top, frozenset()),
        (g.bottom, frozenset(columns)),
    ]
    for e in g.names:
        if e in (g.root, g.top, g.bottom):
            continue
        supers = sorted(".".join(p) for p in paths_between(g, e, g.top))
        subs = sorted(".".join(p) for p in paths_between(g, g.bottom, e))
        for f in subs:
            rows.append((e, frozenset(f + "." + d for d in supers)))
    return columns, rows


# --- random model generator ------------------------------------------------------


def random_model_attempts(rng: random.Random, max_elements: int = 12,
                          max_attempts: int = 24):
    """Build a random model, yielding every edge attempt for comparison.

    Returns (model, attempts) where each attempt is (snapshot, source,
    label, target, engine_accepted).  The snapshot is taken before the
    attempt so the oracle can judge the same state.
    """
    from coql.errors import ModelError
    from coql.order import OrderedModel

    model = OrderedModel()
    root = model.add_element(None)
    nodes = [model.top, model.bottom]
    for i in range(rng.randint(1, max_elements - 3)):
        parent = root if not nodes[2:] or rng.random() < 0.6 else rng.choice(nodes[2:])
        nodes.append(model.add_element(parent, name=f"e{i}"))
    labels = ["p", "q", "r", "s", "t"]
    attempts = []
    for _ in range(rng.randint(0, max_attempts)):
        source = rng.choice(nodes)
        target = rng.choice(nodes)
        label = rng.choice(labels)
        before = RawGraph.of(model)
        try:
            model.add_order_edge(source, label, target)
            accepted = True
        except ModelError:
            accepted = False
        attempts.append((before, source, label, target, accepted))
    return model, attempts


# --- criterion 3: random databases and brute-force navigation --------------------


def random_database(rng: random.Random):
    """A flat random schema with chained concept references plus data.

    Concepts C0..Ck where Ci references earlier concepts, so field chains
    of rank up to 4 exist.  Returns (db, chains) where each chain is
    (collection name, field path) usable as a projection dimension.
    """
    from coql.schema import Concept, Database, FieldSpec

    db = Database()
    n_concepts = rng.randint(3, 5)
    ref_fields: dict[str, list[tuple[str, str]]] = {}
    for i in range(n_concepts):
        name = f"C{i}"
        fields = []
        refs = []
        if i >= 1:
            for j, target in enumerate(rng.sample(range(i), k=min(i, rng.randint(1, 2)))):
                fields.append(FieldSpec(f"f{j}", "entity", f"C{target}"))
                refs.append((f"f{j}", f"C{target}"))
        concept = Concept(
            name, None, (FieldSpec("id", "identity", "INT"),), tuple(fields)
        )
        db.declare_concept(concept)
        db.create_collection(
            f"L{i}", name, bindings={f: f"L{t[1:]}" for f, t in refs}
        )
        ref_fields[name] = refs
    for i in range(n_concepts):
        collection = db.collections[f"L{i}"]
        for k in range(rng.randint(2, 5)):
            values = {"id": k}
            ok = True
            for fname, tconcept in ref_fields[f"C{i}"]:
                pool = db.collections[f"L{tconcept[1:]}"].items
                if not pool:
                    ok = False
                    break
                values[fname] = rng.choice(pool).identity
            if ok:
                db.insert_item(f"L{i}", values)
    chains = []
    for i in range(n_concepts):
        for fname, tconcept in ref_fields[f"C{i}"]:
            path = [fname]
            cur = tconcept
            while len(path) < 4 and ref_fields[cur] and rng.random() < 0.7:
                nxt, cur = rng.choice(ref_fields[cur])
                path.append(nxt)
            chains.append((f"L{i}", tuple(path)))
    return db, chains


def brute_project(db, items, dims):
    """Left-to-right reference chasing with first-occurrence dedup."""
    current = list(items)
    for label in dims:
        step, seen = [], set()
        for item in current:
            binding = db.collections[item.collection].bindings[label].name
            target = db.collections[binding].by_identity[item.values[label].segments]
            key = (target.collection, target.identity.segments)
            if key not in seen:
                seen.add(key)
                step.append(target)
        current = step
    return current


def brute_deproject(db, items, label, source_collection):
    wanted = {item.identity for item in items}
    return [
        item
        for item in db.collections[source_collection].items
        if item.values[label] in wanted
    ]


# --- criteria 5 and 6: nested-loop join oracle over the fixture data ---------------


def _rows(db, name):
    return db.collections[name].items


def berlin_accounts(db, min_owners=None, min_savings=None):
    """Exhaustive-join version of the fixture query: Berlin persons over
    20, accounts in Bonn banks; optional owner-count and savings filters."""
    result = []
    for account in _rows(db, "Accounts"):
        bank = account.parent
        bank_addr = next(
            a for a in _rows(db, "Addresses") if a.identity == bank.values["address"]
        )
        if bank_addr.parent.values["city"] != "Bonn":
            continue
        linked = False
        for ao in _rows(db, "AccountOwners"):
            if ao.values["account"] != account.identity:
                continue
            person = next(
                p for p in _rows(db, "Persons") if p.identity == ao.values["owner"]
            )
            if person.values["age"] <= 20:
                continue
            addr = next(
                a for a in _rows(db, "Addresses")
                if a.identity == person.values["address"]
            )
            if addr.parent.values["city"] == "Berlin":
                linked = True
        if not linked:
            continue
        if min_owners is not None:
            owners = sum(
                1 for ao in _rows(db, "AccountOwners")
                if ao.values["account"] == account.identity
            )
            if owners < min_owners:
                continue
        if min_savings is not None:
            total = sum(
                s.values["balance"] for s in _rows(db, "SavingsAccounts")
                if s.parent.identity == account.identity
            )
            if not total > min_savings:
                continue
        result.append(account.identity)
    return result


def city_bank_cube(db):
    """Measure per (city, bank): summed balance over deduplicated accounts
    reachable from the city's persons and owned in that bank."""
    cells = []
    for city in _rows(db, "Cities"):
        for bank in _rows(db, "Banks"):
            accounts = {}
            for addr in _rows(db, "Addresses"):
                if addr.parent is not city:
                    continue
                for person in _rows(db, "Persons"):
                    if person.values["address"] != addr.identity:
                        continue
                    for ao in _rows(db, "AccountOwners"):
                        if ao.values["owner"] != person.identity:
                            continue
                        account = next(
                            a for a in _rows(db, "Accounts")
                            if a.identity == ao.values["account"]
                        )
                        if account.parent is bank:
                            accounts[account.identity.text] = account
            measure = sum(a.values["balance"] for a in accounts.values())
            cells.append(
                (city.values["city"], bank.values["name"], measure if accounts else 0)
            )
    return cells
