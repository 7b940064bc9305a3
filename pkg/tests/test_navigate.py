import pytest

from coql import navigate as nav
from coql.errors import (
    CollectionMismatch,
    EmptyAggregate,
    NonNumericField,
    NoParentConcept,
    NotAChildCollection,
    UnknownDimension,
)
from coql.schema import ComplexIdentity


def ident(*segments):
    return ComplexIdentity(tuple((s,) for s in segments))


def pick(db, collection, *locals_):
    items = {i.identity.segments[-1][0]: i for i in db.collections[collection].items}
    return nav.ItemSet(collection, tuple(items[k] for k in locals_))


def identities(s):
    return [i.identity.text for i in s]


class TestProjection:
    def test_dedup_keeps_first_occurrence(self, db1):
        db = db1.db
        s = pick(db, "Persons", "alice", "bob")
        out = nav.project(db, s, ("address",))
        assert identities(out) == ["Berlin/addr1"]

    def test_rank_two_projection(self, db1):
        db = db1.db
        s = nav.from_collection(db, "AccountOwners")
        out = nav.project(db, s, ("owner", "address"))
        assert sorted(identities(out)) == ["Berlin/addr1", "Bonn/addr2"]

    def test_empty_in_empty_out(self, db1):
        db = db1.db
        out = nav.project(db, nav.ItemSet("Persons", ()), ("address",))
        assert len(out) == 0 and out.collection == "Addresses"

    def test_unknown_dimension(self, db1):
        db = db1.db
        with pytest.raises(UnknownDimension):
            nav.project(db, nav.from_collection(db, "Persons"), ("age",))
        with pytest.raises(UnknownDimension):
            nav.project(db, nav.from_collection(db, "Persons"), ())


class TestDeprojection:
    def test_referencing_items(self, db1):
        db = db1.db
        s = pick(db, "Addresses", "addr1")
        out = nav.deproject(db, s, "address", "Persons")
        assert identities(out) == ["alice", "bob"]

    def test_owner_links(self, db1):
        db = db1.db
        s = pick(db, "Persons", "alice")
        out = nav.deproject(db, s, "owner", "AccountOwners")
        assert len(out) == 2

    def test_empty(self, db1):
        db = db1.db
        out = nav.deproject(db, nav.ItemSet("Persons", ()), "owner", "AccountOwners")
        assert len(out) == 0

    def test_wrong_field_target(self, db1):
        db = db1.db
        s = pick(db, "Addresses", "addr1")
        with pytest.raises(UnknownDimension):
            nav.deproject(db, s, "owner", "AccountOwners")


class TestHierarchy:
    def test_project_parent(self, db1):
        db = db1.db
        s = nav.from_collection(db, "Accounts")
        out = nav.project_parent(db, s)
        assert sorted(identities(out)) == ["bankA", "bankB"]

    def test_project_parent_dedups(self, db1):
        db = db1.db
        s = nav.from_collection(db, "Addresses")
        out = nav.project_parent(db, s)
        assert len(out) == 2

    def test_no_parent_concept(self, db1):
        db = db1.db
        with pytest.raises(NoParentConcept):
            nav.project_parent(db, nav.from_collection(db, "Cities"))

    def test_deproject_children(self, db1):
        db = db1.db
        s = pick(db, "Accounts", "acc1")
        out = nav.deproject_children(db, s, "SavingsAccounts")
        assert identities(out) == ["bankA/acc1/sav1"]

    def test_not_a_child_collection(self, db1):
        db = db1.db
        with pytest.raises(NotAChildCollection):
            nav.deproject_children(
                db, nav.from_collection(db, "Cities"), "Persons"
            )


class TestSetOperations:
    def test_restrict(self, db1):
        db = db1.db
        s = nav.from_collection(db, "Persons")
        out = nav.restrict(s, lambda p: p.values["age"] > 20)
        assert identities(out) == ["alice", "carol"]

    def test_union_and_intersect(self, db1):
        db = db1.db
        a = pick(db, "Persons", "alice", "bob")
        b = pick(db, "Persons", "bob", "carol")
        assert identities(nav.union(a, b)) == ["alice", "bob", "carol"]
        assert identities(nav.intersect(a, b)) == ["bob"]

    def test_collection_mismatch(self, db1):
        db = db1.db
        with pytest.raises(CollectionMismatch):
            nav.union(nav.from_collection(db, "Cities"),
                      nav.from_collection(db, "Banks"))

    def test_product_size_and_freshness(self, db1):
        db = db1.db
        cities = nav.from_collection(db, "Cities")
        banks = nav.from_collection(db, "Banks")
        cube = nav.product([cities, banks], ["city", "bank"])
        assert len(cube) == len(cities) * len(banks)
        assert cube.collection is None
        serials = [c.serial for c in cube]
        assert len(set(serials)) == len(serials)

    def test_product_cell_carries_members(self, db1):
        db = db1.db
        cube = nav.product(
            [nav.from_collection(db, "Cities"), nav.from_collection(db, "Banks")],
            ["city", "bank"],
        )
        first = cube.items[0]
        assert first.values["city"].collection == "Cities"
        assert first.values["bank"].collection == "Banks"

    def test_product_with_empty_input(self, db1):
        db = db1.db
        cube = nav.product([nav.from_collection(db, "Cities"),
                            nav.ItemSet("Banks", ())])
        assert len(cube) == 0


class TestAggregation:
    def test_sum_min_max_avg_size(self):
        values = [1.0, 2.0, 3.0]
        assert nav.aggregate_values(values, "SUM") == 6.0
        assert nav.aggregate_values(values, "MIN") == 1.0
        assert nav.aggregate_values(values, "MAX") == 3.0
        assert nav.aggregate_values(values, "AVG") == 2.0
        assert nav.aggregate_values(values, "SIZE") == 3

    def test_empty_conventions(self):
        assert nav.aggregate_values([], "SUM") == 0
        assert nav.aggregate_values([], "SIZE") == 0
        for fn in ("MIN", "MAX", "AVG"):
            with pytest.raises(EmptyAggregate):
                nav.aggregate_values([], fn)

    def test_non_numeric_rejected(self):
        with pytest.raises(NonNumericField):
            nav.aggregate_values(["a"], "SUM")
        with pytest.raises(NonNumericField):
            nav.aggregate_values([True], "SUM")

    def test_aggregate_over_item_set(self, db1):
        db = db1.db
        savings = pick(db, "SavingsAccounts", "sav1")
        assert nav.aggregate(savings, "SUM", "balance") == 150.0
        owners = nav.from_collection(db, "AccountOwners")
        assert nav.aggregate(owners, "SIZE") == 4
