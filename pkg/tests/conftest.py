import pathlib

import pytest

from coql import Session
from coql.order import OrderedModel

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


def build_g1() -> tuple[OrderedModel, dict[str, int]]:
    """Reference graph: primitives P, Q over bounds T/B, plus a and b.

    Edges: P-p->T, Q-q->T, a-x->P, a-y->Q, b-z->a, B-u->a, B-v->b.
    """
    m = OrderedModel()
    root = m.add_element(None)
    e = {"T": m.top, "B": m.bottom, "root": root}
    for name in ("P", "Q", "a", "b"):
        e[name] = m.add_element(root, name=name)
    m.add_order_edge(e["P"], "p", e["T"])
    m.add_order_edge(e["Q"], "q", e["T"])
    m.add_order_edge(e["a"], "x", e["P"])
    m.add_order_edge(e["a"], "y", e["Q"])
    m.add_order_edge(e["b"], "z", e["a"])
    m.add_order_edge(e["B"], "u", e["a"])
    m.add_order_edge(e["B"], "v", e["b"])
    return m, e


@pytest.fixture
def g1():
    return build_g1()


def build_db1_session() -> Session:
    session = Session()
    session.run(fixture_text("db1.coql"))
    return session


@pytest.fixture
def db1():
    return build_db1_session()
