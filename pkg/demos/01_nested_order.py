"""Build a small nested ordered set by hand and inspect its structure.

Elements live in a containment tree (identity) and a labelled order DAG
(semantics) at the same time.  The canonical table at the end has one
column per bottom-to-top path and one binary row per sub-dimension of
each element.

Run with: python3 demos/01_nested_order.py
"""

from coql.order import OrderedModel

model = OrderedModel()
root = model.add_element(None)

# two primitive elements directly under the top bound
P = model.add_element(root, "P")
Q = model.add_element(root, "Q")
model.add_order_edge(P, "p", model.top)
model.add_order_edge(Q, "q", model.top)

# a sits below both primitives, b below a, and the bottom bound closes up
a = model.add_element(root, "a")
b = model.add_element(root, "b")
model.add_order_edge(a, "x", P)
model.add_order_edge(a, "y", Q)
model.add_order_edge(b, "z", a)
model.add_order_edge(model.bottom, "u", a)
model.add_order_edge(model.bottom, "v", b)

print("dimensions of a up to top:",
      sorted(d.text for d in model.enumerate_dimensions(a, model.top)))
print("sub-dimensions of a down to bottom:",
      sorted(d.text for d in model.enumerate_subdimensions(a, model.bottom)))
print("arity(a) =", model.arity(a), " cardinality(a) =", model.cardinality(a))

print("\ncanonical primitive table:")
print(model.primitive_semantics().to_csv(model.name_of))
