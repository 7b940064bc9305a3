"""Concept-oriented data engine with the CoQL query language.

Elements live in two structures at once: a containment hierarchy that
carries identity and a labelled order DAG that carries semantics.  The
package exposes the generic ordered-set engine (:mod:`coql.order`), the
concept/collection/item layer (:mod:`coql.schema`), the navigation algebra
(:mod:`coql.navigate`), the CoQL parser (:mod:`coql.parser`) and the
statement evaluator (:mod:`coql.session`).
"""

from .errors import CoqlError
from .navigate import ItemSet
from .nodes import Span
from .order import ComplexDimension, OrderedModel, PrimitiveTable
from .parser import parse, parse_statement
from .printer import pretty_print
from .schema import ComplexIdentity, Concept, Database, FieldSpec, Item
from .session import ResultTable, Session

__all__ = [
    "CoqlError",
    "ComplexDimension",
    "ComplexIdentity",
    "Concept",
    "Database",
    "FieldSpec",
    "Item",
    "ItemSet",
    "OrderedModel",
    "PrimitiveTable",
    "ResultTable",
    "Session",
    "Span",
    "parse",
    "parse_statement",
    "pretty_print",
]

__version__ = "0.1.0"
