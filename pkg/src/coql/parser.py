"""Recursive-descent parser for CoQL.

The normative grammar lives in grammar.ebnf at the repository root.
"""

from __future__ import annotations

from typing import Optional

from .errors import ParseError
from .lexer import Token, tokenize
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
    NotOp,
    PathExpr,
    ProductExpr,
    Query,
    Select,
    SourceRef,
    Span,
    Statement,
    Step,
    Term,
)

AGG_NAMES = ("SUM", "SIZE", "MIN", "MAX", "AVG")
PRIMITIVE_TYPES = ("CHAR", "DOUBLE", "INT")
CMP_KINDS = {"EQ": "=", "EQEQ": "==", "NE": "!=", "LT": "<", "LE": "<=", "GT": ">", "GE": ">="}


class Parser:
    def __init__(self, tokens: list[Token]):
        self._tokens = tokens
        self._pos = 0

    # --- token plumbing -------------------------------------------------------

    def _peek(self, ahead: int = 0) -> Token:
        idx = min(self._pos + ahead, len(self._tokens) - 1)
        return self._tokens[idx]

    def _advance(self) -> Token:
        tok = self._tokens[self._pos]
        if tok.kind != "EOF":
            self._pos += 1
        return tok

    def _error(self, expected: str, tok: Optional[Token] = None) -> ParseError:
        tok = tok or self._peek()
        got = "end of input" if tok.kind == "EOF" else repr(tok.value)
        return ParseError(f"expected {expected}, got {got}", tok.line, tok.col)

    def _expect(self, kind: str, expected: str) -> Token:
        tok = self._peek()
        if tok.kind != kind:
            raise self._error(expected)
        return self._advance()

    def _expect_kw(self, word: str) -> Token:
        tok = self._peek()
        if not tok.is_kw(word):
            raise self._error(word)
        return self._advance()

    def _ident(self, expected: str = "identifier") -> str:
        return self._expect("IDENT", expected).value

    def _span_from(self, start: Token) -> Span:
        prev = self._tokens[max(self._pos - 1, 0)]
        return Span(start.line, start.col, prev.line, prev.col)

    # --- program ---------------------------------------------------------------

    def parse_program(self) -> list[Statement]:
        statements: list[Statement] = []
        while True:
            while self._peek().kind == "SEMI":
                self._advance()
            if self._peek().kind == "EOF":
                return statements
            statements.append(self.parse_statement())

    def parse_statement(self) -> Statement:
        tok = self._peek()
        if tok.kind == "KEYWORD":
            if tok.value == "CONCEPT":
                return self._concept_decl()
            if tok.value == "CREATE":
                return self._create_table()
            if tok.value == "INSERT":
                return self._insert()
            if tok.value == "SELECT":
                return self._select()
            if tok.value == "FORALL":
                return self._forall()
            if tok.value == "COLLECTION":
                return self._assignment()
            raise self._error("a statement")
        if tok.kind in ("LPAREN", "IDENT"):
            start = tok
            expr = self._value_expr()
            return Query(expr, span=self._span_from(start))
        raise self._error("a statement")

    # --- declarations ------------------------------------------------------------

    def _concept_decl(self) -> ConceptDecl:
        start = self._expect_kw("CONCEPT")
        name = self._ident("concept name")
        parent = None
        if self._peek().is_kw("IN"):
            self._advance()
            parent = self._ident("parent concept name")
        self._expect_kw("IDENTITY")
        fields = self._field_list("identity")
        if self._peek().is_kw("ENTITY"):
            self._advance()
            fields += self._field_list("entity")
        return ConceptDecl(name, parent, tuple(fields), span=self._span_from(start))

    def _field_list(self, kind: str) -> list[FieldDef]:
        fields = [self._field(kind)]
        while self._peek().kind == "COMMA":
            self._advance()
            fields.append(self._field(kind))
        return fields

    def _field(self, kind: str) -> FieldDef:
        start = self._peek()
        type_name = self._ident("field type")
        char_len = None
        if type_name.upper() in PRIMITIVE_TYPES:
            type_name = type_name.upper()
            if type_name == "CHAR":
                self._expect("LPAREN", "(")
                char_len = self._expect("NUMBER", "text length").value
                self._expect("RPAREN", ")")
        name = self._ident("field name")
        return FieldDef(kind, type_name, name, char_len, span=self._span_from(start))

    def _create_table(self) -> CreateTable:
        start = self._expect_kw("CREATE")
        self._expect_kw("TABLE")
        table = self._ident("collection name")
        self._expect_kw("CONCEPT")
        concept = self._ident("concept name")
        parent_table = None
        if self._peek().is_kw("IN"):
            self._advance()
            parent_table = self._ident("parent collection name")
        bindings: list[tuple[str, str]] = []
        while True:
            if self._peek().kind == "COMMA":
                self._advance()
            if self._peek().kind == "IDENT" and self._peek(1).kind == "EQ":
                field = self._ident()
                self._advance()  # =
                bindings.append((field, self._ident("collection name")))
            else:
                break
        return CreateTable(table, concept, parent_table, tuple(bindings),
                           span=self._span_from(start))

    def _insert(self) -> Insert:
        start = self._expect_kw("INSERT")
        self._expect_kw("INTO")
        table = self._ident("collection name")
        under = None
        if self._peek().is_kw("UNDER"):
            self._advance()
            under = self._identity_lit()
        self._expect("LPAREN", "(")
        assigns = []
        while True:
            field = self._ident("field name")
            self._expect("EQ", "=")
            assigns.append((field, self._insert_value()))
            if self._peek().kind == "COMMA":
                self._advance()
                continue
            break
        self._expect("RPAREN", ")")
        return Insert(table, under, tuple(assigns), span=self._span_from(start))

    def _insert_value(self):
        tok = self._peek()
        if tok.kind == "LT":
            return self._identity_lit()
        return self._literal()

    def _literal(self) -> Literal:
        tok = self._peek()
        if tok.kind == "MINUS":
            self._advance()
            num = self._expect("NUMBER", "number")
            return Literal(-num.value, span=self._span_from(tok))
        if tok.kind in ("NUMBER", "STRING"):
            self._advance()
            return Literal(tok.value, span=self._span_from(tok))
        raise self._error("a literal")

    def _identity_lit(self) -> IdentityLit:
        start = self._expect("LT", "<")
        segments = [self._identity_segment()]
        while self._peek().kind == "SLASH":
            self._advance()
            segments.append(self._identity_segment())
        self._expect("GT", ">")
        return IdentityLit(tuple(segments), span=self._span_from(start))

    def _identity_segment(self) -> tuple:
        if self._peek().kind == "LPAREN":
            self._advance()
            values = [self._segment_value()]
            while self._peek().kind == "COMMA":
                self._advance()
                values.append(self._segment_value())
            self._expect("RPAREN", ")")
            return tuple(values)
        return (self._segment_value(),)

    def _segment_value(self):
        tok = self._peek()
        if tok.kind == "IDENT":
            self._advance()
            return tok.value  # bare identifier segment reads as text
        if tok.kind in ("NUMBER", "STRING"):
            self._advance()
            return tok.value
        if tok.kind == "MINUS":
            self._advance()
            return -self._expect("NUMBER", "number").value
        raise self._error("an identity segment value")

    # --- queries ---------------------------------------------------------------

    def _select(self) -> Select:
        start = self._expect_kw("SELECT")
        columns = [self._path()]
        while self._peek().kind == "COMMA":
            self._advance()
            columns.append(self._path())
        self._expect_kw("FROM")
        table = self._ident("collection name")
        return Select(tuple(columns), table, span=self._span_from(start))

    def _assignment(self) -> Assignment:
        start = self._expect_kw("COLLECTION")
        name = self._ident("variable name")
        self._expect("EQ", "=")
        expr = self._value_expr()
        return Assignment(name, expr, span=self._span_from(start))

    def _forall(self) -> ForAll:
        start = self._expect_kw("FORALL")
        self._expect("LPAREN", "(")
        sources = [self._source_ref()]
        while self._peek().kind == "COMMA":
            self._advance()
            sources.append(self._source_ref())
        self._expect("RPAREN", ")")
        where = None
        if self._peek().is_kw("WHERE"):
            self._advance()
            self._expect("LPAREN", "(")
            where = self._predicate()
            self._expect("RPAREN", ")")
        bindings: tuple = ()
        if self._peek().is_kw("BODY"):
            self._advance()
            self._expect("LPAREN", "(")
            bindings = tuple(self._binding_list())
            self._expect("RPAREN", ")")
        self._expect_kw("RETURN")
        self._expect("LPAREN", "(")
        returns = [self._path()]
        while self._peek().kind == "COMMA":
            self._advance()
            returns.append(self._path())
        self._expect("RPAREN", ")")
        return ForAll(tuple(sources), where, bindings, tuple(returns),
                      span=self._span_from(start))

    def _source_ref(self) -> SourceRef:
        start = self._peek()
        name = self._ident("collection name")
        alias = None
        if self._peek().kind == "IDENT":
            alias = self._ident()
        predicate = None
        if self._peek().kind == "PIPE":
            self._advance()
            predicate = self._predicate()
        return SourceRef(name, alias, predicate, span=self._span_from(start))

    def _binding_list(self) -> list[Binding]:
        bindings = [self._binding()]
        while True:
            if self._peek().kind == "COMMA":
                self._advance()
                bindings.append(self._binding())
            elif self._starts_binding():
                bindings.append(self._binding())
            else:
                return bindings

    def _starts_binding(self) -> bool:
        tok, nxt, third = self._peek(), self._peek(1), self._peek(2)
        if tok.is_kw("COLLECTION"):
            return True
        if tok.kind != "IDENT":
            return False
        if nxt.kind == "EQ":
            return True
        return nxt.kind == "IDENT" and third.kind == "EQ"

    def _binding(self) -> Binding:
        start = self._peek()
        type_name = None
        if self._peek().is_kw("COLLECTION"):
            self._advance()
            type_name = "Collection"
        elif self._peek(1).kind == "IDENT" and self._peek(2).kind == "EQ":
            type_name = self._ident("type name")
            if type_name.upper() in PRIMITIVE_TYPES:
                type_name = type_name.upper()
        name = self._ident("binding name")
        self._expect("EQ", "=")
        expr = self._value_expr()
        return Binding(type_name, name, expr, span=self._span_from(start))

    # --- expressions -------------------------------------------------------------

    def _path(self) -> PathExpr:
        start = self._peek()
        parts = [self._ident("a path")]
        while self._peek().kind == "DOT":
            self._advance()
            parts.append(self._ident("a path step"))
        return PathExpr(tuple(parts), span=self._span_from(start))

    def _predicate(self):
        return self._or_expr()

    def _or_expr(self):
        start = self._peek()
        left = self._and_expr()
        while self._peek().is_kw("OR"):
            self._advance()
            left = BoolOp("OR", left, self._and_expr(), span=self._span_from(start))
        return left

    def _and_expr(self):
        start = self._peek()
        left = self._not_expr()
        while self._peek().is_kw("AND"):
            self._advance()
            left = BoolOp("AND", left, self._not_expr(), span=self._span_from(start))
        return left

    def _not_expr(self):
        tok = self._peek()
        if tok.is_kw("NOT"):
            self._advance()
            return NotOp(self._not_expr(), span=self._span_from(tok))
        if tok.kind == "LPAREN" and self._is_grouped_predicate():
            self._advance()
            inner = self._or_expr()
            self._expect("RPAREN", ")")
            return inner
        return self._comparison()

    def _is_grouped_predicate(self) -> bool:
        # A paren is a collection term when it looks like `(Name |`,
        # `(Name alias |`, or a comma-separated product; otherwise a group.
        first, second, third = self._peek(1), self._peek(2), self._peek(3)
        if first.kind != "IDENT":
            return True
        if second.kind in ("PIPE", "COMMA"):
            return False
        if second.kind == "IDENT" and third.kind in ("PIPE", "COMMA"):
            return False
        return True

    def _comparison(self):
        start = self._peek()
        left = self._value_expr()
        tok = self._peek()
        if tok.kind in CMP_KINDS:
            self._advance()
            right = self._value_expr()
            op = CMP_KINDS[tok.kind]
            left, right = self._desugar_size(left, right)
            return Compare(op, left, right, span=self._span_from(start))
        return left

    @staticmethod
    def _desugar_size(left, right):
        # Collection-valued expression compared with a number reads as SIZE.
        def is_number(node):
            return isinstance(node, Literal) and isinstance(node.value, (int, float))

        def is_collection(node):
            return isinstance(node, AccessPath) and node.steps

        if is_collection(left) and is_number(right):
            left = AggCall("SIZE", left, span=left.span)
        elif is_collection(right) and is_number(left):
            right = AggCall("SIZE", right, span=right.span)
        return left, right

    def _value_expr(self):
        """Operand: literal, aggregation, path, term/product, access path."""
        start = self._peek()
        head = self._operand_head()
        steps = []
        while self._peek().kind in ("ARROW", "LARROW"):
            steps.append(self._step())
        if steps:
            return AccessPath(head, tuple(steps), span=self._span_from(start))
        return head

    def _operand_head(self):
        tok = self._peek()
        if tok.kind == "IDENT" and tok.value.upper() in AGG_NAMES and self._peek(1).kind == "LPAREN":
            self._advance()
            self._expect("LPAREN", "(")
            arg = self._value_expr()
            self._expect("RPAREN", ")")
            return AggCall(tok.value.upper(), arg, span=self._span_from(tok))
        if tok.kind in ("NUMBER", "STRING", "MINUS"):
            return self._literal()
        if tok.kind == "LPAREN":
            return self._paren_expr()
        if tok.kind == "IDENT":
            return self._path()
        raise self._error("an expression")

    def _step(self) -> Step:
        start = self._peek()
        direction = self._advance()  # ARROW or LARROW, checked by caller
        if self._peek().kind == "IDENT":
            if self._peek().value == "parent":
                self._advance()
                dims: tuple[str, ...] = ("parent",)
            else:
                dims = tuple(self._path().parts)
        else:
            raise self._error("a dimension name")
        closing = self._peek()
        if closing.kind != direction.kind:
            raise self._error(f"matching {direction.value!r}")
        self._advance()
        term = self._step_term()
        arrow = "->" if direction.kind == "ARROW" else "<-"
        return Step(arrow, dims, term, span=self._span_from(start))

    def _step_term(self):
        tok = self._peek()
        if tok.kind == "LPAREN":
            node = self._paren_expr()
            if not isinstance(node, (Term, ProductExpr)):
                raise self._error("a collection term", tok)
            if isinstance(node, Term) and self._peek().kind == "DOT":
                self._advance()
                node = Term(node.name, node.alias, node.predicate,
                            self._ident("field name"), span=node.span)
            return node
        name = self._ident("a collection name")
        field_suffix = None
        if self._peek().kind == "DOT":
            self._advance()
            field_suffix = self._ident("field name")
        return Term(name, None, None, field_suffix, span=self._span_from(tok))

    def _paren_expr(self):
        """`(...)`: a restriction term, a product, or both sources and bindings."""
        start = self._expect("LPAREN", "(")
        sources: list[SourceRef] = []
        bindings: list[Binding] = []
        while True:
            if self._starts_binding():
                bindings.append(self._binding())
            else:
                if bindings:
                    raise self._error("a binding (sources precede bindings)")
                sources.append(self._source_ref_with_suffix())
            if self._peek().kind == "COMMA":
                self._advance()
                continue
            if self._peek().kind == "RPAREN":
                break
            if self._starts_binding():
                continue  # BODY-style juxtaposition
            raise self._error("',' or ')'")
        self._expect("RPAREN", ")")
        if len(sources) == 1 and not bindings:
            src = sources[0]
            return Term(src.name, src.alias, src.predicate, None,
                        span=self._span_from(start))
        if not sources:
            raise self._error("at least one source collection", start)
        return ProductExpr(tuple(sources), tuple(bindings), span=self._span_from(start))

    def _source_ref_with_suffix(self) -> SourceRef:
        return self._source_ref()


def parse(text: str) -> list[Statement]:
    return Parser(tokenize(text)).parse_program()


def parse_statement(text: str) -> Statement:
    statements = parse(text)
    if len(statements) != 1:
        raise ParseError("expected exactly one statement", 1, 1)
    return statements[0]
