"""Tokenizer for CoQL scripts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .errors import LexError

KEYWORDS = {
    "CONCEPT", "IDENTITY", "ENTITY", "IN", "CREATE", "TABLE",
    "INSERT", "INTO", "UNDER", "SELECT", "FROM",
    "FORALL", "WHERE", "BODY", "RETURN",
    "AND", "OR", "NOT", "COLLECTION",
}

# kinds: IDENT KEYWORD NUMBER STRING ARROW LARROW
#        EQ EQEQ NE LT LE GT GE LPAREN RPAREN COMMA DOT PIPE SEMI SLASH MINUS EOF


@dataclass(frozen=True)
class Token:
    kind: str
    value: Any
    line: int
    col: int

    def is_kw(self, word: str) -> bool:
        return self.kind == "KEYWORD" and self.value == word


_TWO_CHAR = {
    "->": "ARROW",
    "<-": "LARROW",
    "==": "EQEQ",
    "!=": "NE",
    "<=": "LE",
    ">=": "GE",
    "//": None,  # comment
}

_ONE_CHAR = {
    "=": "EQ",
    "<": "LT",
    ">": "GT",
    "(": "LPAREN",
    ")": "RPAREN",
    ",": "COMMA",
    ".": "DOT",
    "|": "PIPE",
    ";": "SEMI",
    "/": "SLASH",
    "-": "MINUS",
}


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    line = 1
    col = 1
    n = len(text)

    def advance(count: int) -> None:
        nonlocal i, line, col
        for _ in range(count):
            if text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            advance(1)
            continue
        two = text[i : i + 2]
        if two == "//":
            while i < n and text[i] != "\n":
                advance(1)
            continue
        if ch == "'":
            start_line, start_col = line, col
            advance(1)
            chars = []
            while True:
                if i >= n or text[i] == "\n":
                    raise LexError("unterminated text literal", start_line, start_col)
                if text[i] == "'":
                    if text[i : i + 2] == "''":  # doubled quote escapes a quote
                        chars.append("'")
                        advance(2)
                        continue
                    advance(1)
                    break
                chars.append(text[i])
                advance(1)
            tokens.append(Token("STRING", "".join(chars), start_line, start_col))
            continue
        if ch.isdigit():
            start_line, start_col = line, col
            j = i
            while j < n and text[j].isdigit():
                j += 1
            is_float = False
            if j < n and text[j] == "." and j + 1 < n and text[j + 1].isdigit():
                is_float = True
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            raw = text[i:j]
            advance(j - i)
            value = float(raw) if is_float else int(raw)
            tokens.append(Token("NUMBER", value, start_line, start_col))
            continue
        if ch.isalpha() or ch == "_":
            start_line, start_col = line, col
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            advance(j - i)
            if word.upper() in KEYWORDS:
                tokens.append(Token("KEYWORD", word.upper(), start_line, start_col))
            else:
                tokens.append(Token("IDENT", word, start_line, start_col))
            continue
        if two in _TWO_CHAR:
            kind = _TWO_CHAR[two]
            start_line, start_col = line, col
            advance(2)
            tokens.append(Token(kind, two, start_line, start_col))
            continue
        if ch in _ONE_CHAR:
            tokens.append(Token(_ONE_CHAR[ch], ch, line, col))
            advance(1)
            continue
        raise LexError(f"unexpected character {ch!r}", line, col)

    tokens.append(Token("EOF", None, line, col))
    return tokens
