"""Tokenizer shared by the model parser and the spec-formula parser."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .ast import Span


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int, expected: tuple[str, ...] = ()):
        self.message = message
        self.line = line
        self.col = col
        self.expected = expected
        loc = f"line {line}, column {col}"
        if expected:
            message = f"{message} (expected {', '.join(expected)})"
        super().__init__(f"{loc}: {message}")


KEYWORDS = {
    "MODULE", "VAR", "ASSIGN", "DEFINE", "init", "next", "case", "esac",
    "TRUE", "FALSE", "boolean",
}

_PUNCT = [
    (":=", "ASSIGN_OP"),
    ("..", "DOTDOT"),
    ("->", "ARROW"),
    ("!=", "NEQ"),
    ("<=", "LE"),
    (">=", "GE"),
    ("(", "LPAREN"),
    (")", "RPAREN"),
    ("{", "LBRACE"),
    ("}", "RBRACE"),
    ("[", "LBRACK"),
    ("]", "RBRACK"),
    (";", "SEMI"),
    (":", "COLON"),
    (",", "COMMA"),
    (".", "DOT"),
    ("&", "AND"),
    ("|", "OR"),
    ("!", "NOT"),
    ("=", "EQ"),
    ("<", "LT"),
    (">", "GT"),
    ("+", "PLUS"),
    ("-", "MINUS"),
]


@dataclass(frozen=True)
class Token:
    kind: str  # punct name, keyword text, "IDENT", "INT", "EOF"
    value: str
    line: int
    col: int

    @property
    def span(self) -> Span:
        return Span(self.line, self.col, self.line, self.col + max(len(self.value), 1))


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    line = 1
    col = 1
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch == "\n":
            pos += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            pos += 1
            col += 1
            continue
        if ch == "-" and pos + 1 < n and text[pos + 1] == "-":
            while pos < n and text[pos] != "\n":
                pos += 1
            continue
        if ch.isdigit():
            start = pos
            start_col = col
            while pos < n and text[pos].isdigit():
                pos += 1
                col += 1
            tokens.append(Token("INT", text[start:pos], line, start_col))
            continue
        if ch.isalpha() or ch == "_":
            start = pos
            start_col = col
            while pos < n and (text[pos].isalnum() or text[pos] == "_"):
                pos += 1
                col += 1
            word = text[start:pos]
            kind = word if word in KEYWORDS else "IDENT"
            tokens.append(Token(kind, word, line, start_col))
            continue
        for lit, kind in _PUNCT:
            if text.startswith(lit, pos):
                tokens.append(Token(kind, lit, line, col))
                pos += len(lit)
                col += len(lit)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("EOF", "", line, col))
    return tokens


class TokenStream:
    def __init__(self, tokens: list[Token]):
        self._tokens = tokens
        self._pos = 0

    def mark(self) -> int:
        return self._pos

    def reset(self, mark: int) -> None:
        self._pos = mark

    def peek(self, ahead: int = 0) -> Token:
        i = min(self._pos + ahead, len(self._tokens) - 1)
        return self._tokens[i]

    def advance(self) -> Token:
        tok = self.peek()
        if tok.kind != "EOF":
            self._pos += 1
        return tok

    def at(self, *kinds: str) -> bool:
        return self.peek().kind in kinds

    def accept(self, kind: str) -> Optional[Token]:
        if self.at(kind):
            return self.advance()
        return None

    def expect(self, kind: str, what: Optional[str] = None) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            shown = repr(tok.value) if tok.value else "end of input"
            raise ParseError(
                f"unexpected {shown}", tok.line, tok.col, expected=(what or kind,)
            )
        return self.advance()

    def fail(self, message: str, expected: tuple[str, ...] = ()) -> "ParseError":
        tok = self.peek()
        return ParseError(message, tok.line, tok.col, expected=expected)
