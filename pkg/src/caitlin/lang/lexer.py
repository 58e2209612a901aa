"""Lexer for the mini-Pascal subset."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class TokenKind(Enum):
    KEYWORD = "keyword"
    IDENTIFIER = "identifier"
    INTEGER = "integer-literal"
    CHAR = "char-literal"
    OPERATOR = "operator"
    PUNCTUATION = "punctuation"
    EOF = "eof"


KEYWORDS = frozenset(
    """
    PROGRAM VAR BEGIN END IF THEN ELSE WHILE DO REPEAT UNTIL FOR TO DOWNTO
    CASE OF DIV MOD AND OR NOT TRUE FALSE INTEGER BOOLEAN CHAR WRITELN READLN
    """.split()
)

# longest match first
OPERATORS = (":=", "<>", "<=", ">=", "+", "-", "*", "=", "<", ">")
PUNCTUATION = (";", ":", ",", ".", "(", ")")


class LexError(Exception):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    lexeme: str
    line: int
    column: int

    @property
    def value(self) -> str:
        """Normalized text: upper-cased keywords, literal content for char literals."""
        if self.kind is TokenKind.KEYWORD:
            return self.lexeme.upper()
        if self.kind is TokenKind.CHAR:
            return self.lexeme[1:-1].replace("''", "'")
        return self.lexeme

    def is_(self, kind: TokenKind, value: str | None = None) -> bool:
        return self.kind is kind and (value is None or self.value == value)

    def __repr__(self) -> str:
        return f"Token({self.kind.value}, {self.lexeme!r}, {self.line}:{self.column})"


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(source)

    def advance(count: int) -> None:
        nonlocal i, line, col
        for ch in source[i : i + count]:
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1
        i += count

    while i < n:
        ch = source[i]
        if ch in " \t\r\n\f":
            advance(1)
            continue
        if ch == "{":
            end = source.find("}", i + 1)
            if end < 0:
                raise LexError("unterminated comment", line, col)
            advance(end + 1 - i)
            continue
        if source.startswith("(*", i):
            end = source.find("*)", i + 2)
            if end < 0:
                raise LexError("unterminated comment", line, col)
            advance(end + 2 - i)
            continue

        start_line, start_col = line, col
        if ch.isalpha() or ch == "_":
            j = i + 1
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            word = source[i:j]
            kind = TokenKind.KEYWORD if word.upper() in KEYWORDS else TokenKind.IDENTIFIER
            tokens.append(Token(kind, word, start_line, start_col))
            advance(j - i)
        elif ch.isdigit():
            j = i + 1
            while j < n and source[j].isdigit():
                j += 1
            tokens.append(Token(TokenKind.INTEGER, source[i:j], start_line, start_col))
            advance(j - i)
        elif ch == "'":
            j = i + 1
            while True:
                if j >= n or source[j] == "\n":
                    raise LexError("unterminated char literal", start_line, start_col)
                if source[j] == "'":
                    if j + 1 < n and source[j + 1] == "'":
                        j += 2
                        continue
                    break
                j += 1
            tokens.append(Token(TokenKind.CHAR, source[i : j + 1], start_line, start_col))
            advance(j + 1 - i)
        else:
            for op in OPERATORS:
                if source.startswith(op, i):
                    tokens.append(Token(TokenKind.OPERATOR, op, start_line, start_col))
                    advance(len(op))
                    break
            else:
                if ch in PUNCTUATION:
                    tokens.append(Token(TokenKind.PUNCTUATION, ch, start_line, start_col))
                    advance(1)
                else:
                    raise LexError(f"illegal character {ch!r}", start_line, start_col)

    tokens.append(Token(TokenKind.EOF, "", line, col))
    return tokens
