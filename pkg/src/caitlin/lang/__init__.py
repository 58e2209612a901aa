"""Mini-Pascal front end: lexer, parser, static checker, pretty-printer."""

from . import ast
from .checker import Diagnostic, check
from .lexer import LexError, Token, TokenKind, tokenize
from .parser import ParseError, parse, parse_expression, parse_source, source_digest
from .printer import pretty

__all__ = [
    "ast",
    "Diagnostic",
    "LexError",
    "ParseError",
    "Token",
    "TokenKind",
    "check",
    "parse",
    "parse_expression",
    "parse_source",
    "pretty",
    "source_digest",
    "tokenize",
]
