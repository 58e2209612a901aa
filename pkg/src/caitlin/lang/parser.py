"""Recursive-descent parser.

Expression precedence, tightest first: NOT and unary minus, multiplicative
(``*``, ``DIV``, ``MOD``), additive (``+``, ``-``), relational (non-associative),
``AND``, ``OR``. Binary operators within a level associate to the left.
"""

from __future__ import annotations

import hashlib
from dataclasses import replace

from . import ast
from .lexer import Token, TokenKind, tokenize

K, I, N, C, O, P, E = (
    TokenKind.KEYWORD,
    TokenKind.IDENTIFIER,
    TokenKind.INTEGER,
    TokenKind.CHAR,
    TokenKind.OPERATOR,
    TokenKind.PUNCTUATION,
    TokenKind.EOF,
)

INT_MAX = 2**63 - 1
MUL_OPS = ("*", "DIV", "MOD")
ADD_OPS = ("+", "-")


class ParseError(Exception):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


def _describe(tok: Token) -> str:
    return "end of file" if tok.kind is E else repr(tok.lexeme)


class Parser:
    def __init__(self, tokens: list[Token]):
        if not tokens or tokens[-1].kind is not E:
            raise ValueError("token stream must end with eof")
        self.tokens = tokens
        self.i = 0
        self.next_cid = 0
        self.next_eid = 0

    # -- token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def at(self, kind: TokenKind, value: str | None = None) -> bool:
        return self.tok.is_(kind, value)

    def at_any(self, kind: TokenKind, values) -> bool:
        return self.tok.kind is kind and self.tok.value in values

    def take(self) -> Token:
        tok = self.tok
        if tok.kind is not E:
            self.i += 1
        return tok

    def expect(self, kind: TokenKind, value: str | None = None, what: str | None = None) -> Token:
        if not self.at(kind, value):
            wanted = what or (repr(value) if value else kind.value)
            self.error(f"expected {wanted}, found {_describe(self.tok)}")
        return self.take()

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(message, tok.line, tok.column)

    def pos(self, tok: Token | None = None) -> ast.Pos:
        tok = tok or self.tok
        return ast.Pos(tok.line, tok.column)

    def cid(self) -> int:
        self.next_cid += 1
        return self.next_cid - 1

    def eid(self) -> int:
        self.next_eid += 1
        return self.next_eid - 1

    # -- program structure

    def program(self) -> ast.Program:
        start = self.expect(K, "PROGRAM")
        name = self.expect(I, what="program name").lexeme
        self.expect(P, ";")
        decls: list[tuple[str, str]] = []
        if self.at(K, "VAR"):
            self.take()
            while self.at(I):
                names = [self.take()]
                while self.at(P, ","):
                    self.take()
                    names.append(self.expect(I))
                self.expect(P, ":")
                typ = self.tok
                if not self.at_any(K, ("INTEGER", "BOOLEAN", "CHAR")):
                    self.error(f"expected type name, found {_describe(typ)}")
                self.take()
                self.expect(P, ";")
                decls.extend((n.lexeme, typ.value.lower()) for n in names)
            if not decls:
                self.error(f"expected identifier, found {_describe(self.tok)}")
        self.expect(K, "BEGIN")
        body = self.statement_list()
        self.expect(K, "END")
        self.expect(P, ".")
        self.expect(E, what="end of file")
        return ast.Program(name, tuple(decls), tuple(body), pos=self.pos(start))

    def statement_list(self) -> list[ast.Stmt]:
        stmts = [self.statement()]
        while self.at(P, ";"):
            self.take()
            stmts.append(self.statement())
        return stmts

    def statement(self) -> ast.Stmt:
        tok = self.tok
        pos = self.pos()
        if tok.kind is I:
            self.take()
            self.expect(O, ":=")
            return ast.Assign(tok.lexeme, self.expression(), pos=pos)
        if tok.kind is not K:
            if tok.kind is E or tok.is_(P, ";"):
                return ast.Empty(pos=pos)
            self.error(f"expected statement, found {_describe(tok)}")
        word = tok.value
        if word in ("END", "UNTIL", "ELSE"):
            return ast.Empty(pos=pos)
        handler = {
            "BEGIN": self.compound,
            "WHILE": self.while_,
            "REPEAT": self.repeat,
            "FOR": self.for_,
            "IF": self.if_,
            "CASE": self.case,
            "WRITELN": self.writeln,
            "READLN": self.readln,
        }.get(word)
        if handler is None:
            self.error(f"expected statement, found {_describe(tok)}")
        return handler()

    def compound(self) -> ast.Compound:
        pos = self.pos(self.take())
        body = self.statement_list()
        self.expect(K, "END")
        return ast.Compound(tuple(body), pos=pos)

    def while_(self) -> ast.While:
        pos = self.pos(self.take())
        cid = self.cid()
        cond = self.expression()
        self.expect(K, "DO")
        return ast.While(cid, cond, self.statement(), pos=pos)

    def repeat(self) -> ast.Repeat:
        pos = self.pos(self.take())
        cid = self.cid()
        body = self.statement_list()
        self.expect(K, "UNTIL")
        return ast.Repeat(cid, tuple(body), self.expression(), pos=pos)

    def for_(self) -> ast.For:
        pos = self.pos(self.take())
        cid = self.cid()
        var = self.expect(I, what="loop variable").lexeme
        self.expect(O, ":=")
        start = self.expression()
        if not self.at_any(K, ("TO", "DOWNTO")):
            self.error(f"expected 'TO' or 'DOWNTO', found {_describe(self.tok)}")
        downto = self.take().value == "DOWNTO"
        stop = self.expression()
        self.expect(K, "DO")
        return ast.For(cid, var, start, stop, downto, self.statement(), pos=pos)

    def if_(self) -> ast.If:
        pos = self.pos(self.take())
        cid = self.cid()
        cond = self.expression()
        self.expect(K, "THEN")
        then = self.statement()
        else_ = None
        if self.at(K, "ELSE"):
            self.take()
            else_ = self.statement()
        return ast.If(cid, cond, then, else_, pos=pos)

    def case(self) -> ast.Case:
        pos = self.pos(self.take())
        cid = self.cid()
        selector = self.expression()
        self.expect(K, "OF")
        arms = [self.case_arm()]
        else_body = None
        while self.at(P, ";"):
            self.take()
            if self.at(K, "ELSE") or self.at(K, "END"):
                break
            arms.append(self.case_arm())
        if self.at(K, "ELSE"):
            self.take()
            else_body = tuple(self.statement_list())
        self.expect(K, "END")
        return ast.Case(cid, selector, tuple(arms), else_body, pos=pos)

    def case_arm(self) -> ast.CaseArm:
        pos = self.pos()
        labels = [self.case_label()]
        while self.at(P, ","):
            self.take()
            labels.append(self.case_label())
        self.expect(P, ":")
        return ast.CaseArm(tuple(labels), self.statement(), pos=pos)

    def case_label(self) -> ast.Expr:
        if self.at(N) or self.at(C) or self.at(O, "-"):
            expr = self.unary()
            if isinstance(expr, (ast.IntLit, ast.CharLit)) or (
                isinstance(expr, ast.Unary) and isinstance(expr.operand, ast.IntLit)
            ):
                return expr
        self.error(f"expected constant case label, found {_describe(self.tok)}")

    def writeln(self) -> ast.Writeln:
        pos = self.pos(self.take())
        args: list[ast.Expr] = []
        if self.at(P, "("):
            self.take()
            if not self.at(P, ")"):
                args.append(self.expression())
                while self.at(P, ","):
                    self.take()
                    args.append(self.expression())
            self.expect(P, ")")
        return ast.Writeln(tuple(args), pos=pos)

    def readln(self) -> ast.Readln:
        pos = self.pos(self.take())
        self.expect(P, "(")
        target = self.expect(I, what="variable").lexeme
        self.expect(P, ")")
        return ast.Readln(target, pos=pos)

    # -- expressions

    def binary_level(self, ops, operand):
        left = operand()
        while self.tok.kind in (O, K) and self.tok.value in ops:
            tok = self.take()
            right = operand()
            left = ast.Binary(tok.value, left, right, self.eid(), self.pos(tok))
        return left

    def expression(self) -> ast.Expr:
        return self.binary_level(("OR",), self.conjunction)

    def conjunction(self) -> ast.Expr:
        return self.binary_level(("AND",), self.relation)

    def relation(self) -> ast.Expr:
        left = self.additive()
        if self.at_any(O, ast.RELATIONAL_OPS):
            tok = self.take()
            right = self.additive()
            return ast.Binary(tok.value, left, right, self.eid(), self.pos(tok))
        return left

    def additive(self) -> ast.Expr:
        return self.binary_level(ADD_OPS, self.multiplicative)

    def multiplicative(self) -> ast.Expr:
        return self.binary_level(MUL_OPS, self.unary)

    def unary(self) -> ast.Expr:
        tok = self.tok
        if tok.is_(K, "NOT") or tok.is_(O, "-"):
            self.take()
            operand = self.unary()
            return ast.Unary(tok.value, operand, self.eid(), self.pos(tok))
        return self.primary()

    def primary(self) -> ast.Expr:
        tok = self.tok
        pos = self.pos()
        if tok.kind is N:
            self.take()
            value = int(tok.lexeme)
            if value > INT_MAX:
                self.error("integer literal out of range", tok)
            return ast.IntLit(value, self.eid(), pos)
        if tok.kind is C:
            self.take()
            text = tok.value
            if len(text) == 1:
                return ast.CharLit(text, self.eid(), pos)
            return ast.StrLit(text, self.eid(), pos)
        if tok.is_(K, "TRUE") or tok.is_(K, "FALSE"):
            self.take()
            return ast.BoolLit(tok.value == "TRUE", self.eid(), pos)
        if tok.kind is I:
            self.take()
            return ast.VarRef(tok.lexeme, self.eid(), pos)
        if tok.is_(P, "("):
            self.take()
            expr = self.expression()
            self.expect(P, ")")
            return expr
        self.error(f"expected expression, found {_describe(tok)}")


def parse(tokens: list[Token], source: str | None = None) -> ast.Program:
    """Parse a complete program. ``source``, when given, is digested into the result."""
    program = Parser(tokens).program()
    if source is not None:
        program = replace(program, source_digest=source_digest(source))
    return program


def parse_expression(tokens: list[Token]) -> ast.Expr:
    p = Parser(tokens)
    expr = p.expression()
    p.expect(E, what="end of expression")
    return expr


def source_digest(source: str) -> str:
    return hashlib.sha256(source.encode("utf-8")).hexdigest()


def parse_source(source: str) -> ast.Program:
    return parse(tokenize(source), source)
