"""AST node types.

Construct nodes (the eight auralizable statements) carry a ``cid`` assigned in
depth-first source order. Every expression node carries an ``eid``. Source
positions are excluded from equality so that a reparsed pretty-print compares
equal to the original tree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union

INTEGER = "integer"
BOOLEAN = "boolean"
CHAR = "char"
TYPES = (INTEGER, BOOLEAN, CHAR)

RELATIONAL_OPS = ("=", "<>", "<", "<=", ">", ">=")
ARITH_OPS = ("+", "-", "*", "DIV", "MOD")
LOGICAL_OPS = ("AND", "OR")


@dataclass(frozen=True)
class Pos:
    line: int = 0
    column: int = 0

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


def _pos() -> Pos:
    return field(default=Pos(), compare=False, repr=False)


# -- expressions -------------------------------------------------------------


@dataclass(frozen=True)
class IntLit:
    value: int
    eid: int = 0
    pos: Pos = _pos()


@dataclass(frozen=True)
class CharLit:
    value: str
    eid: int = 0
    pos: Pos = _pos()


@dataclass(frozen=True)
class BoolLit:
    value: bool
    eid: int = 0
    pos: Pos = _pos()


@dataclass(frozen=True)
class StrLit:
    """Quoted text longer than one character; legal only as a Writeln argument."""

    value: str
    eid: int = 0
    pos: Pos = _pos()


@dataclass(frozen=True)
class VarRef:
    name: str
    eid: int = 0
    pos: Pos = _pos()


@dataclass(frozen=True)
class Unary:
    op: str  # "NOT" or "-"
    operand: Expr
    eid: int = 0
    pos: Pos = _pos()


@dataclass(frozen=True)
class Binary:
    op: str
    left: Expr
    right: Expr
    eid: int = 0
    pos: Pos = _pos()


Expr = Union[IntLit, CharLit, BoolLit, StrLit, VarRef, Unary, Binary]


# -- statements ----------------------------------------------------------------


@dataclass(frozen=True)
class Empty:
    pos: Pos = _pos()


@dataclass(frozen=True)
class Assign:
    target: str
    expr: Expr
    pos: Pos = _pos()


@dataclass(frozen=True)
class Writeln:
    args: tuple[Expr, ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class Readln:
    target: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class Compound:
    body: tuple[Stmt, ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class While:
    cid: int
    cond: Expr
    body: Stmt
    pos: Pos = _pos()

    kind = "WHILE"


@dataclass(frozen=True)
class Repeat:
    cid: int
    body: tuple[Stmt, ...]
    cond: Expr
    pos: Pos = _pos()

    kind = "REPEAT"


@dataclass(frozen=True)
class For:
    cid: int
    var: str
    start: Expr
    stop: Expr
    downto: bool
    body: Stmt
    pos: Pos = _pos()

    @property
    def kind(self) -> str:
        return "FOR_DOWNTO" if self.downto else "FOR_TO"


@dataclass(frozen=True)
class If:
    cid: int
    cond: Expr
    then: Stmt
    else_: Stmt | None = None
    pos: Pos = _pos()

    @property
    def kind(self) -> str:
        return "IF" if self.else_ is None else "IF_ELSE"


@dataclass(frozen=True)
class CaseArm:
    labels: tuple[Expr, ...]
    body: Stmt
    pos: Pos = _pos()


@dataclass(frozen=True)
class Case:
    cid: int
    selector: Expr
    arms: tuple[CaseArm, ...]
    else_body: tuple[Stmt, ...] | None = None
    pos: Pos = _pos()

    @property
    def kind(self) -> str:
        return "CASE" if self.else_body is None else "CASE_ELSE"

    @property
    def has_else(self) -> bool:
        return self.else_body is not None


Stmt = Union[Empty, Assign, Writeln, Readln, Compound, While, Repeat, For, If, Case]
CONSTRUCT_TYPES = (While, Repeat, For, If, Case)


@dataclass(frozen=True)
class Program:
    name: str
    declarations: tuple[tuple[str, str], ...]
    body: tuple[Stmt, ...]
    source_digest: str = field(default="", compare=False)
    pos: Pos = _pos()

    def var_types(self) -> dict[str, str]:
        return {name.lower(): typ for name, typ in self.declarations}


def children(stmt: Stmt) -> Iterator[Stmt]:
    """Direct sub-statements in source order."""
    if isinstance(stmt, Compound):
        yield from stmt.body
    elif isinstance(stmt, (While, For)):
        yield stmt.body
    elif isinstance(stmt, Repeat):
        yield from stmt.body
    elif isinstance(stmt, If):
        yield stmt.then
        if stmt.else_ is not None:
            yield stmt.else_
    elif isinstance(stmt, Case):
        for arm in stmt.arms:
            yield arm.body
        if stmt.else_body is not None:
            yield from stmt.else_body


def walk(body: tuple[Stmt, ...]) -> Iterator[Stmt]:
    """Pre-order traversal over a statement list."""
    for stmt in body:
        yield stmt
        yield from walk(tuple(children(stmt)))


def constructs(program: Program) -> list[Stmt]:
    return [s for s in walk(program.body) if isinstance(s, CONSTRUCT_TYPES)]


def stmt_exprs(stmt: Stmt) -> Iterator[Expr]:
    """Expressions owned directly by a statement (not its children)."""
    if isinstance(stmt, Assign):
        yield stmt.expr
    elif isinstance(stmt, Writeln):
        yield from stmt.args
    elif isinstance(stmt, (While, Repeat, If)):
        yield stmt.cond
    elif isinstance(stmt, For):
        yield stmt.start
        yield stmt.stop
    elif isinstance(stmt, Case):
        yield stmt.selector
        for arm in stmt.arms:
            yield from arm.labels


def subexprs(expr: Expr) -> Iterator[Expr]:
    """Pre-order traversal of an expression tree."""
    yield expr
    if isinstance(expr, Unary):
        yield from subexprs(expr.operand)
    elif isinstance(expr, Binary):
        yield from subexprs(expr.left)
        yield from subexprs(expr.right)
