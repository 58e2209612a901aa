"""Static checks: declarations, expression types, CASE labels, FOR variables."""

from __future__ import annotations

from dataclasses import dataclass

from . import ast

STRING = "string"


@dataclass(frozen=True)
class Diagnostic:
    message: str
    pos: ast.Pos = ast.Pos()

    def __str__(self) -> str:
        return f"{self.pos}: {self.message}"


def label_value(expr: ast.Expr) -> int | str:
    if isinstance(expr, ast.Unary) and expr.op == "-" and isinstance(expr.operand, ast.IntLit):
        return -expr.operand.value
    if isinstance(expr, (ast.IntLit, ast.CharLit)):
        return expr.value
    raise TypeError(f"not a constant label: {expr!r}")


class Checker:
    def __init__(self, program: ast.Program):
        self.program = program
        self.diags: list[Diagnostic] = []
        self.vars: dict[str, str] = {}
        self.loop_vars: list[str] = []

    def report(self, message: str, pos: ast.Pos) -> None:
        self.diags.append(Diagnostic(message, pos))

    def run(self) -> list[Diagnostic]:
        for name, typ in self.program.declarations:
            key = name.lower()
            if key in self.vars:
                self.report(f"duplicate declaration of '{name}'", self.program.pos)
            else:
                self.vars[key] = typ
        for stmt in self.program.body:
            self.stmt(stmt)
        return self.diags

    def lookup(self, name: str, pos: ast.Pos) -> str | None:
        typ = self.vars.get(name.lower())
        if typ is None:
            self.report(f"undeclared identifier '{name}'", pos)
        return typ

    def require(self, expr: ast.Expr, wanted: str, context: str) -> None:
        typ = self.expr(expr)
        if typ is not None and typ != wanted:
            self.report(f"{context} must be {wanted}, found {typ}", expr.pos)

    def assignable(self, name: str, pos: ast.Pos) -> str | None:
        typ = self.lookup(name, pos)
        if name.lower() in self.loop_vars:
            self.report(f"assignment to FOR loop variable '{name}' inside its loop", pos)
        return typ

    # -- statements

    def stmt(self, stmt: ast.Stmt) -> None:
        if isinstance(stmt, ast.Assign):
            target = self.assignable(stmt.target, stmt.pos)
            value = self.expr(stmt.expr)
            if target is not None and value is not None and target != value:
                self.report(f"cannot assign {value} to '{stmt.target}' of type {target}", stmt.pos)
        elif isinstance(stmt, ast.Writeln):
            for arg in stmt.args:
                self.expr(arg, allow_string=True)
        elif isinstance(stmt, ast.Readln):
            target = self.assignable(stmt.target, stmt.pos)
            if target == ast.BOOLEAN:
                self.report(f"cannot read a boolean into '{stmt.target}'", stmt.pos)
        elif isinstance(stmt, (ast.While, ast.If)):
            self.require(stmt.cond, ast.BOOLEAN, "condition")
            for child in ast.children(stmt):
                self.stmt(child)
        elif isinstance(stmt, ast.Repeat):
            for child in stmt.body:
                self.stmt(child)
            self.require(stmt.cond, ast.BOOLEAN, "condition")
        elif isinstance(stmt, ast.For):
            self.for_(stmt)
        elif isinstance(stmt, ast.Case):
            self.case(stmt)
        elif isinstance(stmt, ast.Compound):
            for child in stmt.body:
                self.stmt(child)

    def for_(self, stmt: ast.For) -> None:
        var = self.assignable(stmt.var, stmt.pos)
        if var is not None and var not in (ast.INTEGER, ast.CHAR):
            self.report(f"FOR variable '{stmt.var}' must be integer or char", stmt.pos)
            var = None
        for bound in (stmt.start, stmt.stop):
            typ = self.expr(bound)
            if var is not None and typ is not None and typ != var:
                self.report(f"FOR bound must be {var}, found {typ}", bound.pos)
        self.loop_vars.append(stmt.var.lower())
        self.stmt(stmt.body)
        self.loop_vars.pop()

    def case(self, stmt: ast.Case) -> None:
        sel = self.expr(stmt.selector)
        if sel is not None and sel not in (ast.INTEGER, ast.CHAR):
            self.report(f"CASE selector must be integer or char, found {sel}", stmt.selector.pos)
            sel = None
        seen: set[int | str] = set()
        for arm in stmt.arms:
            for label in arm.labels:
                typ = self.expr(label)
                if sel is not None and typ != sel:
                    self.report(f"CASE label must be {sel}, found {typ}", label.pos)
                value = label_value(label)
                if (typ, value) in seen:
                    self.report(f"duplicate CASE label {value!r}", label.pos)
                seen.add((typ, value))
            self.stmt(arm.body)
        for child in stmt.else_body or ():
            self.stmt(child)

    # -- expressions

    def expr(self, expr: ast.Expr, allow_string: bool = False) -> str | None:
        if isinstance(expr, ast.IntLit):
            return ast.INTEGER
        if isinstance(expr, ast.CharLit):
            return ast.CHAR
        if isinstance(expr, ast.BoolLit):
            return ast.BOOLEAN
        if isinstance(expr, ast.StrLit):
            if not allow_string:
                self.report("string literal only allowed as a Writeln argument", expr.pos)
                return None
            return STRING
        if isinstance(expr, ast.VarRef):
            return self.lookup(expr.name, expr.pos)
        if isinstance(expr, ast.Unary):
            wanted = ast.BOOLEAN if expr.op == "NOT" else ast.INTEGER
            self.require(expr.operand, wanted, f"operand of {expr.op}")
            return wanted
        if isinstance(expr, ast.Binary):
            if expr.op in ast.RELATIONAL_OPS:
                left, right = self.expr(expr.left), self.expr(expr.right)
                if left is not None and right is not None and left != right:
                    self.report(f"cannot compare {left} with {right}", expr.pos)
                return ast.BOOLEAN
            wanted = ast.BOOLEAN if expr.op in ast.LOGICAL_OPS else ast.INTEGER
            self.require(expr.left, wanted, f"operand of {expr.op}")
            self.require(expr.right, wanted, f"operand of {expr.op}")
            return wanted
        raise TypeError(f"unknown expression node {expr!r}")


def check(program: ast.Program) -> list[Diagnostic]:
    return Checker(program).run()
