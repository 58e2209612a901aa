"""Tree-walking interpreter that records a control-flow trace while it runs."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

from . import trace as tr
from .lang import ast, check
from .lang.checker import label_value

INT_MIN, INT_MAX = -(2**63), 2**63 - 1

COMPLETED = "completed"
RUNTIME_ERROR = "runtime-error"
STEP_LIMIT = "step-limit-exceeded"

Value = int | bool | str
Sink = Callable[..., None]

INT_INPUT = re.compile(r"[+-]?[0-9]+")


class RuntimeFault(Exception):
    def __init__(self, message: str, pos: ast.Pos = ast.Pos()):
        super().__init__(f"{pos}: {message}")
        self.message = message
        self.pos = pos


class StepLimitExceeded(Exception):
    pass


@dataclass(frozen=True)
class RunOptions:
    step_limit: int = 100_000
    subexpr_tracing: bool = False


@dataclass(frozen=True)
class RunResult:
    output: str
    status: str
    steps_used: int
    error: str | None = None


def _checked(value: int, pos: ast.Pos) -> int:
    if not INT_MIN <= value <= INT_MAX:
        raise RuntimeFault("integer overflow", pos)
    return value


def _div(a: int, b: int, pos: ast.Pos) -> int:
    if b == 0:
        raise RuntimeFault("division by zero", pos)
    q = abs(a) // abs(b)
    return _checked(q if (a < 0) == (b < 0) else -q, pos)


def _mod(a: int, b: int, pos: ast.Pos) -> int:
    if b == 0:
        raise RuntimeFault("division by zero", pos)
    return a - b * _div(a, b, pos)


ARITH = {
    "+": lambda a, b, pos: _checked(a + b, pos),
    "-": lambda a, b, pos: _checked(a - b, pos),
    "*": lambda a, b, pos: _checked(a * b, pos),
    "DIV": _div,
    "MOD": _mod,
}
RELATIONAL = {
    "=": lambda a, b: a == b,
    "<>": lambda a, b: a != b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


def evaluate(expr: ast.Expr, env: dict[str, Value], sink: Sink | None = None) -> Value:
    """Evaluate ``expr``. With a sink, each evaluated AND/OR operand emits a SubexprOutcome."""
    if isinstance(expr, (ast.IntLit, ast.CharLit, ast.BoolLit, ast.StrLit)):
        return expr.value
    if isinstance(expr, ast.VarRef):
        key = expr.name.lower()
        if key not in env:
            raise RuntimeFault(f"read of uninitialized variable '{expr.name}'", expr.pos)
        return env[key]
    if isinstance(expr, ast.Unary):
        value = evaluate(expr.operand, env, sink)
        if expr.op == "NOT":
            return not value
        return _checked(-value, expr.pos)
    if expr.op in ("AND", "OR"):
        left = evaluate(expr.left, env, sink)
        if sink is not None:
            sink(tr.SUBEXPR, out=left, expr=expr.left.eid)
        if left == (expr.op == "OR"):
            return left
        right = evaluate(expr.right, env, sink)
        if sink is not None:
            sink(tr.SUBEXPR, out=right, expr=expr.right.eid)
        return right
    left = evaluate(expr.left, env, sink)
    right = evaluate(expr.right, env, sink)
    if expr.op in RELATIONAL:
        return RELATIONAL[expr.op](left, right)
    return ARITH[expr.op](left, right, expr.pos)


def evaluate_condition(expr: ast.Expr, env: dict[str, Value], sink: Sink, subexpr_tracing: bool = False) -> bool:
    """Evaluate a construct's condition and emit its outcome through ``sink``.

    ``sink(event_kind, **payload)`` is bound to the owning construct.
    """
    value = evaluate(expr, env, sink if subexpr_tracing else None)
    sink(tr.CONDITION, out=value)
    return value


def format_value(value: Value) -> str:
    if isinstance(value, bool):
        return "TRUE" if value else "FALSE"
    return str(value)


class Interpreter:
    def __init__(self, program: ast.Program, input_text: str, options: RunOptions):
        self.program = program
        self.options = options
        self.types = program.var_types()
        self.env: dict[str, Value] = {}
        self.inputs = input_text.split()
        self.input_pos = 0
        self.output: list[str] = []
        self.steps = 0
        self.recorder = tr.TraceRecorder()

    def step(self) -> None:
        self.steps += 1
        if self.steps > self.options.step_limit:
            raise StepLimitExceeded()

    def sink_for(self, node) -> Sink:
        def sink(ev: str, **payload) -> None:
            self.recorder.emit(node.cid, node.kind, ev, **payload)

        return sink

    def condition(self, node, sink: Sink) -> bool:
        return evaluate_condition(node.cond, self.env, sink, self.options.subexpr_tracing)

    def execute(self) -> tuple[RunResult, tr.Trace]:
        status, error = COMPLETED, None
        try:
            self.block(self.program.body)
        except RuntimeFault as exc:
            status, error = RUNTIME_ERROR, str(exc)
        except StepLimitExceeded:
            status, error = STEP_LIMIT, f"step limit of {self.options.step_limit} exceeded"
        result = RunResult("".join(self.output), status, min(self.steps, self.options.step_limit), error)
        return result, self.recorder.trace(self.program.name, self.program.source_digest)

    def block(self, stmts) -> None:
        for stmt in stmts:
            self.stmt(stmt)

    def stmt(self, stmt: ast.Stmt) -> None:
        self.step()
        if isinstance(stmt, ast.Assign):
            self.env[stmt.target.lower()] = evaluate(stmt.expr, self.env)
        elif isinstance(stmt, ast.Writeln):
            self.output.append("".join(format_value(evaluate(a, self.env)) for a in stmt.args) + "\n")
        elif isinstance(stmt, ast.Readln):
            self.readln(stmt)
        elif isinstance(stmt, ast.Compound):
            self.block(stmt.body)
        elif isinstance(stmt, ast.Empty):
            pass
        else:
            self.construct(stmt)

    def readln(self, stmt: ast.Readln) -> None:
        if self.input_pos >= len(self.inputs):
            raise RuntimeFault("input exhausted", stmt.pos)
        token = self.inputs[self.input_pos]
        self.input_pos += 1
        typ = self.types[stmt.target.lower()]
        if typ == ast.INTEGER:
            if not INT_INPUT.fullmatch(token):
                raise RuntimeFault(f"invalid integer input {token!r}", stmt.pos)
            value = _checked(int(token), stmt.pos)
        else:
            if len(token) != 1:
                raise RuntimeFault(f"invalid char input {token!r}", stmt.pos)
            value = token
        self.env[stmt.target.lower()] = value

    def construct(self, node) -> None:
        sink = self.sink_for(node)
        sink(tr.ENTER)
        try:
            if isinstance(node, ast.While):
                while True:
                    self.step()
                    if not self.condition(node, sink):
                        break
                    self.stmt(node.body)
            elif isinstance(node, ast.Repeat):
                while True:
                    self.block(node.body)
                    self.step()
                    if self.condition(node, sink):
                        break
            elif isinstance(node, ast.For):
                self.for_loop(node, sink)
            elif isinstance(node, ast.If):
                if self.condition(node, sink):
                    self.stmt(node.then)
                elif node.else_ is not None:
                    self.stmt(node.else_)
            elif isinstance(node, ast.Case):
                self.case(node, sink)
            else:
                raise TypeError(f"unknown statement node {node!r}")
        finally:
            sink(tr.EXIT)

    def for_loop(self, node: ast.For, sink: Sink) -> None:
        start = evaluate(node.start, self.env)
        stop = evaluate(node.stop, self.env)
        is_char = isinstance(start, str)
        lo, hi = (ord(start), ord(stop)) if is_char else (start, stop)
        values = range(lo, hi - 1, -1) if node.downto else range(lo, hi + 1)
        count = len(values)
        key = node.var.lower()
        for index, value in enumerate(values, start=1):
            self.env[key] = chr(value) if is_char else value
            sink(tr.TICK, iter=index, final=index == count)
            self.stmt(node.body)

    def case(self, node: ast.Case, sink: Sink) -> None:
        selector = evaluate(node.selector, self.env)
        for index, arm in enumerate(node.arms):
            matched = any(label_value(label) == selector for label in arm.labels)
            sink(tr.ARM_TEST, out=matched, arm=index)
            if matched:
                self.stmt(arm.body)
                return
        if node.else_body is not None:
            sink(tr.ELSE_TAKEN)
            self.block(node.else_body)


def run(program: ast.Program, input_text: str = "", options: RunOptions | None = None) -> tuple[RunResult, tr.Trace]:
    diagnostics = check(program)
    if diagnostics:
        raise ValueError("program has static errors: " + "; ".join(map(str, diagnostics)))
    return Interpreter(program, input_text, options or RunOptions()).execute()
