"""Seeded single-site mutations of a parsed program."""

from __future__ import annotations

import dataclasses
import random
from enum import Enum

from ..lang import ast, check, parse_source, pretty
from ..lang.checker import label_value


class MutationKind(str, Enum):
    FLIP_RELATIONAL = "flipRelationalOperator"
    OFF_BY_ONE_BOUND = "offByOneLoopBound"
    WRONG_CASE_LABEL = "wrongCaseLabel"
    SWAP_AND_OR = "swapAndOr"
    DEAD_ELSE = "deadElseInjection"
    OUTPUT_TEXT = "pureOutputTextChange"


FLOW_PRESERVING = frozenset({MutationKind.OUTPUT_TEXT})
NEGATED = {"<": ">=", ">=": "<", ">": "<=", "<=": ">", "=": "<>", "<>": "="}


class NoEligibleSite(ValueError):
    pass


def _is_node(value) -> bool:
    return dataclasses.is_dataclass(value) and not isinstance(value, (type, ast.Pos))


def _rebuild(node, fn):
    """Pre-order rewrite: ``fn(node)`` returns a replacement or None to descend."""
    replacement = fn(node)
    if replacement is not None:
        return replacement
    changes = {}
    for f in dataclasses.fields(node):
        value = getattr(node, f.name)
        if _is_node(value):
            new = _rebuild(value, fn)
        elif isinstance(value, tuple) and any(_is_node(v) for v in value):
            new = tuple(_rebuild(v, fn) if _is_node(v) else v for v in value)
        else:
            continue
        if new is not value:
            changes[f.name] = new
    return dataclasses.replace(node, **changes) if changes else node


def _all_exprs(program: ast.Program):
    for stmt in ast.walk(program.body):
        for expr in ast.stmt_exprs(stmt):
            yield stmt, expr
            yield from ((stmt, sub) for sub in ast.subexprs(expr) if sub is not expr)


def _sites(program: ast.Program, kind: MutationKind) -> list:
    if kind is MutationKind.FLIP_RELATIONAL:
        return [e for _, e in _all_exprs(program) if isinstance(e, ast.Binary) and e.op in NEGATED]
    if kind is MutationKind.SWAP_AND_OR:
        return [e for _, e in _all_exprs(program) if isinstance(e, ast.Binary) and e.op in ("AND", "OR")]
    if kind is MutationKind.OUTPUT_TEXT:
        return [e for s, e in _all_exprs(program) if isinstance(s, ast.Writeln) and isinstance(e, ast.StrLit)]
    if kind is MutationKind.WRONG_CASE_LABEL:
        return [label for s in ast.walk(program.body) if isinstance(s, ast.Case)
                for arm in s.arms for label in arm.labels]
    if kind is MutationKind.OFF_BY_ONE_BOUND:
        return [s for s in ast.walk(program.body) if isinstance(s, ast.For)]
    if kind is MutationKind.DEAD_ELSE:
        return [s for s in ast.walk(program.body) if isinstance(s, ast.If) and s.else_ is None]
    raise ValueError(f"unknown mutation kind {kind!r}")


def _int_expr(value: int) -> ast.Expr:
    return ast.IntLit(value) if value >= 0 else ast.Unary("-", ast.IntLit(-value))


def _shift_label(label: ast.Expr, used: set, delta: int) -> ast.Expr:
    value = label_value(label)
    if isinstance(value, str):
        code = ord(value)
        while chr(code) in used or not chr(code).isprintable():
            code = (code - 32 + delta) % 95 + 32
        return ast.CharLit(chr(code))
    while value in used:
        value += delta
    return _int_expr(value)


def mutate(program: ast.Program, kind: MutationKind | str, seed: int) -> ast.Program:
    """Apply one ``kind`` mutation at a site picked by ``seed``; the result is reparsed."""
    kind = MutationKind(kind)
    sites = _sites(program, kind)
    if not sites:
        raise NoEligibleSite(f"no site for {kind.value} in program {program.name}")
    rng = random.Random(seed)
    target = sites[rng.randrange(len(sites))]
    delta = rng.choice((-1, 1))

    if kind is MutationKind.WRONG_CASE_LABEL:
        case = next(s for s in ast.walk(program.body) if isinstance(s, ast.Case)
                    and any(label is target for arm in s.arms for label in arm.labels))
        used = {label_value(label) for arm in case.arms for label in arm.labels}
        replacement = _shift_label(target, used, delta)
    elif kind is MutationKind.FLIP_RELATIONAL:
        replacement = dataclasses.replace(target, op=NEGATED[target.op])
    elif kind is MutationKind.SWAP_AND_OR:
        replacement = dataclasses.replace(target, op="OR" if target.op == "AND" else "AND")
    elif kind is MutationKind.OUTPUT_TEXT:
        text = target.value
        replacement = dataclasses.replace(target, value=text[:-1] if text.endswith(".") else text + ".")
    elif kind is MutationKind.DEAD_ELSE:
        replacement = dataclasses.replace(target, else_=ast.Empty())
    else:
        stop = target.stop
        if isinstance(stop, ast.IntLit):
            new_stop = _int_expr(stop.value + delta)
        else:
            new_stop = ast.Binary("+" if delta > 0 else "-", stop, ast.IntLit(1))
        replacement = dataclasses.replace(target, stop=new_stop)

    mutant = _rebuild(program, lambda node: replacement if node is target else None)
    result = parse_source(pretty(mutant))
    problems = check(result)
    if problems:
        raise NoEligibleSite(f"{kind.value} at the chosen site breaks static checks: {problems[0]}")
    return result
