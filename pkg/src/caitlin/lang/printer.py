"""Canonical pretty-printer. ``parse_source(pretty(p)) == p`` for parsed programs."""

from __future__ import annotations

from . import ast

INDENT = "  "

_PREC = {"OR": 1, "AND": 2, "+": 4, "-": 4, "*": 5, "DIV": 5, "MOD": 5}
_PREC.update({op: 3 for op in ast.RELATIONAL_OPS})
UNARY_PREC = 6
ATOM_PREC = 7


def precedence(expr: ast.Expr) -> int:
    if isinstance(expr, ast.Binary):
        return _PREC[expr.op]
    if isinstance(expr, ast.Unary):
        return UNARY_PREC
    return ATOM_PREC


def quote(text: str) -> str:
    return "'" + text.replace("'", "''") + "'"


def expr_text(expr: ast.Expr) -> str:
    if isinstance(expr, ast.IntLit):
        return str(expr.value)
    if isinstance(expr, (ast.CharLit, ast.StrLit)):
        return quote(expr.value)
    if isinstance(expr, ast.BoolLit):
        return "TRUE" if expr.value else "FALSE"
    if isinstance(expr, ast.VarRef):
        return expr.name
    if isinstance(expr, ast.Unary):
        inner = _wrap(expr.operand, precedence(expr.operand) < UNARY_PREC)
        return f"NOT {inner}" if expr.op == "NOT" else f"-{inner}"
    if isinstance(expr, ast.Binary):
        p = _PREC[expr.op]
        # relational operators do not chain, so either side at the same level needs parens
        left_paren = precedence(expr.left) < p or (p == 3 and precedence(expr.left) == 3)
        right_paren = precedence(expr.right) <= p
        return f"{_wrap(expr.left, left_paren)} {expr.op} {_wrap(expr.right, right_paren)}"
    raise TypeError(f"unknown expression node {expr!r}")


def _wrap(expr: ast.Expr, paren: bool) -> str:
    text = expr_text(expr)
    return f"({text})" if paren else text


def _dangles(stmt: ast.Stmt) -> bool:
    """True if a following ELSE would be captured by an IF nested at the tail of stmt."""
    if isinstance(stmt, ast.If):
        return stmt.else_ is None or _dangles(stmt.else_)
    if isinstance(stmt, (ast.While, ast.For)):
        return _dangles(stmt.body)
    return False


def _stmt_list(stmts, depth: int) -> list[str]:
    lines: list[str] = []
    for i, stmt in enumerate(stmts):
        chunk = _stmt(stmt, depth)
        if i < len(stmts) - 1:
            chunk[-1] += ";"
        lines.extend(chunk)
    return lines


def _nested(stmt: ast.Stmt, depth: int, head: str) -> list[str]:
    """Place ``stmt`` after ``head`` (e.g. ``... DO``), on the same line when it is empty."""
    if isinstance(stmt, ast.Empty):
        return [head]
    return [head] + _stmt(stmt, depth + 1)


def _stmt(stmt: ast.Stmt, depth: int) -> list[str]:
    pad = INDENT * depth
    if isinstance(stmt, ast.Empty):
        return [pad]
    if isinstance(stmt, ast.Assign):
        return [f"{pad}{stmt.target} := {expr_text(stmt.expr)}"]
    if isinstance(stmt, ast.Writeln):
        if not stmt.args:
            return [f"{pad}Writeln"]
        return [f"{pad}Writeln({', '.join(expr_text(a) for a in stmt.args)})"]
    if isinstance(stmt, ast.Readln):
        return [f"{pad}Readln({stmt.target})"]
    if isinstance(stmt, ast.Compound):
        return [f"{pad}BEGIN"] + _stmt_list(stmt.body, depth + 1) + [f"{pad}END"]
    if isinstance(stmt, ast.While):
        return _nested(stmt.body, depth, f"{pad}WHILE {expr_text(stmt.cond)} DO")
    if isinstance(stmt, ast.Repeat):
        return [f"{pad}REPEAT"] + _stmt_list(stmt.body, depth + 1) + [f"{pad}UNTIL {expr_text(stmt.cond)}"]
    if isinstance(stmt, ast.For):
        direction = "DOWNTO" if stmt.downto else "TO"
        head = f"{pad}FOR {stmt.var} := {expr_text(stmt.start)} {direction} {expr_text(stmt.stop)} DO"
        return _nested(stmt.body, depth, head)
    if isinstance(stmt, ast.If):
        then = stmt.then
        if stmt.else_ is not None and _dangles(then):
            then = ast.Compound((then,))
        lines = _nested(then, depth, f"{pad}IF {expr_text(stmt.cond)} THEN")
        if stmt.else_ is not None:
            lines += _nested(stmt.else_, depth, f"{pad}ELSE")
        return lines
    if isinstance(stmt, ast.Case):
        lines = [f"{pad}CASE {expr_text(stmt.selector)} OF"]
        for arm in stmt.arms:
            labels = ", ".join(expr_text(label) for label in arm.labels)
            arm_lines = _nested(arm.body, depth + 1, f"{pad}{INDENT}{labels} :")
            arm_lines[-1] += ";"
            lines += arm_lines
        if stmt.else_body is not None:
            lines.append(f"{pad}ELSE")
            lines += _stmt_list(stmt.else_body, depth + 1)
        lines.append(f"{pad}END")
        return lines
    raise TypeError(f"unknown statement node {stmt!r}")


def pretty(program: ast.Program) -> str:
    lines = [f"PROGRAM {program.name};"]
    if program.declarations:
        lines.append("VAR")
        lines += [f"{INDENT}{name} : {typ};" for name, typ in program.declarations]
    lines.append("BEGIN")
    lines += _stmt_list(program.body, 1)
    lines.append("END.")
    return "\n".join(line.rstrip() for line in lines) + "\n"
