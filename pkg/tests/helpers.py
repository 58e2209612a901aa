"""Shared fixtures-by-import: sample programs and a seeded random program generator."""

from __future__ import annotations

import random
from pathlib import Path

CORPUS = Path(__file__).resolve().parents[1] / "src" / "caitlin" / "data" / "corpus"

FOR_PROGRAM = """\
PROGRAM Loop;
VAR counter : INTEGER;
BEGIN
  FOR counter := 1 TO 6 DO
    WRITELN('Record ', counter)
END.
"""

CASE_PROGRAM = """\
PROGRAM Select;
VAR a, b : INTEGER;
BEGIN
  READLN(b);
  a := b + 3;
  CASE a OF
    1 : WRITELN('Found 1');
    2 : WRITELN('Found 2');
    3 : WRITELN('Found 3')
  ELSE
    WRITELN('Not found')
  END
END.
"""

COUNTERS = [f"k{i}" for i in range(8)]


class ProgramGenerator:
    """Random terminating programs that use every construct kind.

    Loops run off private counters that nothing else assigns, so every loop is
    bounded; arithmetic is kept small with MOD so nothing overflows.
    """

    def __init__(self, seed: int):
        self.rng = random.Random(seed)
        self.free = list(COUNTERS)

    def term(self) -> str:
        r = self.rng
        choice = r.randrange(4)
        if choice == 0:
            return str(r.randrange(-5, 10))
        if choice == 1:
            return r.choice("abc")
        return f"({r.choice('abc')} {r.choice(['+', '-', '*'])} {r.randrange(1, 6)})"

    def condition(self, depth: int = 0) -> str:
        r = self.rng
        choice = r.randrange(6 if depth < 2 else 3)
        if choice == 0:
            return r.choice(["p", "q", "TRUE", "FALSE"])
        if choice in (1, 2):
            return f"({self.term()} {r.choice(['=', '<>', '<', '<=', '>', '>='])} {self.term()})"
        if choice == 3:
            return f"NOT {self.condition(depth + 1)}"
        op = r.choice(["AND", "OR"])
        return f"({self.condition(depth + 1)} {op} {self.condition(depth + 1)})"

    def simple(self) -> list[str]:
        r = self.rng
        choice = r.randrange(5)
        if choice == 0:
            return [f"WRITELN('c=', c)"]
        if choice == 1:
            return [f"p := {self.condition(1)}"]
        v = r.choice("abc")
        return [f"{v} := ({self.term()} + {self.term()}) MOD 50"]

    def block(self, depth: int) -> list[str]:
        out = []
        for _ in range(self.rng.randint(1, 3)):
            out += self.statement(depth)
        return out

    def compound(self, depth: int) -> str:
        body = self.block(depth + 1)
        return body[0] if len(body) == 1 else "BEGIN " + "; ".join(body) + " END"

    def statement(self, depth: int) -> list[str]:
        r = self.rng
        if depth >= 3:
            return self.simple()
        kind = r.randrange(10)
        loop = kind in (2, 3, 4, 5) and self.free
        if kind < 2 or (kind in (2, 3, 4, 5) and not loop):
            return self.simple()
        if kind == 2:
            k = self.free.pop()
            bound = r.randint(0, 4)
            body = self.block(depth + 1) + [f"{k} := {k} + 1"]
            return [f"{k} := 0",
                    f"WHILE ({k} < {bound}) AND {self.condition(1)} DO BEGIN " + "; ".join(body) + " END"]
        if kind == 3:
            k = self.free.pop()
            bound = r.randint(1, 4)
            body = self.block(depth + 1) + [f"{k} := {k} + 1"]
            return [f"{k} := 0", "REPEAT " + "; ".join(body) + f" UNTIL ({k} >= {bound}) OR {self.condition(1)}"]
        if kind == 4:
            k = self.free.pop()
            return [f"FOR {k} := {r.randint(-1, 2)} TO {r.randint(0, 4)} DO {self.compound(depth)}"]
        if kind == 5:
            k = self.free.pop()
            return [f"FOR {k} := {r.randint(1, 5)} DOWNTO {r.randint(-1, 2)} DO {self.compound(depth)}"]
        if kind == 6:
            return [f"IF {self.condition()} THEN {self.compound(depth)}"]
        if kind == 7:
            return [f"IF {self.condition()} THEN {self.compound(depth)} ELSE {self.compound(depth)}"]
        arms = [f"0 : {self.compound(depth)}", f"1, 2 : {self.compound(depth)}", f"-1 : {self.compound(depth)}"]
        r.shuffle(arms)
        tail = f" ELSE {self.compound(depth)}" if kind == 9 else ""
        return [f"CASE c MOD 4 OF " + "; ".join(arms) + tail + " END"]

    def program(self) -> str:
        body = ["READLN(a)", "READLN(b)", "c := (a + b) MOD 7", "p := a > b", "q := FALSE"]
        body += self.block(0)
        return ("PROGRAM Gen;\nVAR a, b, c, " + ", ".join(COUNTERS) + " : INTEGER;\n    p, q : BOOLEAN;\n"
                "BEGIN\n  " + ";\n  ".join(body) + "\nEND.\n")

    def input_text(self) -> str:
        return f"{self.rng.randint(-20, 20)}\n{self.rng.randint(-20, 20)}\n"


def random_program(seed: int) -> tuple[str, str]:
    gen = ProgramGenerator(seed)
    return gen.program(), gen.input_text()


def triad_mode(pitches) -> str | None:
    """Independent pitch-class oracle: 'major', 'minor' or None for a 3-note set."""
    pcs = {p % 12 for p in pitches}
    for root in range(12):
        if pcs == {root, (root + 4) % 12, (root + 7) % 12}:
            return "major"
        if pcs == {root, (root + 3) % 12, (root + 7) % 12}:
            return "minor"
    return None
