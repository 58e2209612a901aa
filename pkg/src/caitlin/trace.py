"""Control-flow trace events and their line-oriented file format.

File layout (UTF-8, LF endings)::

    CAITLIN-TRACE v1 program=<name> digest=<hex>
    seq=<n> cid=<n> kind=<ConstructKind> ev=<EventKind> [out=<T|F>] [iter=<n>] [final=<T|F>] [arm=<n>] [expr=<n>]

Optional fields appear exactly when the event kind requires them, always in the
order shown.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

CONSTRUCT_KINDS = ("WHILE", "REPEAT", "FOR_TO", "FOR_DOWNTO", "IF", "IF_ELSE", "CASE", "CASE_ELSE")
ITERATION_KINDS = frozenset({"WHILE", "REPEAT", "FOR_TO", "FOR_DOWNTO"})
SELECTION_KINDS = frozenset({"IF", "IF_ELSE", "CASE", "CASE_ELSE"})

ENTER = "ConstructEnter"
EXIT = "ConstructExit"
CONDITION = "ConditionOutcome"
SUBEXPR = "SubexprOutcome"
TICK = "IterationTick"
ARM_TEST = "CaseArmTest"
ELSE_TAKEN = "ElsePathTaken"
EVENT_KINDS = (ENTER, EXIT, CONDITION, SUBEXPR, TICK, ARM_TEST, ELSE_TAKEN)

PAYLOAD_ORDER = ("out", "iter", "final", "arm", "expr")
REQUIRED_PAYLOAD = {
    ENTER: (),
    EXIT: (),
    CONDITION: ("out",),
    SUBEXPR: ("out", "expr"),
    TICK: ("iter", "final"),
    ARM_TEST: ("out", "arm"),
    ELSE_TAKEN: (),
}
# event kinds other than enter/exit, and the constructs allowed to emit them
EMITTERS = {
    CONDITION: frozenset({"WHILE", "REPEAT", "IF", "IF_ELSE"}),
    SUBEXPR: frozenset({"WHILE", "REPEAT", "IF", "IF_ELSE"}),
    TICK: frozenset({"FOR_TO", "FOR_DOWNTO"}),
    ARM_TEST: frozenset({"CASE", "CASE_ELSE"}),
    ELSE_TAKEN: frozenset({"CASE_ELSE"}),
}
_BOOL_FIELDS = ("out", "final")

HEADER_RE = re.compile(r"CAITLIN-TRACE v1 program=(\S+) digest=([0-9a-f]*)")
FIELD_RE = re.compile(r"([a-z]+)=(\S+)")


class TraceFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class NestingError(TraceFormatError):
    pass


@dataclass(frozen=True)
class TraceEvent:
    seq: int
    cid: int
    kind: str
    ev: str
    out: bool | None = None
    iter: int | None = None
    final: bool | None = None
    arm: int | None = None
    expr: int | None = None

    def __post_init__(self):
        if self.kind not in CONSTRUCT_KINDS:
            raise TraceFormatError(f"unknown construct kind {self.kind!r}")
        if self.ev not in EVENT_KINDS:
            raise TraceFormatError(f"unknown event kind {self.ev!r}")
        required = REQUIRED_PAYLOAD[self.ev]
        for name in PAYLOAD_ORDER:
            present = getattr(self, name) is not None
            if present != (name in required):
                state = "missing" if not present else "unexpected"
                raise TraceFormatError(f"{state} field {name!r} for {self.ev}")
        if self.ev in EMITTERS and self.kind not in EMITTERS[self.ev]:
            raise TraceFormatError(f"{self.kind} cannot emit {self.ev}")
        if self.seq < 0 or self.cid < 0:
            raise TraceFormatError("seq and cid must be non-negative")

    def payload(self) -> dict:
        return {name: getattr(self, name) for name in PAYLOAD_ORDER if getattr(self, name) is not None}


@dataclass(frozen=True)
class Trace:
    program: str
    digest: str
    events: tuple[TraceEvent, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        check_events(self.events)


def check_events(events, lines=None) -> None:
    """Raise unless seq is strictly increasing and enter/exit are well nested."""
    stack: list[tuple[int, str]] = []
    last_seq = -1
    for i, event in enumerate(events):
        where = lines[i] if lines else None
        if event.seq <= last_seq:
            raise TraceFormatError(f"seq {event.seq} not increasing", where)
        last_seq = event.seq
        if event.ev == ENTER:
            stack.append((event.cid, event.kind))
        elif not stack:
            raise NestingError(f"{event.ev} for cid {event.cid} outside any construct", where)
        elif stack[-1] != (event.cid, event.kind):
            raise NestingError(
                f"{event.ev} for cid {event.cid} while cid {stack[-1][0]} is innermost", where
            )
        elif event.ev == EXIT:
            stack.pop()
    if stack:
        raise NestingError(f"construct cid {stack[-1][0]} never exits")


class TraceRecorder:
    """Append-only event sink used by the interpreter."""

    def __init__(self):
        self.events: list[TraceEvent] = []

    def emit(self, cid: int, kind: str, ev: str, **payload) -> None:
        self.events.append(TraceEvent(len(self.events), cid, kind, ev, **payload))

    def trace(self, program: str, digest: str) -> Trace:
        return Trace(program, digest, tuple(self.events))


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "T" if value else "F"
    return str(value)


def serialize_event(event: TraceEvent) -> str:
    parts = [f"seq={event.seq}", f"cid={event.cid}", f"kind={event.kind}", f"ev={event.ev}"]
    parts += [f"{name}={_fmt(value)}" for name, value in event.payload().items()]
    return " ".join(parts)


def serialize_trace(trace: Trace) -> str:
    lines = [f"CAITLIN-TRACE v1 program={trace.program} digest={trace.digest}"]
    lines += [serialize_event(e) for e in trace.events]
    return "\n".join(lines) + "\n"


def _parse_int(text: str, name: str, line: int) -> int:
    if not text.isdigit():
        raise TraceFormatError(f"field {name!r} must be a non-negative integer, got {text!r}", line)
    return int(text)


def _parse_event(text: str, line: int) -> TraceEvent:
    tokens = text.split(" ")
    pairs = []
    for tok in tokens:
        m = FIELD_RE.fullmatch(tok)
        if m is None:
            raise TraceFormatError(f"malformed field {tok!r}", line)
        pairs.append(m.groups())
    names = [name for name, _ in pairs]
    if names[:4] != ["seq", "cid", "kind", "ev"]:
        raise TraceFormatError("record must start with seq, cid, kind, ev", line)
    extra = names[4:]
    if extra != [n for n in PAYLOAD_ORDER if n in extra] or len(set(extra)) != len(extra):
        raise TraceFormatError("payload fields out of order or repeated", line)
    values: dict = {}
    for name, raw in pairs:
        if name in ("kind", "ev"):
            values[name] = raw
        elif name in _BOOL_FIELDS:
            if raw not in ("T", "F"):
                raise TraceFormatError(f"field {name!r} must be T or F, got {raw!r}", line)
            values[name] = raw == "T"
        else:
            values[name] = _parse_int(raw, name, line)
    try:
        return TraceEvent(**values)
    except TraceFormatError as exc:
        raise TraceFormatError(str(exc), line) from None


def parse_trace(text: str) -> Trace:
    if not text.endswith("\n"):
        raise TraceFormatError("missing final newline")
    lines = text[:-1].split("\n")
    m = HEADER_RE.fullmatch(lines[0])
    if m is None:
        raise TraceFormatError("bad header", 1)
    events = []
    for lineno, line in enumerate(lines[1:], start=2):
        events.append(_parse_event(line, lineno))
    check_events(events, list(range(2, len(lines) + 1)))
    return Trace(m.group(1), m.group(2), tuple(events))
