"""Lay a trace out on a single beat timeline under a schema.

Per construct the score reads: a bar of point-of-interest percussion, the entry
motif, one fragment per trace event, then (from the next barline) the exit
motif. Selections exit in the true mode when a branch or arm matched and in the
false mode otherwise; decision points sound a triad in the mode of their outcome.
Nested constructs are laid inside their parent's span, pushing its exit later.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import trace as tr
from .motif import MAJOR, Scale, build_triad, quantize_to_scale, realize_motif, scale_members
from .schema import SUBEXPR_TIMBRE, AuralizationSchema, family_of

TEMPO = "tempo"
PROGRAM = "program"
PERCUSSION = "percussion"
NOTE = "note"
KIND_ORDER = {TEMPO: 0, PROGRAM: 1, PERCUSSION: 2, NOTE: 3}

ITERATION_CHANNEL = 0
SELECTION_CHANNEL = 1
SUBEXPR_CHANNEL = 2
PERCUSSION_CHANNEL = 9
TRACK_PLAN = {"iteration": ITERATION_CHANNEL, "selection": SELECTION_CHANNEL, "subexpr": SUBEXPR_CHANNEL,
              "percussion": PERCUSSION_CHANNEL}

NOTE_VELOCITY = 96
PERCUSSION_VELOCITY = 112
BEATS_PER_BAR = 4
DEFAULT_PPQ = 480


class ScoreError(ValueError):
    pass


@dataclass(frozen=True)
class ScoreEvent:
    kind: str
    channel: int
    start: Fraction
    duration: Fraction = Fraction(0)
    pitch: int | None = None
    velocity: int | None = None
    program: int | None = None
    bpm: int | None = None
    tag: str = ""

    def __post_init__(self):
        if self.start < 0 or self.duration < 0:
            raise ScoreError("beats must be non-negative")
        if (self.kind == PERCUSSION) != (self.channel == PERCUSSION_CHANNEL) and self.kind in (NOTE, PERCUSSION):
            raise ScoreError("percussion belongs on channel 9 and only there")

    def sort_key(self):
        return (self.start, self.channel, KIND_ORDER[self.kind], self.pitch or 0, self.duration, self.tag)


@dataclass(frozen=True)
class Score:
    events: tuple[ScoreEvent, ...]
    ppq: int = DEFAULT_PPQ
    track_plan: dict[str, int] = field(default_factory=lambda: dict(TRACK_PLAN))

    @property
    def bpm(self) -> int:
        return next(e.bpm for e in self.events if e.kind == TEMPO)

    def of(self, kind: str, tag: str | None = None) -> list[ScoreEvent]:
        return [e for e in self.events if e.kind == kind and (tag is None or e.tag == tag)]

    def motifs(self, tag: str) -> list[tuple[Fraction, int, str, tuple[int, ...]]]:
        """(start, channel, mode tag, pitches) for every realized ``tag`` motif ("entry" or "exit")."""
        groups: dict[tuple, list[int]] = {}
        for e in self.events:
            if e.kind == NOTE and e.tag.split(":")[0] == tag:
                label, _, start = e.tag.partition("@")
                groups.setdefault((Fraction(start), e.channel, label), []).append(e.pitch)
        return [(start, ch, label, tuple(p)) for (start, ch, label), p in sorted(groups.items())]

    def chords(self) -> list[tuple[Fraction, int, str, frozenset[int]]]:
        """(start, channel, tag, pitches) for every group of simultaneous tagged chord tones."""
        groups: dict[tuple, set[int]] = {}
        for e in self.events:
            if e.kind == NOTE and e.tag.startswith("chord"):
                groups.setdefault((e.start, e.channel, e.tag), set()).add(e.pitch)
        return [(start, ch, tag, frozenset(p)) for (start, ch, tag), p in sorted(groups.items())]

    @property
    def end(self) -> Fraction:
        return max((e.start + e.duration for e in self.events), default=Fraction(0))


def canonical_text(score: Score) -> str:
    lines = [f"ppq={score.ppq}"]
    for e in score.events:
        lines.append(" ".join(str(v) for v in (e.kind, e.channel, e.start, e.duration, e.pitch, e.velocity,
                                                e.program, e.bpm, e.tag)))
    return "\n".join(lines) + "\n"


def score_digest(score: Score) -> str:
    return hashlib.sha256(canonical_text(score).encode("utf-8")).hexdigest()


@dataclass
class _Frame:
    kind: str
    cid: int
    ticks: int
    matched: bool = False
    elided: bool = False


def _tick_counts(events) -> dict[int, int]:
    """Number of IterationTicks owned by each ConstructEnter, keyed by the enter's position."""
    counts: dict[int, int] = {}
    stack: list[int] = []
    for i, e in enumerate(events):
        if e.ev == tr.ENTER:
            stack.append(i)
            counts[i] = 0
        elif e.ev == tr.EXIT:
            stack.pop()
        elif e.ev == tr.TICK:
            counts[stack[-1]] += 1
    return counts


class _Layout:
    def __init__(self, schema: AuralizationSchema):
        self.schema = schema
        self.d = schema.durations
        self.cursor = Fraction(0)
        self.events: list[ScoreEvent] = []
        self.channel_kind: dict[int, str] = {}
        self.first_kind: dict[int, str] = {}

    def voice(self, channel: int, kind: str, at: Fraction) -> None:
        """Switch ``channel`` to ``kind``'s timbre if it is not already sounding it."""
        if channel not in self.first_kind:
            self.first_kind[channel] = kind
        elif self.channel_kind[channel] != kind:
            self.events.append(ScoreEvent(PROGRAM, channel, at, program=self.timbre(kind), tag=kind))
        self.channel_kind[channel] = kind

    def timbre(self, kind: str) -> int:
        try:
            return self.schema.timbre[kind]
        except KeyError:
            raise ScoreError(f"schema has no timbre for {kind}") from None

    def hit(self, point: str, at: Fraction | None = None) -> None:
        try:
            key = self.schema.percussion_key(point)
        except KeyError:
            raise ScoreError(f"schema has no percussion key for {point}") from None
        self.events.append(ScoreEvent(PERCUSSION, PERCUSSION_CHANNEL, self.cursor if at is None else at,
                                      self.d["hit"], key, PERCUSSION_VELOCITY, tag=point))

    def note(self, channel: int, pitch: int, start: Fraction, duration: Fraction, tag: str) -> None:
        self.events.append(ScoreEvent(NOTE, channel, start, duration, pitch, NOTE_VELOCITY, tag=tag))

    def chord(self, channel: int, kind: str, mode: str, register: int, duration: Fraction, tag: str) -> None:
        self.voice(channel, kind, self.cursor)
        for pitch in sorted(build_triad(self.schema.tonic, mode, "first", register)):
            self.note(channel, pitch, self.cursor, duration, f"chord:{tag}:{mode}")

    def motif(self, kind: str, which: int, mode: str, tag: str) -> Fraction:
        try:
            spec = self.schema.motifs[kind][which]
        except KeyError:
            raise ScoreError(f"schema has no motifs for {kind}") from None
        channel = _channel(kind)
        self.voice(channel, kind, self.cursor)
        label = f"{tag}:{mode}@{self.cursor}"
        for n in realize_motif(spec, self.schema.scale_for(kind), mode, self.schema.register, self.cursor):
            self.note(channel, n.pitch, n.start, n.duration, label)
        return spec.length

    def barline(self) -> None:
        self.cursor = Fraction(math.ceil(self.cursor / BEATS_PER_BAR) * BEATS_PER_BAR)

    def tick(self, frame: _Frame, event: tr.TraceEvent) -> None:
        cap = self.schema.iteration_cap
        if event.iter >= cap and not event.final:
            if not frame.elided:
                self.hit("elision")
                self.cursor += self.d["elision"]
                frame.elided = True
            return
        scale: Scale = self.schema.scale_for(frame.kind)
        register = self.schema.register
        span = len(scale_members(scale, register, register + 24))
        hi = max(frame.ticks, span)
        index = event.iter if frame.kind != "FOR_DOWNTO" else hi + 1 - event.iter
        pitch = quantize_to_scale(index, 1, hi, scale, register)
        channel = _channel(frame.kind)
        self.voice(channel, frame.kind, self.cursor)
        self.note(channel, pitch, self.cursor, self.d["tick"], "tick")
        if event.final:
            self.hit("finalIteration")
        self.cursor += self.d["tick"]


def _channel(kind: str) -> int:
    return ITERATION_CHANNEL if family_of(kind) == "iteration" else SELECTION_CHANNEL


def auralize(trace: tr.Trace, schema: AuralizationSchema, ppq: int = DEFAULT_PPQ) -> Score:
    lay = _Layout(schema)
    d = schema.durations
    chord_register = schema.register - 12
    subexpr_register = schema.register + 12
    counts = _tick_counts(trace.events)
    stack: list[_Frame] = []
    for i, e in enumerate(trace.events):
        iteration = family_of(e.kind) == "iteration"
        channel = _channel(e.kind)
        if e.ev == tr.ENTER:
            stack.append(_Frame(e.kind, e.cid, counts[i]))
            lay.hit("iterationPrefix" if iteration else "selectionPrefix")
            lay.cursor += d["prefix"]
            lay.cursor += lay.motif(e.kind, 0, MAJOR, "entry")
        elif e.ev == tr.EXIT:
            frame = stack.pop()
            lay.barline()
            mode = MAJOR if iteration else schema.mode_for(frame.matched)
            start = lay.cursor
            length = lay.motif(e.kind, 1, mode, "exit")
            if iteration:
                last_bar = (math.ceil(length / BEATS_PER_BAR) - 1) * BEATS_PER_BAR
                lay.hit("iterationSuffix", start + max(0, last_bar))
            lay.cursor += length
        elif e.ev == tr.CONDITION:
            stack[-1].matched = e.out
            lay.chord(channel, e.kind, schema.mode_for(e.out), chord_register, d["chord"], "condition")
            lay.cursor += d["condition"]
        elif e.ev == tr.SUBEXPR:
            lay.chord(SUBEXPR_CHANNEL, SUBEXPR_TIMBRE, schema.mode_for(e.out), subexpr_register, d["subexpr"],
                      "subexpr")
            lay.cursor += d["subexpr"]
        elif e.ev == tr.TICK:
            lay.tick(stack[-1], e)
        elif e.ev == tr.ARM_TEST:
            lay.hit("caseTest")
            if e.out:
                stack[-1].matched = True
                lay.chord(channel, e.kind, schema.mode_for(True), chord_register, d["chord"], "match")
            lay.cursor += d["caseTest"]
        elif e.ev == tr.ELSE_TAKEN:
            lay.chord(channel, e.kind, schema.mode_for(False), chord_register, d["chord"], "else")
            lay.cursor += d["else"]
        else:
            raise ScoreError(f"no rendering for event kind {e.ev}")

    events = [ScoreEvent(TEMPO, 0, Fraction(0), bpm=schema.tempo)]
    for channel, kind in sorted(lay.first_kind.items()):
        events.append(ScoreEvent(PROGRAM, channel, Fraction(0), program=lay.timbre(kind), tag=kind))
    events += lay.events
    events.sort(key=ScoreEvent.sort_key)
    return Score(tuple(events), ppq)
