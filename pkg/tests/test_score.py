from __future__ import annotations

from fractions import Fraction

import pytest
from helpers import CASE_PROGRAM, FOR_PROGRAM, triad_mode

from caitlin.interp import RunOptions, run
from caitlin.lang import parse_source
from caitlin.schema import builtin_schema, default_schema, parse_schema
from caitlin.score import (
    NOTE,
    PERCUSSION,
    PROGRAM,
    TEMPO,
    ScoreError,
    ScoreEvent,
    auralize,
    canonical_text,
    score_digest,
)


def render(source, input_text="", schema=None, **options):
    _, trace = run(parse_source(source), input_text, RunOptions(**options))
    return auralize(trace, schema or default_schema())


def test_six_step_loop_layout():
    score = render(FOR_PROGRAM)
    hits = score.of(PERCUSSION)
    assert [(h.tag, h.start) for h in hits] == [
        ("iterationPrefix", 0), ("finalIteration", 14), ("iterationSuffix", 20),
    ]
    ticks = score.of(NOTE, "tick")
    assert [t.start for t in ticks] == list(range(9, 15))
    assert [t.pitch for t in ticks] == sorted(t.pitch for t in ticks)
    entry = [e for e in score.events if e.tag.startswith("entry")]
    exit_ = [e for e in score.events if e.tag.startswith("exit")]
    assert len(entry) == 6 and entry[0].start == 4
    assert len(exit_) == 8 and exit_[0].start == 16
    assert score.end == 24


def test_case_no_match_layout():
    score = render(CASE_PROGRAM, "5\n")
    assert [h.start for h in score.of(PERCUSSION, "caseTest")] == [9, 11, 13]
    chords = score.chords()
    assert [(start, triad_mode(p)) for start, _, _, p in chords] == [(15, "minor")]
    assert {e.tag.split("@")[0] for e in score.events if e.tag.startswith("exit")} == {"exit:minor"}


def test_case_match_layout():
    score = render(CASE_PROGRAM, "0\n")
    chords = score.chords()
    assert [(start, triad_mode(p)) for start, _, _, p in chords] == [(13, "major")]
    assert chords[0][0] == score.of(PERCUSSION, "caseTest")[-1].start
    ((start, _, label, pitches),) = score.motifs("exit")
    assert start == 16 and label == "exit:major"


def test_program_changes_follow_construct_kind():
    source = "PROGRAM t; VAR i : INTEGER; BEGIN FOR i := 1 TO 2 DO ; i := 0; WHILE i < 1 DO i := i + 1 END."
    score = render(source)
    changes = [(e.start, e.tag, e.program) for e in score.of(PROGRAM)]
    schema = default_schema()
    assert changes[0] == (0, "FOR_TO", schema.timbre["FOR_TO"])
    assert [tag for _, tag, _ in changes] == ["FOR_TO", "WHILE"]
    assert score.of(TEMPO)[0].bpm == 120


def test_long_loops_elide():
    source = "PROGRAM t; VAR i : INTEGER; BEGIN FOR i := 1 TO 200 DO ; END."
    score = render(source)
    assert len(score.of(NOTE, "tick")) == 64
    assert len(score.of(PERCUSSION, "elision")) == 1
    short = render(source, schema=parse_schema("general.iterationCap = 4\n"))
    assert len(short.of(NOTE, "tick")) == 4
    assert score_digest(short) != score_digest(score)


def test_subexpr_chords_on_their_own_channel():
    source = "PROGRAM t; VAR a, b : BOOLEAN; BEGIN a := TRUE; b := FALSE; IF a AND b THEN ; END."
    score = render(source, subexpr_tracing=True)
    chords = score.chords()
    assert [(ch, tag.split(":")[1], triad_mode(p)) for _, ch, tag, p in chords] == [
        (2, "subexpr", "major"), (2, "subexpr", "minor"), (1, "condition", "minor"),
    ]


def test_identical_traces_identical_digests():
    assert score_digest(render(FOR_PROGRAM)) == score_digest(render(FOR_PROGRAM))


BRANCH = """\
PROGRAM t;
VAR x, y : INTEGER;
BEGIN
  READLN(x);
  READLN(y);
  IF x > 10 THEN
    WRITELN(y)
END.
"""


def test_branch_irrelevant_input_keeps_digest():
    assert score_digest(render(BRANCH, "20 1")) == score_digest(render(BRANCH, "20 999"))


def test_flipped_branch_changes_digest():
    assert score_digest(render(BRANCH, "20 1")) != score_digest(render(BRANCH, "5 1"))


def test_schema_changes_presentation_not_structure():
    classic, jazz = render(CASE_PROGRAM, "0\n"), render(CASE_PROGRAM, "0\n", builtin_schema("jazz"))
    assert [(e.kind, e.tag.split("@")[0]) for e in classic.events] == [(e.kind, e.tag.split("@")[0])
                                                                       for e in jazz.events]
    assert canonical_text(classic) != canonical_text(jazz)


def test_percussion_only_on_channel_nine():
    with pytest.raises(ScoreError):
        ScoreEvent(PERCUSSION, 0, Fraction(0), Fraction(1), 56, 100)
    with pytest.raises(ScoreError):
        ScoreEvent(NOTE, 9, Fraction(0), Fraction(1), 60, 100)
