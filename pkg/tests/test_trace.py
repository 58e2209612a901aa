from __future__ import annotations

import pytest
from helpers import FOR_PROGRAM, random_program
from hypothesis import given, settings
from hypothesis import strategies as st

from caitlin import trace as tr
from caitlin.interp import RunOptions, run
from caitlin.lang import parse_source

HEADER = "CAITLIN-TRACE v1 program=t digest=ab12\n"


@st.composite
def traces(draw):
    """Well-nested random traces with payloads each construct kind may carry."""
    events = []
    next_cid = [0]

    def construct(depth):
        cid, kind = next_cid[0], draw(st.sampled_from(tr.CONSTRUCT_KINDS))
        next_cid[0] += 1
        events.append((cid, kind, tr.ENTER, {}))
        allowed = [ev for ev, kinds in tr.EMITTERS.items() if kind in kinds]
        for _ in range(draw(st.integers(0, 4))):
            if depth < 3 and draw(st.booleans()):
                construct(depth + 1)
                continue
            ev = draw(st.sampled_from(allowed))
            payload = {}
            for name in tr.REQUIRED_PAYLOAD[ev]:
                payload[name] = draw(st.booleans() if name in ("out", "final") else st.integers(0, 500))
            events.append((cid, kind, ev, payload))
        events.append((cid, kind, tr.EXIT, {}))

    for _ in range(draw(st.integers(0, 3))):
        construct(0)
    seqs = sorted(draw(st.sets(st.integers(0, 10_000), min_size=len(events), max_size=len(events))))
    name = draw(st.from_regex(r"[A-Za-z][A-Za-z0-9_]{0,8}", fullmatch=True))
    digest = draw(st.from_regex(r"[0-9a-f]{0,64}", fullmatch=True))
    return tr.Trace(name, digest, tuple(tr.TraceEvent(s, c, k, e, **p) for s, (c, k, e, p) in zip(seqs, events)))


@settings(max_examples=300, deadline=None)
@given(traces())
def test_round_trip_random_traces(trace):
    text = tr.serialize_trace(trace)
    assert tr.parse_trace(text) == trace
    assert tr.serialize_trace(tr.parse_trace(text)) == text


def test_round_trip_interpreter_traces():
    for seed in range(50):
        source, input_text = random_program(seed)
        _, trace = run(parse_source(source), input_text, RunOptions(subexpr_tracing=True))
        assert tr.parse_trace(tr.serialize_trace(trace)) == trace


def test_empty_program_is_header_only():
    _, trace = run(parse_source("PROGRAM empty; BEGIN END."))
    assert tr.serialize_trace(trace) == f"CAITLIN-TRACE v1 program=empty digest={trace.digest}\n"
    assert tr.parse_trace(tr.serialize_trace(trace)).events == ()


def test_six_step_loop_records():
    _, trace = run(parse_source(FOR_PROGRAM))
    assert [e.ev for e in trace.events] == [tr.ENTER] + [tr.TICK] * 6 + [tr.EXIT]
    assert {e.cid for e in trace.events} == {0}
    lines = tr.serialize_trace(trace).splitlines()
    assert lines[1] == "seq=0 cid=0 kind=FOR_TO ev=ConstructEnter"
    assert lines[-2] == "seq=6 cid=0 kind=FOR_TO ev=IterationTick iter=6 final=T"


def test_exit_before_enter_is_nesting_error():
    with pytest.raises(tr.NestingError) as info:
        tr.parse_trace(HEADER + "seq=0 cid=0 kind=IF ev=ConstructExit\n")
    assert info.value.line == 2


@pytest.mark.parametrize("body, fragment", [
    ("seq=0 cid=0 kind=IF ev=ConstructEnter\n", "never exits"),
    ("seq=0 cid=0 kind=IF ev=ConstructEnter\nseq=0 cid=0 kind=IF ev=ConstructExit\n", "not increasing"),
    ("seq=0 cid=0 kind=IF ev=ConditionOutcome out=T\n", "outside"),
    ("seq=0 cid=0 kind=IF ev=ConstructEnter\nseq=1 cid=0 kind=IF ev=IterationTick iter=1 final=F\n", "cannot emit"),
    ("seq=0 cid=0 kind=FOR_TO ev=ConstructEnter\nseq=1 cid=0 kind=FOR_TO ev=IterationTick final=F iter=1\n",
     "order"),
    ("seq=0 cid=0 kind=WHILE ev=ConstructEnter\nseq=1 cid=0 kind=WHILE ev=ConditionOutcome out=yes\n", "T or F"),
    ("seq=0 cid=0 kind=LOOP ev=ConstructEnter\n", "unknown construct"),
])
def test_malformed_records_rejected(body, fragment):
    with pytest.raises(tr.TraceFormatError) as info:
        tr.parse_trace(HEADER + body)
    assert fragment in str(info.value)


def test_header_and_newline_required():
    with pytest.raises(tr.TraceFormatError):
        tr.parse_trace("CAITLIN-TRACE v2 program=t digest=\n")
    with pytest.raises(tr.TraceFormatError):
        tr.parse_trace(HEADER.rstrip("\n"))
