from __future__ import annotations

import math
import random
from collections import Counter
from fractions import Fraction

import pytest
from helpers import CORPUS, FOR_PROGRAM

from caitlin import midi
from caitlin.corpus import load_case
from caitlin.interp import run
from caitlin.lang import parse_source
from caitlin.schema import default_schema
from caitlin.score import NOTE, PERCUSSION, PROGRAM, TEMPO, Score, ScoreEvent, auralize


def test_varlen_examples():
    assert midi.encode_varlen(0) == b"\x00"
    assert midi.encode_varlen(0x80) == b"\x81\x00"
    assert midi.encode_varlen(0x0FFFFFFF) == b"\xff\xff\xff\x7f"
    with pytest.raises(midi.MidiError):
        midi.encode_varlen(0x10000000)


def test_varlen_exhaustive_round_trip():
    for value in range(2**16 + 1):
        data = midi.encode_varlen(value)
        assert midi.decode_varlen(data + b"\x00") == (value, len(data))


def test_varlen_truncated():
    with pytest.raises(midi.TruncatedFile):
        midi.decode_varlen(b"\x81")


def _tempo_only(bpm=120):
    return Score((ScoreEvent(TEMPO, 0, Fraction(0), bpm=bpm),))


def test_empty_score_bytes():
    data = midi.encode_smf(_tempo_only())
    assert data == (b"MThd\x00\x00\x00\x06\x00\x01\x00\x01\x01\xe0"
                    b"MTrk\x00\x00\x00\x0b\x00\xff\x51\x03\x07\xa1\x20\x00\xff\x2f\x00")
    assert midi.decode_smf(data) == [midi.MidiEvent(0, midi.SET_TEMPO, tempo=500000)]


def test_middle_c_quarter():
    score = Score((ScoreEvent(TEMPO, 0, Fraction(0), bpm=120),
                   ScoreEvent(NOTE, 0, Fraction(0), Fraction(1), 60, 96)))
    events = [e for e in midi.decode_smf(midi.encode_smf(score)) if e.kind != midi.SET_TEMPO]
    assert [(e.tick, e.kind, e.key) for e in events] == [(0, midi.NOTE_ON, 60), (480, midi.NOTE_OFF, 60)]


def test_bad_header_and_truncation():
    data = midi.encode_smf(_tempo_only())
    with pytest.raises(midi.MalformedChunk):
        midi.decode_smf(b"MThx" + data[4:])
    with pytest.raises(midi.TruncatedFile):
        midi.decode_smf(data[:-3])


def test_decoder_handles_running_status_and_zero_velocity_off():
    body = (b"\x00\x90\x3c\x40"      # note on
            b"\x60\x3e\x40"          # running status: another note on
            b"\x60\x3c\x00"          # running status, velocity 0: note off
            b"\x00\x80\x3e\x00"
            b"\x00\xff\x2f\x00")
    data = b"MThd\x00\x00\x00\x06\x00\x00\x00\x01\x00\x60" + b"MTrk" + len(body).to_bytes(4, "big") + body
    got = [(e.tick, e.kind, e.key) for e in midi.decode_smf(data)]
    assert got == [(0, "note_on", 60), (96, "note_on", 62), (192, "note_off", 60), (192, "note_off", 62)]


def _ticks(beats, ppq):
    return math.floor(beats * ppq + Fraction(1, 2))


def expected_multiset(score: Score) -> Counter:
    """Independent beat-to-tick conversion of a score's timed events."""
    out = Counter()
    for e in score.events:
        if e.kind == TEMPO:
            out[(_ticks(e.start, score.ppq), "tempo", None, round(60_000_000 / e.bpm))] += 1
        elif e.kind == PROGRAM:
            out[(_ticks(e.start, score.ppq), "program", e.channel, e.program)] += 1
        else:
            on = _ticks(e.start, score.ppq)
            off = max(on + 1, _ticks(e.start + e.duration, score.ppq))
            out[(on, "on", e.channel, e.pitch)] += 1
            out[(off, "off", e.channel, e.pitch)] += 1
    return out


def decoded_multiset(data: bytes) -> Counter:
    out = Counter()
    for e in midi.decode_smf(data):
        if e.kind == midi.SET_TEMPO:
            out[(e.tick, "tempo", None, e.tempo)] += 1
        elif e.kind == midi.PROGRAM_CHANGE:
            out[(e.tick, "program", e.channel, e.program)] += 1
        else:
            out[(e.tick, "on" if e.kind == midi.NOTE_ON else "off", e.channel, e.key)] += 1
    return out


def random_score(rng: random.Random) -> Score:
    ppq = rng.choice([96, 120, 480, 960])
    events = [ScoreEvent(TEMPO, 0, Fraction(0), bpm=rng.randint(20, 300))]
    for _ in range(rng.randint(0, 40)):
        start = Fraction(rng.randint(0, 400), rng.choice([1, 2, 3, 4, 7, 8]))
        duration = Fraction(rng.randint(1, 16), rng.choice([1, 2, 4, 5, 16]))
        roll = rng.random()
        if roll < 0.1:
            events.append(ScoreEvent(PROGRAM, rng.choice([0, 1, 2]), start, program=rng.randint(0, 127)))
        elif roll < 0.3:
            events.append(ScoreEvent(PERCUSSION, 9, start, duration, rng.randint(27, 87), 112))
        else:
            events.append(ScoreEvent(NOTE, rng.choice([0, 1, 2]), start, duration, rng.randint(0, 127),
                                     rng.randint(1, 127)))
    events.sort(key=ScoreEvent.sort_key)
    return Score(tuple(events), ppq)


def test_random_scores_round_trip():
    rng = random.Random(2024)
    for _ in range(1000):
        score = random_score(rng)
        data = midi.encode_smf(score)
        assert decoded_multiset(data) == expected_multiset(score)
        fmt, ntracks, division = midi.read_header(data)
        assert (fmt, division) == (1, score.ppq)
        assert ntracks == 1 + len({e.channel for e in score.events if e.kind != TEMPO})


def test_six_step_loop_file_structure():
    _, trace = run(parse_source(FOR_PROGRAM))
    data = midi.encode_smf(auralize(trace, default_schema()))
    events = midi.decode_smf(data)
    perc_on = [e for e in events if e.kind == midi.NOTE_ON and e.channel == 9]
    assert [e.key for e in perc_on] == [81, 83, 80]
    ticks = [e for e in events if e.kind == midi.NOTE_ON and e.channel == 0]
    assert len(ticks) == 6 + 6 + 8
    assert perc_on[1].tick == ticks[6 + 5].tick  # final hit lines up with iteration 6


@pytest.mark.parametrize("case", sorted(p.name for p in CORPUS.iterdir() if p.is_dir()))
def test_corpus_scores_round_trip(case):
    loaded = load_case(CORPUS / case)
    for name, text in loaded.inputs:
        _, trace = run(parse_source(loaded.bug), text)
        score = auralize(trace, default_schema())
        assert decoded_multiset(midi.encode_smf(score)) == expected_multiset(score)
