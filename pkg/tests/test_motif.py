from __future__ import annotations

import random
from fractions import Fraction

import pytest
from helpers import triad_mode

from caitlin.motif import (
    INVERSIONS,
    MAJOR,
    MINOR,
    MotifError,
    MotifNote,
    MotifSpec,
    Scale,
    build_triad,
    flatten_mediant,
    pitch_to_frequency,
    quantize_to_scale,
    realize_motif,
)
from caitlin.schema import builtin_schema, default_schema

ONE = Fraction(1)
TONIC_TRIAD = MotifSpec("selection", "IF", tuple(MotifNote(d, 0, ONE) for d in (1, 3, 5)))


def test_realize_tonic_triad_both_modes():
    c_major = Scale("major", 0)
    assert [n.pitch for n in realize_motif(TONIC_TRIAD, c_major, MAJOR, 60)] == [60, 64, 67]
    assert [n.pitch for n in realize_motif(TONIC_TRIAD, c_major, MINOR, 60)] == [60, 63, 67]


def test_realize_timing_and_rests():
    spec = MotifSpec("selection", "IF", (MotifNote(1, 0, Fraction(1, 2)), MotifNote(1, 0, ONE, rest=True),
                                          MotifNote(2, 1, ONE)))
    notes = realize_motif(spec, Scale("major", 0), MAJOR, 60, start=Fraction(8))
    assert [(n.pitch, n.start) for n in notes] == [(60, 8), (74, Fraction(19, 2))]


@pytest.mark.parametrize("name", ["classic", "jazz", "chorale", "blues"])
def test_every_shipped_motif_stays_in_scale(name):
    schema = builtin_schema(name)
    for kind, pair in schema.motifs.items():
        for spec in pair:
            for mode in (MAJOR, MINOR):
                # minor always means natural minor on the same tonic
                scale = Scale("naturalMinor", schema.tonic) if mode == MINOR else schema.scale_for(kind)
                for note in realize_motif(spec, schema.scale_for(kind), mode, schema.register):
                    assert scale.contains(note.pitch), (kind, mode, note)


@pytest.mark.parametrize("tonic, quality, inversion, expected", [
    (0, MAJOR, "first", {64, 67, 72}),
    (0, MINOR, "first", {63, 67, 72}),
    (9, MINOR, "root", {57, 60, 64}),
])
def test_build_triad_examples(tonic, quality, inversion, expected):
    register = 57 if tonic == 9 else 60
    assert build_triad(tonic, quality, inversion, register) == frozenset(expected)


def test_flatten_mediant_examples():
    assert flatten_mediant({64, 67, 72}) == {63, 67, 72}
    assert flatten_mediant({60, 64, 67}) == {60, 63, 67}
    with pytest.raises(MotifError):
        flatten_mediant({60, 63, 67})


def _oracle_triad(tonic, quality, inversion, register):
    """Brute force over every candidate bass: the lowest major voicing at or above
    register with the requested inversion, mediant lowered for minor."""
    pcs = [tonic % 12, (tonic + 4) % 12, (tonic + 7) % 12]
    order = pcs[INVERSIONS.index(inversion):] + pcs[: INVERSIONS.index(inversion)]
    for bass in range(register, register + 12):
        if bass % 12 != order[0]:
            continue
        voicing, last = [bass], bass
        for pc in order[1:]:
            last = next(p for p in range(last + 1, last + 13) if p % 12 == pc)
            voicing.append(last)
        if quality == MINOR:
            voicing = [p - 1 if p % 12 == pcs[1] else p for p in voicing]
        return frozenset(voicing)


def test_flatten_mediant_all_tonics_and_inversions():
    for tonic in range(12):
        for inversion in INVERSIONS:
            major = build_triad(tonic, MAJOR, inversion, 60)
            assert major == _oracle_triad(tonic, MAJOR, inversion, 60)
            assert flatten_mediant(major) == build_triad(tonic, MINOR, inversion, 60) == \
                _oracle_triad(tonic, MINOR, inversion, 60)
            assert triad_mode(flatten_mediant(major)) == MINOR


def test_frequencies():
    assert pitch_to_frequency(69) == 440.0
    assert pitch_to_frequency(64) == pytest.approx(329.63, abs=0.05)
    assert pitch_to_frequency(63) == pytest.approx(311.13, abs=0.05)
    shift = 1 - pitch_to_frequency(63) / pitch_to_frequency(64)
    assert shift == pytest.approx(0.056, abs=0.005)


def test_quantize_bounds():
    scale = Scale("major", 0)
    assert quantize_to_scale(1, 1, 10, scale, 60) == 60
    assert quantize_to_scale(10, 1, 10, scale, 60) == 84


@pytest.mark.parametrize("scale_name", ["major", "naturalMinor", "tenNoteBlues"])
def test_quantize_against_brute_force(scale_name):
    rng = random.Random(7)
    for _ in range(200):
        scale = Scale(scale_name, rng.randrange(12))
        register = rng.randrange(36, 72)
        lo = rng.randrange(-20, 20)
        hi = lo + rng.randrange(1, 40)
        members = [p for p in range(register, register + 25) if (p - scale.tonic) % 12 in scale.steps]
        results = [quantize_to_scale(v, lo, hi, scale, register) for v in range(lo, hi + 1)]
        assert all(r in members for r in results)
        assert results == sorted(results)
        assert results[0] == members[0] and results[-1] == members[-1]


def test_quantize_rejects_bad_ranges():
    with pytest.raises(MotifError):
        quantize_to_scale(0, 3, 3, Scale("major", 0))
    with pytest.raises(MotifError):
        quantize_to_scale(9, 1, 5, Scale("major", 0))


def test_default_motifs_follow_family_signature():
    schema = default_schema()
    signatures = {}
    for kind, (entry, exit_) in schema.motifs.items():
        signatures.setdefault(entry.family, set()).update({entry.signature(), exit_.signature()})
    assert len(signatures["iteration"]) == 1 and len(signatures["selection"]) == 1
    assert signatures["iteration"] != signatures["selection"]
