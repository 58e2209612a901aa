"""Scales, motifs and triads.

Motifs are written as scale degrees rather than pitches, so one motif can be
heard in major (true) or natural minor (false) without being rewritten.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

MAJOR = "major"
MINOR = "minor"
SCALE_STEPS = {
    "major": (0, 2, 4, 5, 7, 9, 11),
    "naturalMinor": (0, 2, 3, 5, 7, 8, 10),
    # major scale plus the blue notes b3, b5 and b7
    "tenNoteBlues": (0, 2, 3, 4, 5, 6, 7, 9, 10, 11),
}
INVERSIONS = ("root", "first", "second")
TRIAD_THIRD = {MAJOR: 4, MINOR: 3}
ITERATION = "iteration"
SELECTION = "selection"
SIGNATURE_LENGTH = 3


class MotifError(ValueError):
    pass


@dataclass(frozen=True)
class Scale:
    name: str
    tonic: int = 0

    def __post_init__(self):
        if self.name not in SCALE_STEPS:
            raise MotifError(f"unknown scale {self.name!r}")
        if not 0 <= self.tonic <= 11:
            raise MotifError(f"tonic must be a pitch class 0-11, got {self.tonic}")

    @property
    def steps(self) -> tuple[int, ...]:
        return SCALE_STEPS[self.name]

    @property
    def pitch_classes(self) -> frozenset[int]:
        return frozenset((self.tonic + s) % 12 for s in self.steps)

    def __len__(self) -> int:
        return len(self.steps)

    def contains(self, pitch: int) -> bool:
        return pitch % 12 in self.pitch_classes


@dataclass(frozen=True)
class MotifNote:
    degree: int
    octave: int = 0
    duration: Fraction = Fraction(1)
    rest: bool = False

    def __post_init__(self):
        object.__setattr__(self, "duration", Fraction(self.duration))
        if self.duration <= 0:
            raise MotifError("note duration must be positive")
        if self.degree < 1:
            raise MotifError("scale degrees are 1-based")


@dataclass(frozen=True)
class MotifSpec:
    family: str
    kind: str
    notes: tuple[MotifNote, ...]

    def __post_init__(self):
        object.__setattr__(self, "notes", tuple(self.notes))
        if self.family not in (ITERATION, SELECTION):
            raise MotifError(f"unknown motif family {self.family!r}")
        if not self.notes:
            raise MotifError("motif has no notes")

    @property
    def length(self) -> Fraction:
        return sum((n.duration for n in self.notes), Fraction(0))

    def signature(self) -> tuple[tuple[int, Fraction], ...]:
        return tuple((n.degree, n.duration) for n in self.notes[:SIGNATURE_LENGTH])


@dataclass(frozen=True)
class Note:
    pitch: int
    start: Fraction
    duration: Fraction
    velocity: int = 96

    def __post_init__(self):
        if not 0 <= self.pitch <= 127:
            raise MotifError(f"pitch {self.pitch} outside MIDI range")
        if not 1 <= self.velocity <= 127:
            raise MotifError(f"velocity {self.velocity} outside 1-127")
        if self.duration <= 0:
            raise MotifError("note duration must be positive")


def tonic_at_or_above(register: int, tonic: int) -> int:
    return register + (tonic - register) % 12


def realize_motif(spec: MotifSpec, scale: Scale, mode: str = MAJOR, register: int = 60,
                  start: Fraction | int = 0, velocity: int = 96) -> list[Note]:
    """Map a motif's degrees to MIDI notes, laid end to end from ``start``.

    Minor mode swaps the scale for the natural minor on the same tonic. The
    lowest tonic at or above ``register`` is degree 1 in octave 0.
    """
    if mode == MINOR:
        scale = Scale("naturalMinor", scale.tonic)
    elif mode != MAJOR:
        raise MotifError(f"unknown mode {mode!r}")
    base = tonic_at_or_above(register, scale.tonic)
    t = Fraction(start)
    notes = []
    for n in spec.notes:
        if n.degree > len(scale):
            raise MotifError(f"degree {n.degree} out of range for {scale.name} ({len(scale)} notes)")
        if not n.rest:
            pitch = base + scale.steps[n.degree - 1] + 12 * n.octave
            notes.append(Note(pitch, t, n.duration, velocity))
        t += n.duration
    return notes


def build_triad(tonic: int, quality: str, inversion: str = "root", register: int = 60) -> frozenset[int]:
    """Close-position triad placed by its major voicing.

    The major triad's bass is the lowest suitable pitch at or above ``register``;
    a minor triad is that voicing with the mediant a semitone lower, so a
    first-inversion minor bass can sit one semitone under ``register``.
    """
    if quality not in TRIAD_THIRD:
        raise MotifError(f"unknown triad quality {quality!r}")
    if inversion not in INVERSIONS:
        raise MotifError(f"unknown inversion {inversion!r}")
    major = TRIAD_THIRD[MAJOR]
    stack = {"root": (0, major, 7), "first": (major, 7, 12), "second": (7, 12, 12 + major)}[inversion]
    bass = tonic_at_or_above(register, (tonic + stack[0]) % 12)
    pitches = [bass + iv - stack[0] for iv in stack]
    if quality == MINOR:
        pitches = [p - 1 if (p - tonic) % 12 == major else p for p in pitches]
    if not all(0 <= p <= 127 for p in pitches):
        raise MotifError("triad falls outside MIDI range")
    return frozenset(pitches)


def triad_root(pitches) -> tuple[int, str] | None:
    """(root pitch class, quality) of a major or minor triad, or None."""
    pcs = {p % 12 for p in pitches}
    if len(pcs) != 3:
        return None
    for root in pcs:
        for quality, third in TRIAD_THIRD.items():
            if pcs == {root, (root + third) % 12, (root + 7) % 12}:
                return root, quality
    return None


def triad_quality(pitches) -> str | None:
    found = triad_root(pitches)
    return found[1] if found else None


def flatten_mediant(triad) -> frozenset[int]:
    """Lower the third of a major triad by a semitone, keeping its voicing."""
    pitches = sorted(triad)
    found = triad_root(pitches)
    if len(pitches) != 3 or found is None or found[1] != MAJOR:
        raise MotifError(f"{pitches} is not a major triad")
    mediant = (found[0] + 4) % 12
    return frozenset(p - 1 if p % 12 == mediant else p for p in pitches)


def pitch_to_frequency(pitch: float) -> float:
    """Equal-tempered frequency in Hz with A4 (key 69) at 440 Hz."""
    return 440.0 * 2.0 ** ((pitch - 69) / 12)


def scale_members(scale: Scale, lo: int, hi: int) -> list[int]:
    return [p for p in range(lo, hi + 1) if scale.contains(p)]


def quantize_to_scale(value: int, lo: int, hi: int, scale: Scale, register: int = 60) -> int:
    """Map ``value`` in [lo, hi] onto the scale members of the two octaves above ``register``.

    The map is affine in member index and rounds half up, so it is monotone and
    hits the lowest and highest member at the bounds.
    """
    if not lo < hi:
        raise MotifError(f"empty range [{lo}, {hi}]")
    if not lo <= value <= hi:
        raise MotifError(f"value {value} outside [{lo}, {hi}]")
    members = scale_members(scale, register, register + 24)
    position = Fraction(value - lo, hi - lo) * (len(members) - 1)
    return members[int(position + Fraction(1, 2))]
