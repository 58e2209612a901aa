"""Auralization schemas: the swappable presentation layer.

A schema file is UTF-8 text, one ``section.key = value`` assignment per line,
``#`` starting a comment. Sections::

    general.name / tempo / tonic / register / iterationCap / trueMode / falseMode / gm1Percussion
    timbre.<CONSTRUCT>       GM program 0-127 (plus timbre.SUBEXPR)
    percussion.<point>       GM percussion key 27-87
    scale.<CONSTRUCT>        major | naturalMinor | tenNoteBlues (loops only)
    motif.<CONSTRUCT>.entry  space-separated degree:octave:duration triples, r:0:d for a rest
    motif.<CONSTRUCT>.exit
    durations.<slot>         beats, integer or fraction such as 1/2

Any field left out of a document keeps its value from the default schema.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from importlib import resources

from .motif import (
    ITERATION,
    MAJOR,
    MINOR,
    SCALE_STEPS,
    SELECTION,
    SIGNATURE_LENGTH,
    MotifNote,
    MotifSpec,
    Scale,
)
from .trace import CONSTRUCT_KINDS, ITERATION_KINDS

SUBEXPR_TIMBRE = "SUBEXPR"
TIMBRE_KEYS = CONSTRUCT_KINDS + (SUBEXPR_TIMBRE,)
POINTS_OF_INTEREST = (
    "iterationPrefix",
    "iterationSuffix",
    "caseTest",
    "finalIteration",
    "selectionPrefix",
    "elision",
)
DURATION_SLOTS = ("prefix", "tick", "caseTest", "condition", "else", "subexpr", "chord", "hit", "elision")
GENERAL_KEYS = ("name", "tempo", "tonic", "register", "iterationCap", "trueMode", "falseMode", "gm1Percussion")
# non-GM1 keys and the GM1 sound used in their place when gm1Percussion is set
GM1_FALLBACK = {83: 54}
PERCUSSION_RANGE = (27, 87)
TEMPO_RANGE = (20, 300)


def family_of(kind: str) -> str:
    return ITERATION if kind in ITERATION_KINDS else SELECTION


class SchemaError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


@dataclass(frozen=True)
class Diagnostic:
    key: str
    message: str

    def __str__(self) -> str:
        return f"{self.key}: {self.message}"


@dataclass(frozen=True)
class AuralizationSchema:
    name: str
    tempo: int
    tonic: int
    register: int
    iteration_cap: int
    true_mode: str
    false_mode: str
    gm1_percussion: bool
    timbre: dict[str, int]
    percussion: dict[str, int]
    scales: dict[str, str]
    motifs: dict[str, tuple[MotifSpec, MotifSpec]]
    durations: dict[str, Fraction] = field(default_factory=dict)

    def scale_for(self, kind: str) -> Scale:
        return Scale(self.scales.get(kind, "major"), self.tonic)

    def percussion_key(self, point: str) -> int:
        key = self.percussion[point]
        if self.gm1_percussion:
            key = GM1_FALLBACK.get(key, key)
        return key

    def mode_for(self, outcome: bool) -> str:
        return self.true_mode if outcome else self.false_mode

    def with_tempo(self, tempo: int) -> AuralizationSchema:
        return replace(self, tempo=tempo)


def _notes(text: str) -> tuple[MotifNote, ...]:
    notes = []
    for triple in text.split():
        parts = triple.split(":")
        if len(parts) != 3:
            raise SchemaError(f"motif note {triple!r} is not degree:octave:duration")
        degree, octave, duration = parts
        try:
            dur = Fraction(duration)
            if degree == "r":
                notes.append(MotifNote(1, int(octave), dur, rest=True))
            else:
                notes.append(MotifNote(int(degree), int(octave), dur))
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"bad motif note {triple!r}: {exc}") from None
    if not notes:
        raise SchemaError("empty motif")
    return tuple(notes)


def _motif(kind: str, text: str) -> MotifSpec:
    return MotifSpec(family_of(kind), kind, _notes(text))


# Each family opens every motif with the same three notes. Iterations climb the
# tonic triad; selections step up from the tonic.
_DEFAULT_MOTIFS = {
    "FOR_TO": (
        "1:0:1/2 3:0:1/2 5:0:1 6:0:1/2 7:0:1/2 1:1:2",
        "1:0:1/2 3:0:1/2 5:0:1 1:1:1 7:0:1 5:0:1 3:0:1 1:0:2",
    ),
    "FOR_DOWNTO": (
        "1:0:1/2 3:0:1/2 5:0:1 4:0:1/2 2:0:1/2 1:0:2",
        "1:0:1/2 3:0:1/2 5:0:1 3:0:1 4:0:1 2:0:1 7:-1:1 1:0:2",
    ),
    "WHILE": (
        "1:0:1/2 3:0:1/2 5:0:1 5:0:1 3:0:1 5:0:1",
        "1:0:1/2 3:0:1/2 5:0:1 6:0:1 5:0:1 4:0:1 2:0:1 1:0:2",
    ),
    "REPEAT": (
        "1:0:1/2 3:0:1/2 5:0:1 3:0:1 5:0:1 1:1:1",
        "1:0:1/2 3:0:1/2 5:0:1 1:1:1 6:0:1 4:0:1 2:0:1 1:0:2",
    ),
    "IF": (
        "1:0:1 2:0:1/2 3:0:1/2 4:0:1 3:0:1 2:0:1",
        "1:0:1 2:0:1/2 3:0:1/2 5:0:1 4:0:1 3:0:1 2:0:1 1:0:2",
    ),
    "IF_ELSE": (
        "1:0:1 2:0:1/2 3:0:1/2 5:0:1 4:0:1 3:0:1",
        "1:0:1 2:0:1/2 3:0:1/2 4:0:1 5:0:1 3:0:1 2:0:1 1:0:2",
    ),
    "CASE": (
        "1:0:1 2:0:1/2 3:0:1/2 5:0:1/2 4:0:1/2 3:0:2",
        "1:0:1 2:0:1/2 3:0:1/2 6:0:1 5:0:1 3:0:1 2:0:1 1:0:2",
    ),
    "CASE_ELSE": (
        "1:0:1 2:0:1/2 3:0:1/2 5:0:1/2 6:0:1/2 5:0:2",
        "1:0:1 2:0:1/2 3:0:1/2 6:0:1 5:0:1 4:0:1 2:0:1 1:0:2",
    ),
}


def default_schema() -> AuralizationSchema:
    """The classic fixed auralization: triangles around loops, cowbell on case tests."""
    return AuralizationSchema(
        name="caitlin-classic",
        tempo=120,
        tonic=0,
        register=60,
        iteration_cap=64,
        true_mode=MAJOR,
        false_mode=MINOR,
        gm1_percussion=False,
        timbre={
            "WHILE": 19,
            "REPEAT": 16,
            "FOR_TO": 73,
            "FOR_DOWNTO": 71,
            "IF": 0,
            "IF_ELSE": 1,
            "CASE": 11,
            "CASE_ELSE": 12,
            SUBEXPR_TIMBRE: 8,
        },
        percussion={
            "iterationPrefix": 81,  # open triangle
            "iterationSuffix": 80,  # mute triangle
            "caseTest": 56,  # cowbell
            "finalIteration": 83,  # jingle bell
            "selectionPrefix": 75,  # claves
            "elision": 70,  # maracas
        },
        scales={kind: "major" for kind in CONSTRUCT_KINDS},
        motifs={kind: (_motif(kind, entry), _motif(kind, exit_)) for kind, (entry, exit_) in _DEFAULT_MOTIFS.items()},
        durations={
            "prefix": Fraction(4),
            "tick": Fraction(1),
            "caseTest": Fraction(2),
            "condition": Fraction(2),
            "else": Fraction(2),
            "subexpr": Fraction(1, 2),
            "chord": Fraction(1),
            "hit": Fraction(1, 2),
            "elision": Fraction(1),
        },
    )


def _int(value: str, line: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise SchemaError(f"expected an integer, got {value!r}", line) from None


def _bool(value: str, line: int) -> bool:
    if value.lower() not in ("true", "false"):
        raise SchemaError(f"expected true or false, got {value!r}", line)
    return value.lower() == "true"


def parse_schema(text: str, base: AuralizationSchema | None = None) -> AuralizationSchema:
    """Apply a schema document on top of ``base`` (the default schema) without validating."""
    schema = base or default_schema()
    general: dict = {}
    timbre, percussion = dict(schema.timbre), dict(schema.percussion)
    scales, durations = dict(schema.scales), dict(schema.durations)
    motifs = {kind: list(pair) for kind, pair in schema.motifs.items()}
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SchemaError(f"expected 'section.key = value', got {line!r}", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        path = key.split(".")
        section = path[0]
        try:
            if section == "general" and len(path) == 2 and path[1] in GENERAL_KEYS:
                name = path[1]
                if name in ("name", "trueMode", "falseMode"):
                    general[name] = value
                elif name == "gm1Percussion":
                    general[name] = _bool(value, lineno)
                else:
                    general[name] = _int(value, lineno)
            elif section == "timbre" and len(path) == 2 and path[1] in TIMBRE_KEYS:
                timbre[path[1]] = _int(value, lineno)
            elif section == "percussion" and len(path) == 2 and path[1] in POINTS_OF_INTEREST:
                percussion[path[1]] = _int(value, lineno)
            elif section == "scale" and len(path) == 2 and path[1] in CONSTRUCT_KINDS:
                if value not in SCALE_STEPS:
                    raise SchemaError(f"unknown scale {value!r}", lineno)
                scales[path[1]] = value
            elif section == "durations" and len(path) == 2 and path[1] in DURATION_SLOTS:
                durations[path[1]] = Fraction(value)
            elif section == "motif" and len(path) == 3 and path[1] in CONSTRUCT_KINDS and path[2] in ("entry", "exit"):
                motifs[path[1]][0 if path[2] == "entry" else 1] = _motif(path[1], value)
            else:
                raise SchemaError(f"unknown key {key!r}", lineno)
        except SchemaError as exc:
            if exc.line is None:
                raise SchemaError(str(exc), lineno) from None
            raise
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"bad value for {key}: {exc}", lineno) from None
    renames = {"iterationCap": "iteration_cap", "trueMode": "true_mode", "falseMode": "false_mode",
               "gm1Percussion": "gm1_percussion"}
    return replace(
        schema,
        **{renames.get(k, k): v for k, v in general.items()},
        timbre=timbre,
        percussion=percussion,
        scales=scales,
        durations=durations,
        motifs={kind: (pair[0], pair[1]) for kind, pair in motifs.items()},
    )


def load_schema(text: str) -> AuralizationSchema:
    """Parse and validate a schema document; omitted fields inherit from the default."""
    schema = parse_schema(text)
    problems = validate_schema(schema)
    if problems:
        raise SchemaError("; ".join(map(str, problems)))
    return schema


def _fmt_note(n: MotifNote) -> str:
    return f"{'r' if n.rest else n.degree}:{n.octave}:{n.duration}"


def save_schema(schema: AuralizationSchema) -> str:
    """Canonical text form; every field is written explicitly."""
    lines = [
        f"general.name = {schema.name}",
        f"general.tempo = {schema.tempo}",
        f"general.tonic = {schema.tonic}",
        f"general.register = {schema.register}",
        f"general.iterationCap = {schema.iteration_cap}",
        f"general.trueMode = {schema.true_mode}",
        f"general.falseMode = {schema.false_mode}",
        f"general.gm1Percussion = {'true' if schema.gm1_percussion else 'false'}",
    ]
    lines += [f"timbre.{k} = {schema.timbre[k]}" for k in TIMBRE_KEYS]
    lines += [f"percussion.{k} = {schema.percussion[k]}" for k in POINTS_OF_INTEREST]
    lines += [f"scale.{k} = {schema.scales[k]}" for k in CONSTRUCT_KINDS]
    for kind in CONSTRUCT_KINDS:
        entry, exit_ = schema.motifs[kind]
        lines.append(f"motif.{kind}.entry = {' '.join(map(_fmt_note, entry.notes))}")
        lines.append(f"motif.{kind}.exit = {' '.join(map(_fmt_note, exit_.notes))}")
    lines += [f"durations.{k} = {schema.durations[k]}" for k in DURATION_SLOTS]
    return "\n".join(lines) + "\n"


def validate_schema(schema: AuralizationSchema) -> list[Diagnostic]:
    out: list[Diagnostic] = []

    def bad(key: str, message: str) -> None:
        out.append(Diagnostic(key, message))

    if not TEMPO_RANGE[0] <= schema.tempo <= TEMPO_RANGE[1]:
        bad("general.tempo", f"tempo {schema.tempo} outside {TEMPO_RANGE[0]}-{TEMPO_RANGE[1]} BPM")
    if not 0 <= schema.tonic <= 11:
        bad("general.tonic", f"tonic {schema.tonic} is not a pitch class 0-11")
    # realized pitches span roughly two octaves below and three above the register
    if not 24 <= schema.register <= 84:
        bad("general.register", f"register {schema.register} outside 24-84")
    if schema.iteration_cap < 2:
        bad("general.iterationCap", "iteration cap must be at least 2")
    for key, mode in (("general.trueMode", schema.true_mode), ("general.falseMode", schema.false_mode)):
        if mode not in (MAJOR, MINOR):
            bad(key, f"mode must be major or minor, got {mode!r}")
    if schema.true_mode == schema.false_mode:
        bad("general.falseMode", "true and false must sound in different modes")

    for key in TIMBRE_KEYS:
        program = schema.timbre.get(key)
        if program is None:
            bad(f"timbre.{key}", "missing timbre")
        elif not 0 <= program <= 127:
            bad(f"timbre.{key}", f"program {program} outside 0-127")
    for point in POINTS_OF_INTEREST:
        key = schema.percussion.get(point)
        if key is None:
            bad(f"percussion.{point}", "missing percussion key")
        elif not PERCUSSION_RANGE[0] <= key <= PERCUSSION_RANGE[1]:
            bad(f"percussion.{point}", f"key {key} outside {PERCUSSION_RANGE[0]}-{PERCUSSION_RANGE[1]}")

    for slot in DURATION_SLOTS:
        value = schema.durations.get(slot)
        if value is None or value <= 0:
            bad(f"durations.{slot}", "duration must be present and positive")
    d = schema.durations
    if all(d.get(s, 0) > 0 for s in DURATION_SLOTS):
        if d["chord"] > min(d["caseTest"], d["condition"], d["else"]):
            bad("durations.chord", "chord must not outlast the caseTest, condition or else slot")
        if d["hit"] > min(d["tick"], d["caseTest"], d["elision"]):
            bad("durations.hit", "percussion hit must not outlast the tick, caseTest or elision slot")

    signatures: dict[str, set] = {ITERATION: set(), SELECTION: set()}
    for kind in CONSTRUCT_KINDS:
        scale_name = schema.scales.get(kind, "major")
        if kind not in ITERATION_KINDS and scale_name != "major":
            bad(f"scale.{kind}", "only loop constructs may change scale")
        pair = schema.motifs.get(kind)
        if pair is None:
            bad(f"motif.{kind}", "missing motifs")
            continue
        for part, spec in zip(("entry", "exit"), pair):
            key = f"motif.{kind}.{part}"
            if spec.family != family_of(kind) or spec.kind != kind:
                bad(key, f"motif belongs to {spec.family}/{spec.kind}")
            if len(spec.notes) < SIGNATURE_LENGTH:
                bad(key, f"motif needs at least {SIGNATURE_LENGTH} notes")
                continue
            signatures[family_of(kind)].add(spec.signature())
            sizes = [len(SCALE_STEPS[scale_name])]
            if kind not in ITERATION_KINDS:
                sizes.append(len(SCALE_STEPS["naturalMinor"]))
            worst = max(n.degree for n in spec.notes if not n.rest) if any(not n.rest for n in spec.notes) else 1
            if worst > min(sizes):
                bad(key, f"degree {worst} out of range for {scale_name}")
            if any(abs(n.octave) > 2 for n in spec.notes):
                bad(key, "octave offsets must stay within two octaves")
    for family, sigs in signatures.items():
        if len(sigs) > 1:
            bad(f"motif.{family}", f"{family} motifs do not share a common opening (family prefix)")
    if signatures[ITERATION] and signatures[ITERATION] == signatures[SELECTION]:
        bad("motif", "iteration and selection families share the same opening")
    return out


def builtin_schema(name: str) -> AuralizationSchema:
    """Load one of the shipped skins: ``classic``, ``jazz``, ``chorale`` or ``blues``."""
    if name == "classic":
        return default_schema()
    text = resources.files("caitlin.data.schemas").joinpath(f"{name}.schema").read_text(encoding="utf-8")
    return load_schema(text)


BUILTIN_SCHEMAS = ("classic", "jazz", "chorale", "blues")
