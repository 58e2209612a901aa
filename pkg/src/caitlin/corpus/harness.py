"""Paired correct/buggy programs and the score diff that tells them apart.

On disk a case is a directory::

    <case>/correct.pas
    <case>/bug.pas
    <case>/inputs/<n>.txt
    <case>/expect.txt               "<n> true|false" per input, "# mutation: ..." comments
    <case>/expected/<n>.correct.txt  Writeln output of correct.pas on input n
    <case>/expected/<n>.bug.txt      Writeln output of bug.pas on input n
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from ..interp import RunOptions, RunResult, run
from ..lang import check, parse_source
from ..motif import MAJOR, MINOR, triad_quality
from ..schema import AuralizationSchema, default_schema
from ..score import NOTE, Score, auralize, score_digest
from ..trace import Trace


@dataclass(frozen=True)
class ModeDifference:
    index: int
    where: str
    beat_a: Fraction | None
    beat_b: Fraction | None
    mode_a: str | None
    mode_b: str | None


@dataclass(frozen=True)
class DiffReport:
    first_divergence: Fraction | None = None
    count_deltas: dict[str, tuple[int, int]] = field(default_factory=dict)
    mode_differences: tuple[ModeDifference, ...] = ()

    @property
    def empty(self) -> bool:
        return self.first_divergence is None

    def __bool__(self) -> bool:
        return not self.empty

    def summary(self) -> str:
        if self.empty:
            return "no difference"
        parts = [f"first divergence at beat {self.first_divergence}"]
        parts += [f"{k}: {a} vs {b}" for k, (a, b) in sorted(self.count_deltas.items())]
        parts += [f"{m.where} #{m.index}: {m.mode_a} vs {m.mode_b}" for m in self.mode_differences]
        return "; ".join(parts)


def _event_class(e) -> str:
    if e.kind == NOTE:
        return f"note:{e.tag.split(':')[0]}" if not e.tag.startswith("chord") else f"chord:{e.tag.split(':')[1]}"
    return f"{e.kind}:{e.tag}" if e.tag else e.kind


def melody_mode(pitches, tonic: int) -> str | None:
    """Major or minor from the third, sixth and seventh degrees present, if any decide it."""
    pcs = {(p - tonic) % 12 for p in pitches}
    minor = bool(pcs & {3, 8, 10})
    major = bool(pcs & {4, 9, 11})
    if minor == major:
        return None
    return MINOR if minor else MAJOR


def mode_events(score: Score, tonic: int = 0) -> list[tuple[Fraction, str, str | None]]:
    """Every decision chord and exit motif with its mode, found by pitch-class analysis."""
    found = [(start, tag.split(":")[1], triad_quality(pitches)) for start, _, tag, pitches in score.chords()]
    found += [(start, "exit", melody_mode(pitches, tonic)) for start, _, _, pitches in score.motifs("exit")]
    return sorted(found, key=lambda item: (item[0], item[1]))


def compare_auralizations(a: Score, b: Score, tonic: int = 0) -> DiffReport:
    """Score-level diff of two renderings made under the same schema."""
    ea, eb = a.events, b.events
    first = None
    for x, y in zip(ea, eb):
        if x != y:
            first = min(x.start, y.start)
            break
    else:
        if len(ea) != len(eb):
            first = (ea[len(eb)] if len(ea) > len(eb) else eb[len(ea)]).start
    if first is None and a.ppq != b.ppq:
        first = Fraction(0)
    if first is None:
        return DiffReport()

    ca, cb = Counter(map(_event_class, ea)), Counter(map(_event_class, eb))
    deltas = {k: (ca[k], cb[k]) for k in sorted(set(ca) | set(cb)) if ca[k] != cb[k]}
    ma, mb = mode_events(a, tonic), mode_events(b, tonic)
    modes = []
    for i in range(max(len(ma), len(mb))):
        x = ma[i] if i < len(ma) else (None, None, None)
        y = mb[i] if i < len(mb) else (None, None, None)
        if x[2] != y[2]:
            modes.append(ModeDifference(i, x[1] or y[1], x[0], y[0], x[2], y[2]))
    return DiffReport(first, deltas, tuple(modes))


@dataclass(frozen=True)
class CorpusCase:
    name: str
    correct: str
    bug: str
    inputs: tuple[tuple[str, str], ...]  # (input name, text)
    expected_divergence: dict[str, bool]
    mutations: tuple[str, ...] = ()
    expected_output: dict[tuple[str, str], str] = field(default_factory=dict)


def load_case(path: Path) -> CorpusCase:
    path = Path(path)
    expect: dict[str, bool] = {}
    mutations: list[str] = []
    for line in (path / "expect.txt").read_text(encoding="utf-8").splitlines():
        text = line.strip()
        if text.startswith("#"):
            if text[1:].strip().startswith("mutation:"):
                mutations += text.split(":", 1)[1].split()
            continue
        if text:
            name, flag = text.split()
            if flag not in ("true", "false"):
                raise ValueError(f"{path / 'expect.txt'}: bad divergence flag {flag!r}")
            expect[name] = flag == "true"
    inputs = tuple(
        (p.stem, p.read_text(encoding="utf-8"))
        for p in sorted((path / "inputs").glob("*.txt"), key=lambda p: (len(p.stem), p.stem))
    )
    if {name for name, _ in inputs} != set(expect):
        raise ValueError(f"{path}: inputs and expect.txt disagree")
    outputs = {}
    expected_dir = path / "expected"
    for name, _ in inputs:
        for which in ("correct", "bug"):
            f = expected_dir / f"{name}.{which}.txt"
            if f.exists():
                outputs[(name, which)] = f.read_text(encoding="utf-8")
    return CorpusCase(
        name=path.name,
        correct=(path / "correct.pas").read_text(encoding="utf-8"),
        bug=(path / "bug.pas").read_text(encoding="utf-8"),
        inputs=inputs,
        expected_divergence=expect,
        mutations=tuple(mutations),
        expected_output=outputs,
    )


def builtin_corpus_dir() -> Path:
    return Path(str(resources.files("caitlin.data").joinpath("corpus")))


def load_corpus(root: Path | None = None) -> list[CorpusCase]:
    root = Path(root) if root is not None else builtin_corpus_dir()
    return [load_case(p) for p in sorted(root.iterdir()) if (p / "expect.txt").exists()]


@dataclass(frozen=True)
class InputVerdict:
    case: str
    input: str
    expected: bool
    diverged: bool
    diff: DiffReport
    correct_run: RunResult
    bug_run: RunResult
    correct_trace: Trace
    bug_trace: Trace

    @property
    def ok(self) -> bool:
        return self.expected == self.diverged

    def output_matches(self, case: CorpusCase) -> bool | None:
        """None when the case ships no expected output for this input."""
        checks = []
        for which, result in (("correct", self.correct_run), ("bug", self.bug_run)):
            want = case.expected_output.get((self.input, which))
            if want is not None:
                checks.append(want == result.output)
        return all(checks) if checks else None

    def report_line(self) -> str:
        def flag(b: bool) -> str:
            return "true" if b else "false"

        return f"{self.case} {self.input} {flag(self.expected)} {flag(self.diverged)} {'pass' if self.ok else 'FAIL'}"


def render(source: str, input_text: str, schema: AuralizationSchema,
           options: RunOptions | None = None) -> tuple[RunResult, Trace, Score]:
    program = parse_source(source)
    problems = check(program)
    if problems:
        raise ValueError("; ".join(map(str, problems)))
    result, trace = run(program, input_text, options)
    return result, trace, auralize(trace, schema)


def run_case(case: CorpusCase, schema: AuralizationSchema | None = None) -> list[InputVerdict]:
    schema = schema or default_schema()
    verdicts = []
    for name, text in case.inputs:
        ra, ta, sa = render(case.correct, text, schema)
        rb, tb, sb = render(case.bug, text, schema)
        diff = compare_auralizations(sa, sb, schema.tonic)
        if diff.empty != (score_digest(sa) == score_digest(sb)):
            raise AssertionError("diff and digest disagree")
        verdicts.append(InputVerdict(case.name, name, case.expected_divergence[name], not diff.empty, diff,
                                     ra, rb, ta, tb))
    return verdicts
