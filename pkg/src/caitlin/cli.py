"""Command-line entry point: ``caitlin run|trace|render|validate-schema|corpus``."""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from dataclasses import replace
from pathlib import Path

from . import midi
from .corpus import FLOW_PRESERVING, MutationKind, NoEligibleSite, load_corpus, mutate, run_case
from .corpus.harness import compare_auralizations, render as render_case
from .interp import COMPLETED, RunOptions, run
from .lang import LexError, ParseError, check, parse_source, pretty
from .schema import BUILTIN_SCHEMAS, SchemaError, builtin_schema, default_schema, parse_schema, validate_schema
from .score import auralize
from .trace import TraceFormatError, parse_trace, serialize_trace

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class CliError(Exception):
    """A failure already worded for the user; carries its exit code."""

    def __init__(self, message: str, code: int = EXIT_FAIL):
        super().__init__(message)
        self.code = code


def atomic_write(path: Path, data: bytes | str) -> None:
    """Write via a temp file in the same directory, then rename over ``path``."""
    path = Path(path)
    if isinstance(data, str):
        data = data.encode("utf-8")
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _read(path: str, what: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise CliError(f"{what} not found: {path}") from None
    except OSError as exc:
        raise CliError(f"cannot read {what} {path}: {exc.strerror}") from None


def _schema(args):
    if args.schema is None:
        schema = default_schema()
    elif not Path(args.schema).exists() and args.schema in BUILTIN_SCHEMAS:
        schema = builtin_schema(args.schema)
    else:
        text = _read(args.schema, "schema")
        try:
            schema = parse_schema(text)
        except SchemaError as exc:
            raise CliError(f"{args.schema}: {exc}") from None
        problems = validate_schema(schema)
        if problems:
            raise CliError("\n".join(f"{args.schema}: {p}" for p in problems))
    if getattr(args, "tempo", None) is not None:
        schema = schema.with_tempo(args.tempo)
    if getattr(args, "max_iterations", None) is not None:
        schema = replace(schema, iteration_cap=args.max_iterations)
    problems = validate_schema(schema)
    if problems:
        raise CliError("\n".join(str(p) for p in problems), EXIT_USAGE)
    return schema


def _program(path: str):
    source = _read(path, "program")
    try:
        program = parse_source(source)
    except (LexError, ParseError) as exc:
        raise CliError(f"{path}:{exc.line}:{exc.column}: {exc.message}") from None
    problems = check(program)
    if problems:
        raise CliError("\n".join(f"{path}:{p}" for p in problems))
    return program


def _execute(args, echo=None):
    program = _program(args.program)
    input_text = _read(args.input, "input") if args.input else ""
    result, trace = run(program, input_text, RunOptions(subexpr_tracing=args.subexpr))
    (echo or sys.stdout).write(result.output)
    if result.status != COMPLETED:
        print(f"{args.program}: {result.status}: {result.error}", file=sys.stderr)
    return result, trace


def cmd_run(args) -> int:
    schema = _schema(args)
    result, trace = _execute(args)
    if args.trace:
        atomic_write(Path(args.trace), serialize_trace(trace))
    out = Path(args.out) if args.out else Path(args.program).with_suffix(".mid")
    atomic_write(out, midi.encode_smf(auralize(trace, schema)))
    return EXIT_OK if result.status == COMPLETED else EXIT_FAIL


def cmd_trace(args) -> int:
    target = args.out or args.trace
    # with the trace on stdout, program output moves to stderr
    result, trace = _execute(args, None if target else sys.stderr)
    text = serialize_trace(trace)
    if target:
        atomic_write(Path(target), text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if result.status == COMPLETED else EXIT_FAIL


def cmd_render(args) -> int:
    schema = _schema(args)
    try:
        trace = parse_trace(_read(args.trace_file, "trace"))
    except TraceFormatError as exc:
        where = f":{exc.line}" if exc.line else ""
        raise CliError(f"{args.trace_file}{where}: {exc}") from None
    out = Path(args.out) if args.out else Path(args.trace_file).with_suffix(".mid")
    atomic_write(out, midi.encode_smf(auralize(trace, schema)))
    return EXIT_OK


def cmd_validate_schema(args) -> int:
    text = _read(args.schema_file, "schema")
    try:
        problems = validate_schema(parse_schema(text))
    except SchemaError as exc:
        print(f"{args.schema_file}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    for p in problems:
        print(f"{args.schema_file}: {p}", file=sys.stderr)
    return EXIT_FAIL if problems else EXIT_OK


def _mutant_sweep(case, seed: int, schema) -> list[str]:
    """Seeded mutants of the correct program; only flow-preserving ones carry an expectation."""
    lines = []
    original = parse_source(case.correct)
    for kind in MutationKind:
        try:
            mutant = pretty(mutate(original, kind, seed))
        except NoEligibleSite:
            continue
        for name, text in case.inputs:
            _, _, a = render_case(case.correct, text, schema)
            _, _, b = render_case(mutant, text, schema)
            diverged = not compare_auralizations(a, b, schema.tonic).empty
            actual = "true" if diverged else "false"
            label = f"{case.name}+{kind.value}@{seed}"
            if kind in FLOW_PRESERVING:
                lines.append(f"{label} {name} false {actual} {'FAIL' if diverged else 'pass'}")
            else:
                lines.append(f"{label} {name} - {actual} info")
    return lines


def cmd_corpus(args) -> int:
    schema = _schema(args)
    root = Path(args.corpus_dir) if args.corpus_dir else None
    if root is not None and not root.is_dir():
        raise CliError(f"corpus directory not found: {root}")
    try:
        cases = load_corpus(root)
    except (OSError, ValueError) as exc:
        raise CliError(str(exc)) from None
    lines, failed = [], 0
    for case in cases:
        for verdict in run_case(case, schema):
            lines.append(verdict.report_line())
            failed += not verdict.ok
        if args.seed is not None:
            extra = _mutant_sweep(case, args.seed, schema)
            failed += sum(line.endswith("FAIL") for line in extra)
            lines += extra
    width = max((len(line.split()[0]) for line in lines), default=4)
    print(f"{'case':<{width}} input expected actual verdict")
    for line in lines:
        name, rest = line.split(" ", 1)
        print(f"{name:<{width}} {rest}")
    print(f"{len(lines) - failed} passed, {failed} failed")
    if args.report:
        atomic_write(Path(args.report), "".join(line + "\n" for line in lines))
    return EXIT_FAIL if failed else EXIT_OK


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="caitlin", description="Auralize Pascal program runs as MIDI.")
    sub = parser.add_subparsers(dest="command", required=True)

    def schema_flags(p):
        p.add_argument("--schema", help="schema file, or a builtin name: " + ", ".join(BUILTIN_SCHEMAS))
        p.add_argument("--tempo", type=_positive, help="override the schema tempo (bpm)")
        p.add_argument("--max-iterations", type=_positive, help="loop iterations rendered before elision")

    def exec_flags(p):
        p.add_argument("program")
        p.add_argument("--input", help="text fed to READLN")
        p.add_argument("--subexpr", action="store_true", help="trace short-circuit operand outcomes")

    p = sub.add_parser("run", help="execute a program and write its MIDI auralization")
    exec_flags(p)
    schema_flags(p)
    p.add_argument("--out", help="MIDI output path (default: program name with .mid)")
    p.add_argument("--trace", help="also save the trace here")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("trace", help="execute a program and emit its trace only")
    exec_flags(p)
    p.add_argument("--out", help="trace output path (default: stdout)")
    p.add_argument("--trace", help="same as --out")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("render", help="render a saved trace to MIDI")
    p.add_argument("trace_file")
    schema_flags(p)
    p.add_argument("--out", help="MIDI output path (default: trace name with .mid)")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("validate-schema", help="check a schema file")
    p.add_argument("schema_file")
    p.set_defaults(func=cmd_validate_schema)

    p = sub.add_parser("corpus", help="run the seeded-bug corpus")
    p.add_argument("corpus_dir", nargs="?", help="corpus root (default: the shipped corpus)")
    schema_flags(p)
    p.add_argument("--seed", type=int, help="also sweep seeded mutants of each correct program")
    p.add_argument("--report", help="write 'case input expected actual verdict' lines here")
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except CliError as exc:
        print(exc, file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
