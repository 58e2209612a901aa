"""Seeded-bug corpus: paired programs whose control-flow bugs show up in the score."""

from .harness import (
    CorpusCase,
    DiffReport,
    InputVerdict,
    ModeDifference,
    builtin_corpus_dir,
    compare_auralizations,
    load_case,
    load_corpus,
    mode_events,
    run_case,
)
from .mutate import FLOW_PRESERVING, MutationKind, NoEligibleSite, mutate

__all__ = [
    "CorpusCase",
    "DiffReport",
    "FLOW_PRESERVING",
    "InputVerdict",
    "ModeDifference",
    "MutationKind",
    "NoEligibleSite",
    "builtin_corpus_dir",
    "compare_auralizations",
    "load_case",
    "load_corpus",
    "mode_events",
    "mutate",
    "run_case",
]
