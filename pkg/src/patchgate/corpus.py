"""Loading and validation of buggy/reference problem pairs with test oracles.

A problem directory holds ``buggy.<ext>``, ``reference.<ext>`` and a
``testcases.json`` manifest:

    {
      "name": "kth",
      "entry_point": "kth",
      "adapter": null,
      "cases": [{"input": [[1, 2, 3], 1], "expected": 2}, ...]
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .errors import (
    CorpusNotFoundError,
    EmptyCorpusError,
    ManifestParseError,
    ValidationError,
)

MANIFEST_NAME = "testcases.json"
DEFAULT_LANGUAGE_TAG = "python3"


def normalize_newlines(text: str) -> str:
    """CRLF/CR to LF, so similarity metrics are immune to checkout settings."""
    return text.replace("\r\n", "\n").replace("\r", "\n")


@dataclass(frozen=True)
class TestCase:
    input: list
    expected: object


@dataclass(frozen=True)
class Problem:
    name: str
    buggy_source: str
    reference_source: str
    entry_point: str
    test_cases: tuple[TestCase, ...]
    adapter: str | None = None
    language_tag: str = DEFAULT_LANGUAGE_TAG


@dataclass(frozen=True)
class ValidationReport:
    problem: str
    valid: bool
    bug_detected: bool
    failing_cases: tuple[int, ...] = ()
    warnings: tuple[str, ...] = field(default=())


def _read_source(path: Path) -> str:
    if not path.exists():
        raise CorpusNotFoundError(f"missing source file: {path}")
    return normalize_newlines(path.read_text(encoding="utf-8"))


def load_problem(dir_path: str | Path) -> Problem:
    """Load one problem directory into an immutable Problem."""
    dir_path = Path(dir_path)
    if not dir_path.is_dir():
        raise CorpusNotFoundError(f"problem directory not found: {dir_path}")
    manifest_path = dir_path / MANIFEST_NAME
    if not manifest_path.exists():
        raise CorpusNotFoundError(f"missing manifest: {manifest_path}")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ManifestParseError(f"{manifest_path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc

    for field_name in ("name", "entry_point", "cases"):
        if field_name not in manifest:
            raise ManifestParseError(f"{manifest_path}: missing field '{field_name}'")
    if not isinstance(manifest["name"], str) or not manifest["name"]:
        raise ManifestParseError(f"{manifest_path}: 'name' must be a non-empty string")
    if not isinstance(manifest["entry_point"], str) or not manifest["entry_point"]:
        raise ManifestParseError(f"{manifest_path}: 'entry_point' must be a non-empty string")
    adapter = manifest.get("adapter")
    if adapter is not None and not isinstance(adapter, str):
        raise ManifestParseError(f"{manifest_path}: 'adapter' must be a string or null")
    raw_cases = manifest["cases"]
    if not isinstance(raw_cases, list):
        raise ManifestParseError(f"{manifest_path}: 'cases' must be an array")
    if not raw_cases:
        raise ValidationError(f"{manifest_path}: empty test case list")

    cases = []
    for k, raw in enumerate(raw_cases):
        if not isinstance(raw, dict) or "input" not in raw or "expected" not in raw:
            raise ManifestParseError(
                f"{manifest_path}: case {k} must be an object with 'input' and 'expected'"
            )
        if not isinstance(raw["input"], list):
            raise ManifestParseError(f"{manifest_path}: case {k} 'input' must be an array")
        cases.append(TestCase(input=raw["input"], expected=raw["expected"]))

    ext_candidates = sorted(dir_path.glob("buggy.*"))
    if not ext_candidates:
        raise CorpusNotFoundError(f"missing buggy source in {dir_path}")
    ext = ext_candidates[0].suffix
    buggy = _read_source(dir_path / f"buggy{ext}")
    reference = _read_source(dir_path / f"reference{ext}")

    return Problem(
        name=manifest["name"],
        buggy_source=buggy,
        reference_source=reference,
        entry_point=manifest["entry_point"],
        test_cases=tuple(cases),
        adapter=adapter,
        language_tag=manifest.get("language_tag", DEFAULT_LANGUAGE_TAG),
    )


def load_corpus(root: str | Path, names: Sequence[str] | None = None) -> list[Problem]:
    """Load every problem directory under ``root``, sorted by name.

    ``names`` restricts to that subset. Duplicate names and empty results
    are rejected.
    """
    root = Path(root)
    if not root.is_dir():
        raise CorpusNotFoundError(f"corpus root not found: {root}")
    problems: list[Problem] = []
    for entry in sorted(root.iterdir()):
        if entry.is_dir() and (entry / MANIFEST_NAME).exists():
            problems.append(load_problem(entry))

    seen: set[str] = set()
    for p in problems:
        if p.name in seen:
            raise ValidationError(f"duplicate problem name in corpus: {p.name}")
        seen.add(p.name)

    if names is not None:
        wanted = set(names)
        unknown = wanted - seen
        if unknown:
            raise ValidationError(f"unknown problem names: {sorted(unknown)}")
        problems = [p for p in problems if p.name in wanted]

    problems.sort(key=lambda p: p.name)
    if not problems:
        raise EmptyCorpusError(f"no problems found under {root}")
    return problems


def validate_problem(problem: Problem, runner) -> ValidationReport:
    """Check that the reference passes its own suite and the bug is visible.

    ``runner(source, problem) -> OutcomeVector`` executes a program text
    against the problem's cases (see oracle.run_program).
    """
    from .oracle import outcome_matches_expected

    ref_outcomes = runner(problem.reference_source, problem)
    failing = tuple(
        k
        for k, (outcome, case) in enumerate(zip(ref_outcomes, problem.test_cases))
        if not outcome_matches_expected(outcome, case.expected)
    )
    buggy_outcomes = runner(problem.buggy_source, problem)
    bug_detected = any(
        not outcome_matches_expected(outcome, case.expected)
        for outcome, case in zip(buggy_outcomes, problem.test_cases)
    )
    warnings = ()
    if not bug_detected:
        warnings = (f"{problem.name}: buggy source passes every test case; bug is undetectable",)
    return ValidationReport(
        problem=problem.name,
        valid=not failing,
        bug_detected=bug_detected,
        failing_cases=failing,
        warnings=warnings,
    )
