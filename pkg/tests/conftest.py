from __future__ import annotations

from pathlib import Path

import pytest

from patchgate.generation import PatchCandidate
from patchgate.oracle import SubprocessExecutor

REPO_ROOT = Path(__file__).resolve().parents[1]


@pytest.fixture(scope="session")
def repo_root() -> Path:
    return REPO_ROOT


@pytest.fixture(scope="session")
def corpus_root() -> Path:
    return REPO_ROOT / "corpus"


@pytest.fixture(scope="session")
def shim_path() -> Path:
    return REPO_ROOT / "shim" / "shim_runner.py"


@pytest.fixture(scope="session")
def executor(shim_path) -> SubprocessExecutor:
    return SubprocessExecutor(shim_path)


@pytest.fixture(scope="session")
def cassette_path() -> Path:
    return REPO_ROOT / "fixtures" / "tables_cassette.jsonl"


def make_candidate(
    code: str,
    problem: str = "demo",
    temperature: float = 0.0,
    trial: int = 0,
) -> PatchCandidate:
    return PatchCandidate(
        problem_name=problem,
        temperature=temperature,
        trial_index=trial,
        raw_response=code,
        extracted_code=code,
        cassette_key=f"{problem}-{temperature}-{trial}",
    )


def oracle_levenshtein(a: str, b: str) -> int:
    """Independent full-table DP oracle (kept separate from the two-row
    production implementation on purpose)."""
    rows, cols = len(a) + 1, len(b) + 1
    table = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        table[i][0] = i
    for j in range(cols):
        table[0][j] = j
    for i in range(1, rows):
        ai = a[i - 1]
        for j in range(1, cols):
            cost = 0 if ai == b[j - 1] else 1
            table[i][j] = min(
                table[i - 1][j] + 1,
                table[i][j - 1] + 1,
                table[i - 1][j - 1] + cost,
            )
    return table[-1][-1]
