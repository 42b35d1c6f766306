#!/usr/bin/env python3
"""Running untrusted candidate code safely.

Loads one problem from the bundled corpus and executes its reference and
buggy versions in the subprocess sandbox, plus a hand-made hanging candidate
to show per-case timeouts.
"""

from __future__ import annotations

from pathlib import Path

from patchgate import Limits, SubprocessExecutor, load_problem, run_program

REPO = Path(__file__).resolve().parents[1]

HANGING = """\
def kth(arr, k):
    while True:
        pass
"""


def show(label: str, outcomes, expected) -> None:
    print(f"  {label}:")
    for outcome, case in zip(outcomes, expected):
        if outcome.is_failure:
            print(f"    {case.input} -> {outcome.status.value} ({outcome.detail})")
        else:
            mark = "ok" if outcome.value == case.expected else f"want {case.expected}"
            print(f"    {case.input} -> {outcome.value}  [{mark}]")


def main() -> None:
    problem = load_problem(REPO / "corpus" / "kth")
    executor = SubprocessExecutor(REPO / "shim" / "shim_runner.py")
    limits = Limits(timeout_ms=1500)

    print(f"problem: {problem.name} (entry point {problem.entry_point})")
    print("-" * 40)
    show(
        "reference",
        run_program(problem.reference_source, problem, executor, limits),
        problem.test_cases,
    )
    show(
        "buggy",
        run_program(problem.buggy_source, problem, executor, limits),
        problem.test_cases,
    )
    show(
        "hanging candidate (1.5 s timeout per case)",
        run_program(HANGING, problem, executor, limits),
        problem.test_cases,
    )
    print()
    print("A timeout kills the subprocess; remaining cases run in a fresh one.")


if __name__ == "__main__":
    main()
