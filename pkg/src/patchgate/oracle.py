"""Sandboxed execution of candidate programs and output-equivalence checks.

Programs run in a subprocess shim speaking a JSON-lines protocol: one job
object on stdin, one result object per test case on stdout. The harness
enforces per-case wall-clock timeouts and restarts the subprocess after a
hang so one bad case cannot poison the rest of the trial.
"""

from __future__ import annotations

import enum
import json
import os
import queue
import subprocess
import sys
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .corpus import Problem, TestCase
from .errors import ExecutionEnvironmentError, ProtocolError, ValidationError

DEFAULT_TIMEOUT_MS = 5000
DEFAULT_MAX_OUTPUT_BYTES = 1_000_000

FLOAT_TOLERANCE = 1e-6


class OutcomeStatus(enum.Enum):
    VALUE = "value"
    TIMEOUT = "timeout"
    RUNTIME_ERROR = "error"
    LOAD_ERROR = "load_error"


@dataclass(frozen=True)
class CaseOutcome:
    status: OutcomeStatus
    value: object = None
    detail: str = ""

    @property
    def is_failure(self) -> bool:
        return self.status is not OutcomeStatus.VALUE


@dataclass(frozen=True)
class Limits:
    timeout_ms: int = DEFAULT_TIMEOUT_MS
    max_output_bytes: int = DEFAULT_MAX_OUTPUT_BYTES


@dataclass(frozen=True)
class TrialResult:
    problem: str
    temperature: float
    trial_index: int
    outcomes: tuple[CaseOutcome, ...]
    pass_all: bool
    wall_time_ms: tuple[int, ...]


def compare_values(actual: object, expected: object) -> bool:
    """Deep structural equality with a small numeric tolerance.

    Numbers agree when |a - b| <= max(1e-6, 1e-6 * max(|a|, |b|)); ints and
    floats inter-compare. Booleans, strings and null are exact; arrays are
    order-sensitive; objects compare by key set then per key.
    """
    if isinstance(actual, bool) or isinstance(expected, bool):
        return actual is expected
    if isinstance(actual, (int, float)) and isinstance(expected, (int, float)):
        a, b = float(actual), float(expected)
        return abs(a - b) <= max(FLOAT_TOLERANCE, FLOAT_TOLERANCE * max(abs(a), abs(b)))
    if isinstance(actual, list) and isinstance(expected, list):
        return len(actual) == len(expected) and all(
            compare_values(x, y) for x, y in zip(actual, expected)
        )
    if isinstance(actual, dict) and isinstance(expected, dict):
        return actual.keys() == expected.keys() and all(
            compare_values(actual[k], expected[k]) for k in actual
        )
    return type(actual) is type(expected) and actual == expected


def outcome_matches_expected(outcome: CaseOutcome, expected: object) -> bool:
    return outcome.status is OutcomeStatus.VALUE and compare_values(outcome.value, expected)


def outcome_oer(p: Sequence[CaseOutcome], q: Sequence[CaseOutcome]) -> float:
    """Output Equivalence Rate between two outcome vectors.

    A failure outcome (timeout, error, load error) is equivalent to nothing,
    including another failure: two crashing programs are not producing the
    same output.
    """
    if len(p) != len(q):
        raise ValidationError(f"outcome vectors differ in length: {len(p)} vs {len(q)}")
    if not p:
        raise ValidationError("outcome vectors must be non-empty")
    agree = sum(
        1
        for x, y in zip(p, q)
        if not x.is_failure and not y.is_failure and compare_values(x.value, y.value)
    )
    return agree / len(p)


def expected_as_outcomes(problem: Problem) -> tuple[CaseOutcome, ...]:
    """The problem's expected outputs, viewed as an all-Value outcome vector."""
    return tuple(
        CaseOutcome(status=OutcomeStatus.VALUE, value=c.expected) for c in problem.test_cases
    )


def find_default_shim() -> Path | None:
    """Locate the sandbox shim script: env override, CWD, then repo checkout."""
    env = os.environ.get("PATCHGATE_SHIM")
    candidates = [Path(env)] if env else []
    candidates.append(Path.cwd() / "shim" / "shim_runner.py")
    candidates.append(Path(__file__).resolve().parents[2] / "shim" / "shim_runner.py")
    for c in candidates:
        if c.is_file():
            return c
    return None


class SubprocessExecutor:
    """Runs program texts in a fresh shim subprocess per trial."""

    def __init__(self, shim_path: str | Path, python: str | None = None) -> None:
        self.shim_path = Path(shim_path)
        self.python = python or sys.executable
        if not self.shim_path.is_file():
            raise ExecutionEnvironmentError(f"shim script not found: {self.shim_path}")

    def _spawn(self) -> subprocess.Popen:
        env = dict(os.environ)
        env["PYTHONHASHSEED"] = "0"
        try:
            return subprocess.Popen(
                [self.python, str(self.shim_path)],
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.DEVNULL,
                text=True,
                encoding="utf-8",
                env=env,
            )
        except OSError as exc:
            raise ExecutionEnvironmentError(f"failed to launch shim: {exc}") from exc

    def run(
        self,
        source: str,
        entry_point: str,
        adapter: str | None,
        cases: Sequence[TestCase],
        limits: Limits,
    ) -> tuple[tuple[CaseOutcome, ...], tuple[int, ...]]:
        outcomes: list[CaseOutcome | None] = [None] * len(cases)
        timings = [0] * len(cases)
        start_index = 0
        while start_index < len(cases):
            consumed = self._run_batch(
                source, entry_point, adapter, cases, start_index, limits, outcomes, timings
            )
            start_index += consumed
        return tuple(outcomes), tuple(timings)  # type: ignore[arg-type]

    def _run_batch(
        self,
        source: str,
        entry_point: str,
        adapter: str | None,
        cases: Sequence[TestCase],
        start_index: int,
        limits: Limits,
        outcomes: list,
        timings: list[int],
    ) -> int:
        """Run cases[start_index:] in one subprocess; returns cases consumed.

        A timeout kills the process and returns early so the caller can
        restart with the remaining cases.
        """
        batch = cases[start_index:]
        proc = self._spawn()
        job = {
            "source": source,
            "entry_point": entry_point,
            "adapter": adapter,
            "cases": [{"input": c.input, "expected": c.expected} for c in batch],
        }
        lines: queue.Queue = queue.Queue()

        def pump() -> None:
            assert proc.stdout is not None
            for line in proc.stdout:
                lines.put(line)
            lines.put(None)

        reader = threading.Thread(target=pump, daemon=True)
        reader.start()
        try:
            assert proc.stdin is not None
            proc.stdin.write(json.dumps(job) + "\n")
            proc.stdin.close()
        except (BrokenPipeError, OSError):
            pass  # process died instantly; handled below via missing lines

        timeout_s = limits.timeout_ms / 1000.0
        consumed = 0
        try:
            for local_k in range(len(batch)):
                k = start_index + local_k
                started = time.monotonic()
                try:
                    line = lines.get(timeout=timeout_s)
                except queue.Empty:
                    proc.kill()
                    outcomes[k] = CaseOutcome(
                        OutcomeStatus.TIMEOUT, detail=f"exceeded {limits.timeout_ms} ms"
                    )
                    timings[k] = limits.timeout_ms
                    return consumed + 1
                timings[k] = int((time.monotonic() - started) * 1000)
                if line is None:
                    # subprocess died without finishing the batch; blame the
                    # candidate for this and all remaining cases
                    for rest in range(k, len(cases)):
                        outcomes[rest] = CaseOutcome(
                            OutcomeStatus.RUNTIME_ERROR, detail="sandbox exited unexpectedly"
                        )
                    return len(batch) - local_k + consumed
                outcomes[k] = self._parse_line(line, local_k, limits)
                consumed += 1
            return consumed
        finally:
            proc.kill()
            proc.wait()

    @staticmethod
    def _parse_line(line: str, expected_case: int, limits: Limits) -> CaseOutcome:
        if len(line.encode("utf-8")) > limits.max_output_bytes:
            return CaseOutcome(
                OutcomeStatus.RUNTIME_ERROR,
                detail=f"output exceeds {limits.max_output_bytes} bytes",
            )
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ProtocolError(f"malformed shim output: {line!r}") from exc
        if not isinstance(record, dict) or "status" not in record or "case" not in record:
            raise ProtocolError(f"incomplete shim record: {line!r}")
        if record.get("status") == "protocol_error":
            raise ProtocolError(f"shim rejected job: {record.get('detail', '')}")
        if record["case"] != expected_case:
            raise ProtocolError(
                f"out-of-order shim record: expected case {expected_case}, got {record['case']}"
            )
        status_map = {
            "value": OutcomeStatus.VALUE,
            "error": OutcomeStatus.RUNTIME_ERROR,
            "load_error": OutcomeStatus.LOAD_ERROR,
        }
        status = status_map.get(record["status"])
        if status is None:
            raise ProtocolError(f"unknown shim status: {record['status']!r}")
        return CaseOutcome(status, value=record.get("value"), detail=record.get("detail", ""))


class StubExecutor:
    """Replays pre-recorded outcome vectors, keyed by exact source text.

    Lets the full analysis/gate pipeline run without any sandbox.
    """

    def __init__(self, recorded: dict[str, Sequence[CaseOutcome]]) -> None:
        self.recorded = dict(recorded)

    def run(self, source, entry_point, adapter, cases, limits):
        try:
            outcomes = tuple(self.recorded[source])
        except KeyError:
            raise ExecutionEnvironmentError("no recorded outcomes for source") from None
        return outcomes, tuple(0 for _ in outcomes)


def run_program(
    source: str,
    problem: Problem,
    executor,
    limits: Limits | None = None,
) -> tuple[CaseOutcome, ...]:
    """Execute ``source`` against all of the problem's test cases."""
    limits = limits or Limits()
    outcomes, _ = executor.run(
        source, problem.entry_point, problem.adapter, problem.test_cases, limits
    )
    return outcomes


def evaluate_trial(
    candidate,
    problem: Problem,
    executor,
    limits: Limits | None = None,
) -> TrialResult:
    """Run one patch candidate against the problem's full suite."""
    limits = limits or Limits()
    if not candidate.extracted_code.strip():
        outcomes = tuple(
            CaseOutcome(OutcomeStatus.LOAD_ERROR, detail="empty patch") for _ in problem.test_cases
        )
        timings: tuple[int, ...] = tuple(0 for _ in problem.test_cases)
    else:
        outcomes, timings = executor.run(
            candidate.extracted_code, problem.entry_point, problem.adapter,
            problem.test_cases, limits,
        )
    pass_all = all(
        outcome_matches_expected(o, c.expected) for o, c in zip(outcomes, problem.test_cases)
    )
    return TrialResult(
        problem=problem.name,
        temperature=candidate.temperature,
        trial_index=candidate.trial_index,
        outcomes=outcomes,
        pass_all=pass_all,
        wall_time_ms=timings,
    )
