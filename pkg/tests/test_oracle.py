from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from patchgate.corpus import Problem
from patchgate.corpus import TestCase as Case
from patchgate.errors import ExecutionEnvironmentError, ValidationError
from patchgate.oracle import (
    CaseOutcome,
    Limits,
    OutcomeStatus,
    StubExecutor,
    SubprocessExecutor,
    compare_values,
    evaluate_trial,
    expected_as_outcomes,
    outcome_matches_expected,
    outcome_oer,
    run_program,
)

from .conftest import make_candidate


def problem_with(source_cases, entry_point="f", adapter=None, name="p"):
    return Problem(
        name=name,
        buggy_source="def f(x):\n    return None\n",
        reference_source="def f(x):\n    return x\n",
        entry_point=entry_point,
        test_cases=tuple(Case(list(inp), exp) for inp, exp in source_cases),
        adapter=adapter,
    )


class TestCompareValues:
    def test_exact_scalars(self):
        assert compare_values(3, 3)
        assert compare_values("a", "a")
        assert compare_values(None, None)
        assert not compare_values(3, 4)

    def test_int_float_interchange(self):
        assert compare_values(2, 2.0)
        assert compare_values(2.0000000001, 2)

    def test_float_tolerance(self):
        assert compare_values(0.1 + 0.2, 0.3)
        assert not compare_values(0.3001, 0.3)

    def test_relative_tolerance_scales(self):
        assert compare_values(1e12 + 1.0, 1e12)
        assert not compare_values(1e12 + 1e7, 1e12)

    def test_bool_is_not_number(self):
        assert not compare_values(True, 1)
        assert not compare_values(0, False)
        assert compare_values(True, True)

    def test_nested_structures(self):
        assert compare_values([1, [2.0, {"a": 3}]], [1.0, [2, {"a": 3.0}]])
        assert not compare_values([1, 2], [2, 1])
        assert not compare_values({"a": 1}, {"b": 1})
        assert not compare_values([1], [1, 1])

    def test_type_confusion_rejected(self):
        assert not compare_values("1", 1)
        assert not compare_values([1], 1)

    @given(st.recursive(
        st.none() | st.booleans() | st.integers(-10, 10) | st.text(max_size=3),
        lambda inner: st.lists(inner, max_size=3),
        max_leaves=6,
    ))
    def test_reflexive(self, value):
        assert compare_values(value, value)


class TestOutcomeOer:
    def _v(self, *vals):
        return [CaseOutcome(OutcomeStatus.VALUE, value=v) for v in vals]

    def test_agreement(self):
        assert outcome_oer(self._v(1, 2), self._v(1, 2)) == 1.0

    def test_failures_never_equivalent(self):
        fail = CaseOutcome(OutcomeStatus.TIMEOUT)
        assert outcome_oer([fail, fail], [fail, fail]) == 0.0

    def test_mixed(self):
        p = self._v(1, 2) + [CaseOutcome(OutcomeStatus.RUNTIME_ERROR)]
        q = self._v(1, 9) + [CaseOutcome(OutcomeStatus.RUNTIME_ERROR)]
        assert outcome_oer(p, q) == pytest.approx(1 / 3)

    def test_numeric_tolerance_applies(self):
        assert outcome_oer(self._v(0.1 + 0.2), self._v(0.3)) == 1.0

    def test_length_mismatch(self):
        with pytest.raises(ValidationError):
            outcome_oer(self._v(1), self._v(1, 2))

    def test_expected_as_outcomes_is_self_equivalent(self):
        p = problem_with([([1], 1), ([2], 2)])
        vec = expected_as_outcomes(p)
        assert outcome_oer(vec, vec) == 1.0


class TestSubprocessExecutor:
    def test_missing_shim_rejected(self, tmp_path):
        with pytest.raises(ExecutionEnvironmentError):
            SubprocessExecutor(tmp_path / "no_such_shim.py")

    def test_correct_program(self, executor):
        p = problem_with([([2], 4), ([5], 25)])
        outcomes = run_program("def f(x):\n    return x * x\n", p, executor)
        assert [o.value for o in outcomes] == [4, 25]
        assert all(o.status is OutcomeStatus.VALUE for o in outcomes)

    def test_runtime_error_isolated_per_case(self, executor):
        p = problem_with([([0], 0), ([1], 1)])
        source = "def f(x):\n    return 1 // x if x == 0 else x\n"
        outcomes = run_program(source, p, executor)
        assert outcomes[0].status is OutcomeStatus.RUNTIME_ERROR
        assert "ZeroDivisionError" in outcomes[0].detail
        # the crash on case 0 does not prevent case 1 from running
        assert outcomes[1].status is OutcomeStatus.VALUE
        assert outcomes[1].value == 1

    def test_syntax_error_is_load_error(self, executor):
        p = problem_with([([1], 1), ([2], 2)])
        outcomes = run_program("def f(x:\n", p, executor)
        assert all(o.status is OutcomeStatus.LOAD_ERROR for o in outcomes)

    def test_missing_entry_point_is_load_error(self, executor):
        p = problem_with([([1], 1)])
        outcomes = run_program("def other(x):\n    return x\n", p, executor)
        assert outcomes[0].status is OutcomeStatus.LOAD_ERROR

    def test_timeout_kills_and_continues(self, executor):
        p = problem_with([([0], 0), ([1], 1)])
        source = (
            "def f(x):\n"
            "    if x == 0:\n"
            "        while True:\n"
            "            pass\n"
            "    return x\n"
        )
        outcomes = run_program(source, p, executor, Limits(timeout_ms=400))
        assert outcomes[0].status is OutcomeStatus.TIMEOUT
        # a fresh subprocess finishes the remaining case
        assert outcomes[1].status is OutcomeStatus.VALUE
        assert outcomes[1].value == 1

    def test_candidate_stdout_does_not_corrupt_protocol(self, executor):
        p = problem_with([([3], 3)])
        source = "def f(x):\n    print('chatter', x)\n    return x\n"
        outcomes = run_program(source, p, executor)
        assert outcomes[0].status is OutcomeStatus.VALUE
        assert outcomes[0].value == 3

    def test_hard_exit_blames_remaining_cases(self, executor):
        p = problem_with([([0], 0), ([1], 1)])
        source = "import os\ndef f(x):\n    os._exit(9)\n"
        outcomes = run_program(source, p, executor)
        assert all(o.status is OutcomeStatus.RUNTIME_ERROR for o in outcomes)
        assert "sandbox exited" in outcomes[0].detail

    def test_deep_recursion_allowed(self, executor):
        p = problem_with([([5000], 5000)])
        source = (
            "def f(n):\n"
            "    def down(k):\n"
            "        return 0 if k == 0 else 1 + down(k - 1)\n"
            "    return down(n)\n"
        )
        outcomes = run_program(source, p, executor)
        assert outcomes[0].status is OutcomeStatus.VALUE
        assert outcomes[0].value == 5000

    def test_linked_list_adapter_round_trip(self, executor):
        p = problem_with(
            [([[1, 2, 3]], [3, 2, 1]), ([[]], [])],
            entry_point="reverse_linked_list",
            adapter="linked_list",
        )
        source = (
            "def reverse_linked_list(node):\n"
            "    prevnode = None\n"
            "    while node:\n"
            "        nextnode = node.successor\n"
            "        node.successor = prevnode\n"
            "        prevnode = node\n"
            "        node = nextnode\n"
            "    return prevnode\n"
        )
        outcomes = run_program(source, p, executor)
        assert [o.value for o in outcomes] == [[3, 2, 1], []]


class TestEvaluateTrial:
    def test_pass_all_true(self, executor):
        p = problem_with([([1], 2), ([3], 4)])
        candidate = make_candidate("def f(x):\n    return x + 1\n", temperature=0.5, trial=2)
        result = evaluate_trial(candidate, p, executor)
        assert result.pass_all
        assert result.temperature == 0.5
        assert result.trial_index == 2
        assert len(result.outcomes) == len(result.wall_time_ms) == 2

    def test_pass_all_false_on_wrong_value(self, executor):
        p = problem_with([([1], 2)])
        result = evaluate_trial(make_candidate("def f(x):\n    return x\n"), p, executor)
        assert not result.pass_all

    def test_empty_patch_is_load_error_without_sandbox(self):
        p = problem_with([([1], 2), ([3], 4)])
        result = evaluate_trial(make_candidate("   \n"), p, executor=None)
        assert not result.pass_all
        assert all(o.status is OutcomeStatus.LOAD_ERROR for o in result.outcomes)

    def test_stub_executor(self):
        p = problem_with([([1], 2)])
        stub = StubExecutor({"CODE": (CaseOutcome(OutcomeStatus.VALUE, value=2),)})
        result = evaluate_trial(make_candidate("CODE"), p, stub)
        assert result.pass_all
        with pytest.raises(ExecutionEnvironmentError):
            evaluate_trial(make_candidate("UNKNOWN"), p, stub)


class TestOutcomeMatchesExpected:
    def test_value_match(self):
        assert outcome_matches_expected(CaseOutcome(OutcomeStatus.VALUE, value=2.0), 2)

    def test_failure_never_matches(self):
        assert not outcome_matches_expected(CaseOutcome(OutcomeStatus.TIMEOUT), None)
        assert not outcome_matches_expected(
            CaseOutcome(OutcomeStatus.RUNTIME_ERROR, value=2), 2
        )
