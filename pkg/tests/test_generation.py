from __future__ import annotations

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from patchgate.corpus import Problem
from patchgate.errors import CassetteConflict, CassetteMiss, TemplateError
from patchgate.generation import (
    DEFAULT_PROMPT_TEMPLATE,
    Cassette,
    RecordingProvider,
    ReplayProvider,
    SamplingPlan,
    cassette_key,
    extract_code,
    render_prompt,
    request_digest,
    sample_patches,
)


def tiny_problem(buggy: str = "def f(x):\n    return x\n") -> Problem:
    return Problem(
        name="tiny",
        buggy_source=buggy,
        reference_source="def f(x):\n    return x + 1\n",
        entry_point="f",
        test_cases=(),
    )


class TestRenderPrompt:
    def test_default_template(self):
        prompt = render_prompt(DEFAULT_PROMPT_TEMPLATE, tiny_problem())
        assert "def f(x):\n    return x\n" in prompt
        assert "<code>" not in prompt
        assert prompt.startswith("The following code contains an error.")

    def test_missing_placeholder(self):
        with pytest.raises(TemplateError, match="exactly one"):
            render_prompt("fix this please", tiny_problem())

    def test_duplicate_placeholder(self):
        with pytest.raises(TemplateError, match="found 2"):
            render_prompt("<code> and <code>", tiny_problem())


class TestExtractCode:
    def test_bare_fence(self):
        assert extract_code("```python\ndef f():\n    pass\n```") == "def f():\n    pass"

    def test_fence_without_language(self):
        assert extract_code("```\nx = 1\n```") == "x = 1"

    def test_prose_before_and_after_fence(self):
        raw = "Sure! Here you go:\n\n```python\nx = 1\n```\n\nHope that helps."
        assert extract_code(raw) == "x = 1"

    def test_last_fence_wins(self):
        raw = "```python\nwrong = 1\n```\nActually, use this:\n```python\nright = 2\n```"
        assert extract_code(raw) == "right = 2"

    def test_unterminated_fence(self):
        assert extract_code("```python\nx = 1\n") == "x = 1"

    def test_no_fence_strips_prose(self):
        raw = "Here is the fixed function.\ndef f(x):\n    return x + 1\nLet me know."
        assert extract_code(raw) == "def f(x):\n    return x + 1"

    def test_no_fence_pure_code(self):
        code = "def f(x):\n    return x + 1"
        assert extract_code(code) == code

    def test_trailing_whitespace_trimmed(self):
        assert extract_code("```\nx = 1   \ny = 2\t\n```") == "x = 1\ny = 2"

    def test_crlf_normalized(self):
        assert extract_code("```python\r\nx = 1\r\n```") == "x = 1"

    def test_empty_response(self):
        assert extract_code("") == ""

    @given(st.text(max_size=200))
    def test_idempotent(self, raw):
        once = extract_code(raw)
        assert extract_code(once) == once


class TestSamplingPlan:
    def test_defaults(self):
        plan = SamplingPlan()
        assert plan.temperatures == (0.0, 0.5, 1.0)
        assert plan.trials_per_temperature == 3

    def test_empty_temperatures(self):
        with pytest.raises(ValueError):
            SamplingPlan(temperatures=())

    def test_out_of_range_temperature(self):
        with pytest.raises(ValueError):
            SamplingPlan(temperatures=(2.5,))

    def test_zero_trials(self):
        with pytest.raises(ValueError):
            SamplingPlan(trials_per_temperature=0)


class TestCassetteKeys:
    def test_stable(self):
        assert cassette_key("m", 0.5, "p", 1) == cassette_key("m", 0.5, "p", 1)

    def test_distinguishes_every_component(self):
        base = cassette_key("m", 0.5, "p", 1)
        assert cassette_key("m2", 0.5, "p", 1) != base
        assert cassette_key("m", 0.7, "p", 1) != base
        assert cassette_key("m", 0.5, "q", 1) != base
        assert cassette_key("m", 0.5, "p", 2) != base

    def test_request_digest_ignores_trial(self):
        assert request_digest("m", 0.5, "p") == request_digest("m", 0.5, "p")


class TestCassette:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "c.jsonl"
        cassette = Cassette(path)
        cassette.append("k1", "d1", "response one")
        cassette.append("k2", "d2", "response two")
        reloaded = Cassette(path)
        assert reloaded.response_for("k1") == "response one"
        assert reloaded.response_for("k2") == "response two"
        assert reloaded.digest() == cassette.digest()

    def test_duplicate_append_is_noop(self, tmp_path):
        path = tmp_path / "c.jsonl"
        cassette = Cassette(path)
        cassette.append("k", "d", "same")
        cassette.append("k", "d", "same")
        assert len(path.read_text().splitlines()) == 1

    def test_conflicting_append_rejected(self, tmp_path):
        cassette = Cassette(tmp_path / "c.jsonl")
        cassette.append("k", "d", "one")
        with pytest.raises(CassetteConflict):
            cassette.append("k", "d", "two")

    def test_digest_independent_of_timestamps(self, tmp_path):
        a = Cassette(tmp_path / "a.jsonl")
        a.append("k", "d", "resp", recorded_at="2020-01-01T00:00:00+00:00")
        b = Cassette(tmp_path / "b.jsonl")
        b.append("k", "d", "resp", recorded_at="2030-12-31T23:59:59+00:00")
        assert a.digest() == b.digest()

    def test_blank_lines_ignored(self, tmp_path):
        path = tmp_path / "c.jsonl"
        entry = {"key": "k", "request_digest": "d", "response_text": "r", "recorded_at": "t"}
        path.write_text("\n" + json.dumps(entry) + "\n\n")
        assert Cassette(path).response_for("k") == "r"


class _ScriptedProvider:
    """Returns canned responses and records the keys it was asked for."""

    def __init__(self, response: str = "```python\nfixed = True\n```"):
        self.response = response
        self.calls: list[str] = []

    def complete(self, model_id, temperature, prompt, trial_index, key, context=""):
        self.calls.append(key)
        return self.response


class TestProviders:
    def test_replay_hit(self, tmp_path):
        cassette = Cassette(tmp_path / "c.jsonl")
        cassette.append("k", "d", "resp")
        provider = ReplayProvider(cassette)
        assert provider.complete("m", 0.0, "p", 0, "k") == "resp"

    def test_replay_miss_carries_context(self, tmp_path):
        provider = ReplayProvider(Cassette(tmp_path / "c.jsonl"))
        with pytest.raises(CassetteMiss) as excinfo:
            provider.complete("m", 0.0, "p", 0, "missing", context="problem=tiny")
        assert excinfo.value.key == "missing"
        assert "problem=tiny" in str(excinfo.value)

    def test_recording_provider_captures(self, tmp_path):
        cassette = Cassette(tmp_path / "c.jsonl")
        inner = _ScriptedProvider("live answer")
        provider = RecordingProvider(inner, cassette)
        assert provider.complete("m", 0.0, "p", 0, cassette_key("m", 0.0, "p", 0)) == "live answer"
        # recorded response now replays without the inner provider
        replay = ReplayProvider(Cassette(tmp_path / "c.jsonl"))
        assert replay.complete("m", 0.0, "p", 0, cassette_key("m", 0.0, "p", 0)) == "live answer"


class TestSamplePatches:
    def test_count_and_order(self):
        plan = SamplingPlan(temperatures=(0.0, 1.0), trials_per_temperature=2)
        provider = _ScriptedProvider()
        candidates = sample_patches(tiny_problem(), plan, provider)
        assert [(c.temperature, c.trial_index) for c in candidates] == [
            (0.0, 0),
            (0.0, 1),
            (1.0, 0),
            (1.0, 1),
        ]
        assert all(c.extracted_code == "fixed = True" for c in candidates)
        assert len(set(c.cassette_key for c in candidates)) == 4

    def test_keys_match_manual_derivation(self):
        plan = SamplingPlan(temperatures=(0.5,), trials_per_temperature=1)
        provider = _ScriptedProvider()
        [candidate] = sample_patches(tiny_problem(), plan, provider)
        prompt = render_prompt(plan.prompt_template, tiny_problem())
        assert candidate.cassette_key == cassette_key(plan.model_id, 0.5, prompt, 0)

    def test_record_then_replay_identical(self, tmp_path):
        plan = SamplingPlan(temperatures=(0.0,), trials_per_temperature=3)
        cassette = Cassette(tmp_path / "c.jsonl")
        recorded = sample_patches(
            tiny_problem(), plan, RecordingProvider(_ScriptedProvider(), cassette)
        )
        replayed = sample_patches(
            tiny_problem(), plan, ReplayProvider(Cassette(tmp_path / "c.jsonl"))
        )
        assert recorded == replayed
