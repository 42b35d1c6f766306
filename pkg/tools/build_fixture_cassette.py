#!/usr/bin/env python3
"""Regenerate the bundled replay cassette.

For every (problem, temperature, trial) the cassette holds a synthetic chat
response: the reference source when the trial is meant to pass, the buggy
source when it is meant to fail, per fixtures/reference_run_patterns.json.
Responses are wrapped in varying amounts of prose so code extraction is
exercised. Record timestamps are pinned for byte-stable output.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from patchgate import corpus, generation  # noqa: E402

FIXED_TIMESTAMP = "2026-01-01T00:00:00+00:00"

WRAPPERS = [
    "```python\n{code}\n```",
    "Here is the corrected version:\n\n```python\n{code}\n```",
    (
        "The bug is in the loop condition. After fixing it, the working "
        "version is:\n\n```python\n{code}\n```\n\nThis now handles every case."
    ),
]


def response_for(problem: corpus.Problem, passes: bool, trial: int) -> str:
    code = problem.reference_source if passes else problem.buggy_source
    return WRAPPERS[trial % len(WRAPPERS)].format(code=code.rstrip("\n"))


def main() -> None:
    fixture = json.loads((ROOT / "fixtures" / "reference_run_patterns.json").read_text())
    patterns = fixture["patterns"]
    trials = fixture["trials_per_temperature"]

    cassette_path = ROOT / "fixtures" / "tables_cassette.jsonl"
    cassette_path.unlink(missing_ok=True)
    cassette = generation.Cassette(cassette_path)

    plan = generation.SamplingPlan(
        temperatures=tuple(float(t) for t in patterns),
        trials_per_temperature=trials,
    )
    problems = corpus.load_corpus(ROOT / "corpus")
    for problem in problems:
        prompt = generation.render_prompt(plan.prompt_template, problem)
        for temp_key, per_problem in patterns.items():
            temperature = float(temp_key)
            successes = per_problem[problem.name]
            for trial in range(trials):
                key = generation.cassette_key(plan.model_id, temperature, prompt, trial)
                cassette.append(
                    key,
                    generation.request_digest(plan.model_id, temperature, prompt),
                    response_for(problem, trial < successes, trial),
                    recorded_at=FIXED_TIMESTAMP,
                )
    print(f"wrote {cassette_path} ({len(cassette.entries)} entries)")


if __name__ == "__main__":
    main()
