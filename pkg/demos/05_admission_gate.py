#!/usr/bin/env python3
"""Should CI admit this fix?

Builds a small multi-sample evidence set by hand - three candidate patches
with their trial verdicts - then shows clustering, patch selection, and the
accept/reject decision at different thresholds.
"""

from __future__ import annotations

from patchgate import PatchCandidate, TrialResult, cluster_patches, decide

GOOD_FIX = "def f(x):\n    return x + 1\n"
GOOD_FIX_RENAMED = "def f(y):\n    return y + 1\n"
BROKEN_FIX = "def f(x):\n    raise NotImplementedError\n"


def candidate(code: str, trial: int) -> PatchCandidate:
    return PatchCandidate(
        problem_name="demo",
        temperature=0.0,
        trial_index=trial,
        raw_response=code,
        extracted_code=code,
        cassette_key=f"demo-{trial}",
    )


def result(c: PatchCandidate, passed: bool) -> TrialResult:
    return TrialResult(
        problem=c.problem_name,
        temperature=c.temperature,
        trial_index=c.trial_index,
        outcomes=(),
        pass_all=passed,
        wall_time_ms=(),
    )


def main() -> None:
    candidates = [
        candidate(GOOD_FIX, 0),
        candidate(GOOD_FIX_RENAMED, 1),
        candidate(BROKEN_FIX, 2),
    ]
    results = [result(c, passed) for c, passed in zip(candidates, [True, True, False])]

    print("clusters at tau=0.7")
    print("-" * 40)
    for k, cluster in enumerate(cluster_patches(candidates, tau=0.7)):
        members = [m.trial_index for m in cluster.members]
        print(
            f"  cluster {k}: trials {members}, cohesion {cluster.cohesion:.2f}, "
            f"representative trial {cluster.representative.trial_index}"
        )
    print()
    print("The two equivalent fixes cluster together; the broken one stands")
    print("alone. The representative is the cluster medoid.")
    print()

    print("gate decisions (2 of 3 trials passing)")
    print("-" * 40)
    for threshold in (0.5, 0.7, 1.0):
        decision = decide(candidates, results, oer_threshold=threshold)
        selected = (
            f"trial {decision.selected_patch.trial_index}"
            if decision.selected_patch
            else "none"
        )
        reasons = f"  ({'; '.join(decision.reasons)})" if decision.reasons else ""
        print(
            f"  threshold {threshold:.1f}: {decision.verdict.value}, "
            f"selected patch: {selected}{reasons}"
        )


if __name__ == "__main__":
    main()
