from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from patchgate.errors import ConfigError, ValidationError
from patchgate.gate import (
    GateDecision,
    SelectionPolicy,
    Verdict,
    candidate_ref,
    cluster_patches,
    decide,
    decision_to_json_dict,
    select_patch,
)
from patchgate.metrics import levenshtein_similarity
from patchgate.oracle import TrialResult

from .conftest import make_candidate


def result_for(candidate, pass_all: bool) -> TrialResult:
    return TrialResult(
        problem=candidate.problem_name,
        temperature=candidate.temperature,
        trial_index=candidate.trial_index,
        outcomes=(),
        pass_all=pass_all,
        wall_time_ms=(),
    )


def group(codes: list[str], passing: list[bool]):
    candidates = [make_candidate(code, trial=k) for k, code in enumerate(codes)]
    results = [result_for(c, p) for c, p in zip(candidates, passing)]
    return candidates, results


class TestClusterPatches:
    def test_identical_codes_one_cluster(self):
        candidates = [make_candidate("same", trial=k) for k in range(4)]
        clusters = cluster_patches(candidates)
        assert len(clusters) == 1
        assert clusters[0].cohesion == 1.0
        assert len(clusters[0].members) == 4

    def test_dissimilar_codes_split(self):
        candidates = [
            make_candidate("aaaaaaaa", trial=0),
            make_candidate("bbbbbbbb", trial=1),
        ]
        clusters = cluster_patches(candidates, tau=0.7)
        assert len(clusters) == 2
        assert all(len(cl.members) == 1 for cl in clusters)
        assert all(cl.cohesion == 1.0 for cl in clusters)

    def test_near_duplicates_merge(self):
        candidates = [
            make_candidate("x = 1\ny = 2\nz = 3\n", trial=0),
            make_candidate("x = 1\ny = 2\nz = 4\n", trial=1),
        ]
        clusters = cluster_patches(candidates, tau=0.7)
        assert len(clusters) == 1

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            cluster_patches([])

    def test_bad_tau_rejected(self):
        with pytest.raises(ValidationError):
            cluster_patches([make_candidate("x")], tau=1.5)

    def test_tau_zero_single_cluster(self):
        candidates = [make_candidate(c, trial=k) for k, c in enumerate(["aa", "zz", "qq"])]
        assert len(cluster_patches(candidates, tau=0.0)) == 1

    codes = st.lists(
        st.sampled_from(["aaaa", "aaab", "bbbb", "abab"]), min_size=1, max_size=6
    )

    @given(codes, st.sampled_from([0.0, 0.5, 0.7, 1.0]))
    @settings(max_examples=150)
    def test_partition_and_tau_bound(self, codes, tau):
        candidates = [make_candidate(c, trial=k) for k, c in enumerate(codes)]
        clusters = cluster_patches(candidates, tau)
        flattened = [m for cl in clusters for m in cl.members]
        # exact partition: every candidate in exactly one cluster
        assert sorted(candidate_ref(m) for m in flattened) == sorted(
            candidate_ref(c) for c in candidates
        )
        for cl in clusters:
            assert cl.representative in cl.members
            for m in cl.members:
                assert (
                    levenshtein_similarity(
                        m.extracted_code, cl.representative.extracted_code
                    )
                    >= tau
                )

    @given(codes)
    @settings(max_examples=100)
    def test_representative_is_medoid(self, codes):
        candidates = [make_candidate(c, trial=k) for k, c in enumerate(codes)]
        for cl in cluster_patches(candidates, 0.7):
            totals = {
                candidate_ref(m): sum(
                    levenshtein_similarity(m.extracted_code, o.extracted_code)
                    for o in cl.members
                    if o is not m
                )
                for m in cl.members
            }
            assert totals[candidate_ref(cl.representative)] == max(totals.values())


class TestSelectPatch:
    def test_majority_needs_strict_majority(self):
        candidates, results = group(["a", "a", "a", "a"], [True, True, False, False])
        assert select_patch(candidates, results, "majority") is None
        candidates, results = group(["a", "a", "a"], [True, True, False])
        selected = select_patch(candidates, results, "majority")
        assert selected is not None and selected.extracted_code == "a"

    def test_majority_takes_largest_passing_cluster(self):
        candidates, results = group(
            ["fix_a", "fix_a", "fix_a", "zzzzz", "qqqqq"],
            [True, True, True, True, False],
        )
        selected = select_patch(candidates, results, "majority")
        assert selected.extracted_code == "fix_a"

    def test_first_passing_scan_order(self):
        candidates, results = group(["one", "two", "three"], [False, True, True])
        selected = select_patch(candidates, results, "first_passing")
        assert selected.trial_index == 1

    def test_best_cluster_weighs_cohesion_and_size(self):
        candidates, results = group(
            ["same", "same", "other_thing"], [True, True, True]
        )
        selected = select_patch(candidates, results, "best_cluster")
        assert selected.extracted_code == "same"

    def test_no_passing_returns_none(self):
        candidates, results = group(["a", "b"], [False, False])
        for policy in SelectionPolicy:
            assert select_patch(candidates, results, policy) is None

    def test_unknown_policy(self):
        candidates, results = group(["a"], [True])
        with pytest.raises(ConfigError):
            select_patch(candidates, results, "nonsense")

    def test_selected_is_always_passing(self):
        for pattern in itertools.product([False, True], repeat=3):
            candidates, results = group(["x", "y", "z"], list(pattern))
            passing_refs = {
                candidate_ref(c) for c, p in zip(candidates, pattern) if p
            }
            for policy in SelectionPolicy:
                selected = select_patch(candidates, results, policy)
                if selected is not None:
                    assert candidate_ref(selected) in passing_refs


class TestDecide:
    def test_accept_when_all_pass(self):
        candidates, results = group(["fix", "fix", "fix"], [True, True, True])
        decision = decide(candidates, results)
        assert decision.verdict is Verdict.ACCEPT
        assert decision.success_rate == 1.0
        assert decision.reasons == ()
        assert decision.selected_patch is not None

    def test_reject_below_threshold(self):
        candidates, results = group(["fix", "fix", "bad"], [True, True, False])
        decision = decide(candidates, results, oer_threshold=0.7)
        assert decision.verdict is Verdict.REJECT
        assert decision.reasons == ("success_rate 0.67 < 0.70",)

    def test_reject_no_passing_patch(self):
        candidates, results = group(["a", "b", "c"], [False, False, False])
        decision = decide(candidates, results, oer_threshold=0.0)
        assert decision.verdict is Verdict.REJECT
        assert "no passing patch under selection policy" in decision.reasons

    def test_both_reasons_reported(self):
        candidates, results = group(["a", "b", "c"], [False, False, False])
        decision = decide(candidates, results, oer_threshold=0.7)
        assert len(decision.reasons) == 2

    def test_empty_results_rejected(self):
        with pytest.raises(ValidationError):
            decide([], [])

    def test_threshold_boundary_inclusive(self):
        candidates, results = group(["f", "f", "f"], [True, True, False])
        # 2/3 >= 2/3: the threshold itself is attainable
        decision = decide(candidates, results, oer_threshold=2 / 3)
        assert decision.verdict is Verdict.ACCEPT

    def test_monotone_in_threshold(self):
        candidates, results = group(["f", "f", "f"], [True, True, False])
        verdicts = [
            decide(candidates, results, oer_threshold=t).verdict
            for t in (0.0, 0.5, 0.7, 1.0)
        ]
        # once rejected at some threshold, all higher thresholds reject too
        seen_reject = False
        for v in verdicts:
            if v is Verdict.REJECT:
                seen_reject = True
            elif seen_reject:
                pytest.fail("accept after reject as threshold increased")

    def test_json_shape(self):
        candidates, results = group(["fix", "fix", "fix"], [True, True, True])
        doc = decision_to_json_dict(decide(candidates, results))
        assert doc["verdict"] == "Accept"
        assert doc["selected_patch"] == ["demo", 0.0, 0]
        assert doc["success_rate"] == 1.0
        assert doc["clusters"][0]["members"]
        assert doc["reasons"] == []


class TestDecideExhaustive:
    def test_all_three_trial_patterns_and_thresholds(self):
        for pattern in itertools.product([False, True], repeat=3):
            candidates, results = group(["p0", "p1", "p2"], list(pattern))
            rate = sum(pattern) / 3
            for threshold in (0.5, 0.7, 1.0):
                decision = decide(candidates, results, oer_threshold=threshold)
                expect_accept = rate >= threshold and any(pattern)
                assert (decision.verdict is Verdict.ACCEPT) == expect_accept or (
                    # majority policy additionally demands a strict majority
                    decision.verdict is Verdict.REJECT and 2 * sum(pattern) <= 3
                )
                if decision.verdict is Verdict.ACCEPT:
                    assert decision.selected_patch is not None
