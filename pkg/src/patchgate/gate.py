"""Admission gating: similarity clustering, test-aware patch selection, and
the accept/reject decision backed by multi-sample evidence.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ConfigError, ValidationError
from .generation import PatchCandidate
from .metrics import levenshtein_similarity
from .oracle import TrialResult

DEFAULT_TAU = 0.7
DEFAULT_OER_THRESHOLD = 0.7


class SelectionPolicy(enum.Enum):
    MAJORITY = "majority"
    FIRST_PASSING = "first_passing"
    BEST_CLUSTER = "best_cluster"


@dataclass(frozen=True)
class PatchCluster:
    members: tuple[PatchCandidate, ...]
    representative: PatchCandidate
    cohesion: float


class Verdict(enum.Enum):
    ACCEPT = "Accept"
    REJECT = "Reject"


@dataclass(frozen=True)
class GateDecision:
    verdict: Verdict
    selected_patch: PatchCandidate | None
    success_rate: float
    threshold: float
    clusters: tuple[PatchCluster, ...]
    reasons: tuple[str, ...]


def candidate_ref(c: PatchCandidate) -> tuple[str, float, int]:
    return (c.problem_name, c.temperature, c.trial_index)


def _medoid(members: Sequence[PatchCandidate]) -> PatchCandidate:
    """Member maximizing total similarity to co-members, first-scanned wins ties."""
    best = members[0]
    best_total = None
    for m in members:
        total = sum(
            levenshtein_similarity(m.extracted_code, other.extracted_code)
            for other in members
            if other is not m
        )
        if best_total is None or total > best_total:
            best, best_total = m, total
    return best


def _cohesion(members: Sequence[PatchCandidate]) -> float:
    if len(members) < 2:
        return 1.0
    sims = [
        levenshtein_similarity(members[i].extracted_code, members[j].extracted_code)
        for i in range(len(members))
        for j in range(i + 1, len(members))
    ]
    return sum(sims) / len(sims)


def cluster_patches(candidates: Sequence[PatchCandidate], tau: float = DEFAULT_TAU) -> list[PatchCluster]:
    """Leader clustering with medoid refinement.

    Candidates are scanned in the given order; each joins the first cluster
    whose current representative is at least ``tau``-similar, otherwise it
    opens a new cluster. Representatives are then re-centered on the medoid
    and any member falling below ``tau`` from its representative is split
    into its own cluster, until stable.
    """
    if not candidates:
        raise ValidationError("cannot cluster an empty candidate list")
    if not (0.0 <= tau <= 1.0):
        raise ValidationError(f"tau out of range: {tau}")

    clusters: list[list[PatchCandidate]] = []
    reps: list[PatchCandidate] = []
    for c in candidates:
        for idx, rep in enumerate(reps):
            if levenshtein_similarity(c.extracted_code, rep.extracted_code) >= tau:
                clusters[idx].append(c)
                break
        else:
            clusters.append([c])
            reps.append(c)

    # medoid refinement: re-center, then evict members the new center cannot hold
    stable = False
    while not stable:
        stable = True
        next_clusters: list[list[PatchCandidate]] = []
        for members in clusters:
            rep = _medoid(members)
            kept, evicted = [], []
            for m in members:
                if m is rep or levenshtein_similarity(
                    m.extracted_code, rep.extracted_code
                ) >= tau:
                    kept.append(m)
                else:
                    evicted.append(m)
            next_clusters.append(kept)
            for loner in evicted:
                next_clusters.append([loner])
                stable = False
        clusters = next_clusters

    return [
        PatchCluster(members=tuple(members), representative=_medoid(members), cohesion=_cohesion(members))
        for members in clusters
    ]


def _passing_set(results: Iterable[TrialResult]) -> set[tuple[str, float, int]]:
    return {(r.problem, r.temperature, r.trial_index) for r in results if r.pass_all}


def select_patch(
    candidates: Sequence[PatchCandidate],
    results: Sequence[TrialResult],
    policy: SelectionPolicy | str = SelectionPolicy.MAJORITY,
    tau: float = DEFAULT_TAU,
) -> PatchCandidate | None:
    """Pick the patch to ship, or None when nothing qualifies.

    majority: requires a strict majority of trials to pass, then takes the
    medoid of the largest all-passing cluster. first_passing: earliest
    passing candidate in scan order. best_cluster: medoid of the passing
    cluster maximizing cohesion * size.
    """
    if isinstance(policy, str):
        try:
            policy = SelectionPolicy(policy)
        except ValueError:
            raise ConfigError(f"unknown selection policy: {policy!r}") from None

    passing_refs = _passing_set(results)
    passing = [c for c in candidates if candidate_ref(c) in passing_refs]
    if not passing:
        return None

    if policy is SelectionPolicy.FIRST_PASSING:
        return passing[0]

    if policy is SelectionPolicy.MAJORITY:
        if 2 * len(passing) <= len(candidates):
            return None
        clusters = cluster_patches(passing, tau)
        largest = max(clusters, key=lambda cl: len(cl.members))
        return largest.representative

    if policy is SelectionPolicy.BEST_CLUSTER:
        clusters = cluster_patches(passing, tau)
        best = max(clusters, key=lambda cl: cl.cohesion * len(cl.members))
        return best.representative

    raise ConfigError(f"unknown selection policy: {policy!r}")


def decide(
    candidates: Sequence[PatchCandidate],
    results: Sequence[TrialResult],
    oer_threshold: float = DEFAULT_OER_THRESHOLD,
    policy: SelectionPolicy | str = SelectionPolicy.MAJORITY,
    tau: float = DEFAULT_TAU,
) -> GateDecision:
    """Accept only when the multi-sample success rate clears the threshold
    and a concrete passing patch exists under the selection policy.
    """
    if not results:
        raise ValidationError("gate needs at least one trial result")
    passing = sum(1 for r in results if r.pass_all)
    success_rate = passing / len(results)
    clusters = tuple(cluster_patches(candidates, tau)) if candidates else ()
    selected = select_patch(candidates, results, policy, tau)

    reasons: list[str] = []
    if success_rate < oer_threshold:
        reasons.append(f"success_rate {success_rate:.2f} < {oer_threshold:.2f}")
    if selected is None:
        reasons.append("no passing patch under selection policy")

    verdict = Verdict.ACCEPT if not reasons else Verdict.REJECT
    return GateDecision(
        verdict=verdict,
        selected_patch=selected,
        success_rate=success_rate,
        threshold=oer_threshold,
        clusters=clusters,
        reasons=tuple(reasons),
    )


def decision_to_json_dict(decision: GateDecision) -> dict:
    return {
        "verdict": decision.verdict.value,
        "selected_patch": (
            None if decision.selected_patch is None else list(candidate_ref(decision.selected_patch))
        ),
        "success_rate": decision.success_rate,
        "threshold": decision.threshold,
        "clusters": [
            {
                "members": [list(candidate_ref(m)) for m in cl.members],
                "representative": list(candidate_ref(cl.representative)),
                "cohesion": cl.cohesion,
            }
            for cl in decision.clusters
        ],
        "reasons": list(decision.reasons),
    }
