"""Pure similarity, dispersion, and output-equivalence metrics.

Everything in this module is stateless and safe to call concurrently.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import ValidationError

DEFAULT_LOW_THRESHOLD = 0.7


def levenshtein_distance(a: str, b: str) -> int:
    """Minimum number of single-character insertions, deletions, or
    substitutions transforming ``a`` into ``b``.

    Two-row dynamic program; substitution is free when characters match.
    """
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(cur[j - 1] + 1, prev[j] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def levenshtein_similarity(a: str, b: str) -> float:
    """Normalized similarity ``1 - distance / max(len(a), len(b))`` in [0, 1].

    Two empty strings are identical, hence similarity 1.0.
    """
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein_distance(a, b) / longest


@dataclass(frozen=True)
class SimilarityStats:
    """Dispersion summary over all pairwise similarities of a text group."""

    mean: float
    variance: float
    stddev: float
    max: float
    min: float
    low_ratio: float
    pair_count: int


def sample_variance(values: Sequence[float]) -> float:
    """Unbiased sample variance (denominator n-1); 0.0 for a single value."""
    n = len(values)
    if n < 2:
        return 0.0
    mean = sum(values) / n
    return sum((v - mean) ** 2 for v in values) / (n - 1)


def pairwise_similarity_stats(
    texts: Sequence[str], low_threshold: float = DEFAULT_LOW_THRESHOLD
) -> SimilarityStats:
    """Similarity dispersion over every unordered distinct pair of ``texts``.

    ``low_ratio`` is the fraction of pairs strictly below ``low_threshold``.
    Raises ValidationError for fewer than 2 texts: no pair exists, so the
    statistic is undefined.
    """
    n = len(texts)
    if n < 2:
        raise ValidationError(f"pairwise statistics need at least 2 texts, got {n}")
    # sorted so the stats are bit-identical under any permutation of texts
    sims = sorted(
        levenshtein_similarity(texts[i], texts[j])
        for i in range(n)
        for j in range(i + 1, n)
    )
    variance = sample_variance(sims)
    low = sum(1 for s in sims if s < low_threshold)
    return SimilarityStats(
        mean=sum(sims) / len(sims),
        variance=variance,
        stddev=math.sqrt(variance),
        max=max(sims),
        min=min(sims),
        low_ratio=low / len(sims),
        pair_count=len(sims),
    )


def oer(p: Sequence[object], q: Sequence[object], is_failure=None) -> float:
    """Fraction of positions where both outcome vectors agree.

    ``is_failure(outcome)``, when given, marks outcomes that can never count
    as agreement -- an execution failure is equivalent to nothing, not even
    another failure. Without it, plain equality decides agreement.
    """
    if len(p) != len(q):
        raise ValidationError(f"outcome vectors differ in length: {len(p)} vs {len(q)}")
    if not p:
        raise ValidationError("outcome vectors must be non-empty")
    agree = 0
    for x, y in zip(p, q):
        if is_failure is not None and (is_failure(x) or is_failure(y)):
            continue
        if x == y:
            agree += 1
    return agree / len(p)


class SuccessCategory(enum.Enum):
    FULLY_SUCCESSFUL = "Fully Successful"
    PARTIALLY_SUCCESSFUL = "Partially Successful"
    FAILED = "Failed"


def categorize(successes: int, count: int) -> SuccessCategory:
    """Map a per-trial success tally to its category.

    All trials passing is Fully Successful; a (non-unanimous) majority is
    Partially Successful; anything below a majority is Failed.
    """
    if count < 1:
        raise ValidationError("count must be positive")
    if successes < 0 or successes > count:
        raise ValidationError(f"successes {successes} out of range for count {count}")
    if successes == count:
        return SuccessCategory.FULLY_SUCCESSFUL
    if successes >= math.ceil(count / 2):
        return SuccessCategory.PARTIALLY_SUCCESSFUL
    return SuccessCategory.FAILED


def success_stats(successes: int, count: int) -> tuple[float, float, float]:
    """(mean, variance, stddev) of the 0/1 per-trial success values.

    Variance is the unbiased sample variance, 0.0 when count == 1.
    """
    if count < 1:
        raise ValidationError("count must be positive")
    if successes < 0 or successes > count:
        raise ValidationError(f"successes {successes} out of range for count {count}")
    values = [1.0] * successes + [0.0] * (count - successes)
    variance = sample_variance(values)
    return successes / count, variance, math.sqrt(variance)
