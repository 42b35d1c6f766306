#!/usr/bin/env python3
"""How alike are repeated fixes for the same bug?

Walks through the string-similarity layer: raw edit distance, normalized
similarity, and the dispersion statistics computed over every pair in a
group of candidate patches.
"""

from __future__ import annotations

from patchgate import (
    levenshtein_distance,
    levenshtein_similarity,
    pairwise_similarity_stats,
)

FIX_A = """\
def kth(arr, k):
    pivot = arr[0]
    below = [x for x in arr if x < pivot]
    above = [x for x in arr if x > pivot]
    num_less = len(below)
    num_lessoreq = len(arr) - len(above)
    if k < num_less:
        return kth(below, k)
    elif k >= num_lessoreq:
        return kth(above, k - num_lessoreq)
    else:
        return pivot
"""

# same algorithm, different variable names and an extra comment
FIX_B = FIX_A.replace("pivot", "p").replace("num_less", "n_below") + "# quickselect\n"

# a structurally different approach to the same problem
FIX_C = """\
def kth(arr, k):
    return sorted(arr)[k]
"""


def main() -> None:
    print("edit distance, normalized similarity")
    print("-" * 40)
    for label, other in (("A vs B", FIX_B), ("A vs C", FIX_C)):
        d = levenshtein_distance(FIX_A, other)
        s = levenshtein_similarity(FIX_A, other)
        print(f"  {label}: distance={d:4d}  similarity={s:.3f}")

    print()
    print("dispersion over a 3-candidate group (threshold 0.7)")
    print("-" * 40)
    stats = pairwise_similarity_stats([FIX_A, FIX_B, FIX_C], low_threshold=0.7)
    print(f"  mean      {stats.mean:.3f}")
    print(f"  variance  {stats.variance:.3f}")
    print(f"  min..max  {stats.min:.3f}..{stats.max:.3f}")
    print(f"  low_ratio {stats.low_ratio:.0%} of {stats.pair_count} pairs below 0.7")
    print()
    print("A high low_ratio means the model keeps proposing structurally")
    print("different patches for the same bug - the instability signal.")


if __name__ == "__main__":
    main()
