#!/usr/bin/env python3
"""Do two patches behave the same, even if they look different?

Shows the Output Equivalence Rate over test-case outcome vectors, the rule
that failures are equivalent to nothing, and how repeated trials fold into
success categories.
"""

from __future__ import annotations

from patchgate import (
    CaseOutcome,
    OutcomeStatus,
    categorize,
    outcome_oer,
    success_stats,
)


def value(v) -> CaseOutcome:
    return CaseOutcome(OutcomeStatus.VALUE, value=v)


def main() -> None:
    crash = CaseOutcome(OutcomeStatus.RUNTIME_ERROR, detail="IndexError")

    patch_1 = (value(1), value(3), value(6), crash)
    patch_2 = (value(1), value(3), value(7), crash)

    print("outcome vectors over a 4-case suite")
    print("-" * 40)
    print("  patch 1:", [o.value if not o.is_failure else "ERROR" for o in patch_1])
    print("  patch 2:", [o.value if not o.is_failure else "ERROR" for o in patch_2])
    print(f"  OER = {outcome_oer(patch_1, patch_2):.2f}")
    print()
    print("Cases 0 and 1 agree. Case 2 differs. Case 3 crashed in both, and")
    print("two crashes are NOT equivalent - a failure matches nothing.")
    print()

    print("success categories over 3 trials per problem")
    print("-" * 40)
    for successes in (3, 2, 1, 0):
        mean, variance, stddev = success_stats(successes, 3)
        category = categorize(successes, 3)
        print(
            f"  {successes}/3 passing: mean={mean:.2f} var={variance:.2f} "
            f"sd={stddev:.2f} -> {category.value}"
        )


if __name__ == "__main__":
    main()
