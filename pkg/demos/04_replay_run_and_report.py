#!/usr/bin/env python3
"""The full measurement pipeline, replayed deterministically.

Replays the bundled response cassette over the 20-problem corpus, evaluates
every candidate in the sandbox, and prints the per-temperature general OER
plus the category distribution. Artifacts (CSV, JSON, SVG heatmap) land in a
temporary directory.
"""

from __future__ import annotations

import json
import tempfile
from pathlib import Path

from patchgate.cli import main as patchgate

REPO = Path(__file__).resolve().parents[1]


def main() -> None:
    out = Path(tempfile.mkdtemp(prefix="patchgate-demo-"))
    code = patchgate(
        [
            "run",
            "--corpus", str(REPO / "corpus"),
            "--mode", "replay",
            "--cassette", str(REPO / "fixtures" / "tables_cassette.jsonl"),
            "--out", str(out),
            "--timeout-ms", "2000",
            "--shim", str(REPO / "shim" / "shim_runner.py"),
        ]
    )
    assert code == 0, "replay run failed"

    report = json.loads((out / "report.json").read_text())
    print()
    print("category distribution per temperature")
    print("-" * 52)
    for temperature, tally in sorted(report["category_distribution"].items()):
        parts = ", ".join(f"{k}: {v}" for k, v in sorted(tally.items()))
        print(f"  T={temperature}: {parts}")
    print()
    print("artifacts:")
    for name in ("report.json", "stability.csv", "oer.csv", "heatmap.svg", "boxplot.json"):
        print(f"  {out / name}")
    print()
    print("Run this script twice and diff the directories: every report byte")
    print("is identical. Wall-clock times live only in run_meta.json.")


if __name__ == "__main__":
    main()
