#!/usr/bin/env python3
"""Regenerate the golden job/response files for the shim protocol suite.

Each job spec is written to golden/<name>.job.json and the shim's byte-exact
response lines to golden/<name>.expected.jsonl. The timeout-bait job hangs by
design, so its expected file holds only the lines emitted before the hang and
is captured through a killed subprocess.
"""

from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

HERE = Path(__file__).resolve().parent
GOLDEN = HERE / "golden"
SHIM = HERE.parent / "shim_runner.py"

JOBS: dict[str, dict] = {
    "01_simple_value": {
        "source": "def f(x):\n    return x + 1\n",
        "entry_point": "f",
        "adapter": None,
        "cases": [{"input": [1], "expected": 2}, {"input": [2], "expected": 3}],
    },
    "02_container_canonicalization": {
        "source": (
            "def f(n):\n"
            "    return (n, {n + 2, n + 1}, [n, (n, n)])\n"
        ),
        "entry_point": "f",
        "adapter": None,
        "cases": [{"input": [1], "expected": None}],
    },
    "03_dict_keys_stringified": {
        "source": "def f():\n    return {1: 'a', 2: {'x': (3,)}}\n",
        "entry_point": "f",
        "adapter": None,
        "cases": [{"input": [], "expected": None}],
    },
    "04_per_case_exception": {
        "source": "def f(x):\n    return 10 // x\n",
        "entry_point": "f",
        "adapter": None,
        "cases": [
            {"input": [5], "expected": 2},
            {"input": [0], "expected": None},
            {"input": [2], "expected": 5},
        ],
    },
    "05_load_error_syntax": {
        "source": "def f(x:\n",
        "entry_point": "f",
        "adapter": None,
        "cases": [{"input": [1], "expected": 1}, {"input": [2], "expected": 2}],
    },
    "06_missing_entry_point": {
        "source": "def other(x):\n    return x\n",
        "entry_point": "f",
        "adapter": None,
        "cases": [{"input": [1], "expected": 1}],
    },
    "07_stdout_swallowed": {
        "source": (
            "def f(x):\n"
            "    print('this chatter must not reach the protocol channel')\n"
            "    return x * 2\n"
        ),
        "entry_point": "f",
        "adapter": None,
        "cases": [{"input": [21], "expected": 42}],
    },
    "08_linked_list_adapter": {
        "source": (
            "def reverse_linked_list(node):\n"
            "    prevnode = None\n"
            "    while node:\n"
            "        nextnode = node.successor\n"
            "        node.successor = prevnode\n"
            "        prevnode = node\n"
            "        node = nextnode\n"
            "    return prevnode\n"
        ),
        "entry_point": "reverse_linked_list",
        "adapter": "linked_list",
        "cases": [
            {"input": [[1, 2, 3, 4]], "expected": [4, 3, 2, 1]},
            {"input": [[]], "expected": []},
        ],
    },
    "09_cyclic_linked_list_adapter": {
        "source": (
            "def detect_cycle(node):\n"
            "    hare = tortoise = node\n"
            "    while True:\n"
            "        if hare is None or hare.successor is None:\n"
            "            return False\n"
            "        tortoise = tortoise.successor\n"
            "        hare = hare.successor.successor\n"
            "        if hare is tortoise:\n"
            "            return True\n"
        ),
        "entry_point": "detect_cycle",
        "adapter": "cyclic_linked_list",
        "cases": [
            {"input": [[1, 2, 3], 0], "expected": True},
            {"input": [[1, 2, 3], -1], "expected": False},
        ],
    },
    "10_node_graph_adapter": {
        "source": (
            "def reachable(startnode, goalnode):\n"
            "    stack, seen = [startnode], set()\n"
            "    while stack:\n"
            "        node = stack.pop()\n"
            "        if node is goalnode:\n"
            "            return True\n"
            "        if id(node) in seen:\n"
            "            continue\n"
            "        seen.add(id(node))\n"
            "        stack.extend(node.successors)\n"
            "    return False\n"
        ),
        "entry_point": "reachable",
        "adapter": "node_graph",
        "cases": [
            {"input": [{"a": ["b"], "b": ["c"], "c": []}, "a", "c"], "expected": True},
            {"input": [{"a": [], "b": []}, "a", "b"], "expected": False},
        ],
    },
    "11_weighted_node_graph_adapter": {
        "source": (
            "def total_out_weight(length_by_edge, startnode, goalnode):\n"
            "    return sum(\n"
            "        w for (u, v), w in length_by_edge.items() if u is startnode\n"
            "    )\n"
        ),
        "entry_point": "total_out_weight",
        "adapter": "weighted_node_graph",
        "cases": [
            {"input": [[["a", "b", 3], ["a", "c", 4], ["b", "c", 9]], "a", "c"], "expected": 7},
        ],
    },
    "12_timeout_bait": {
        "source": (
            "def f(x):\n"
            "    if x == 0:\n"
            "        while True:\n"
            "            pass\n"
            "    return x\n"
        ),
        "entry_point": "f",
        "adapter": None,
        "cases": [{"input": [7], "expected": 7}, {"input": [0], "expected": None}],
    },
}

HANGING_JOBS = {"12_timeout_bait"}


def run_job(job: dict, timeout_s: float | None) -> str:
    try:
        proc = subprocess.run(
            [sys.executable, str(SHIM)],
            input=json.dumps(job),
            capture_output=True,
            text=True,
            timeout=timeout_s,
        )
        return proc.stdout
    except subprocess.TimeoutExpired as exc:
        captured = exc.stdout or b""
        return captured.decode("utf-8") if isinstance(captured, bytes) else captured


def main() -> None:
    GOLDEN.mkdir(exist_ok=True)
    for name, job in sorted(JOBS.items()):
        timeout = 3.0 if name in HANGING_JOBS else None
        output = run_job(job, timeout)
        (GOLDEN / f"{name}.job.json").write_text(
            json.dumps(job, indent=2) + "\n", encoding="utf-8", newline="\n"
        )
        (GOLDEN / f"{name}.expected.jsonl").write_text(
            output, encoding="utf-8", newline="\n"
        )
        print(f"{name}: {len(output.splitlines())} result lines")


if __name__ == "__main__":
    main()
