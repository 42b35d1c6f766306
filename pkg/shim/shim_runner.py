#!/usr/bin/env python3
"""In-sandbox test executor.

Reads one JSON job object from stdin:

    {"source": "...", "entry_point": "f", "adapter": null,
     "cases": [{"input": [...], "expected": ...}, ...]}

and writes one JSON result object per case to stdout, in case order:

    {"case": 0, "status": "value|error|load_error", "value": ..., "detail": "..."}

Candidate print output is swallowed; only return values travel the protocol
channel. Runs one job per process invocation and keeps the loaded program in
a fresh namespace. Stdlib only.
"""

from __future__ import annotations

import io
import json
import sys

RECURSION_LIMIT = 10000


class Node:
    """Generic graph/list node handed to candidate programs.

    Attribute names mirror what linked-list and graph corpus programs
    expect: ``value``, ``successor`` and ``successors``.
    """

    def __init__(self, value=None, successor=None, successors=None):
        self.value = value
        self.successor = successor
        self.successors = successors if successors is not None else []

    def __repr__(self):
        return f"Node({self.value!r})"


def _build_chain(values):
    head = None
    nodes = []
    for v in values:
        nodes.append(Node(value=v))
    for a, b in zip(nodes, nodes[1:]):
        a.successor = b
    if nodes:
        head = nodes[0]
    return head, nodes


def _chain_to_list(head):
    out = []
    seen = set()
    node = head
    while node is not None:
        if id(node) in seen:
            raise ValueError("cycle in returned linked list")
        seen.add(id(node))
        out.append(node.value)
        node = node.successor
    return out


class LinkedListAdapter:
    """First argument is an array; becomes a singly linked node chain.

    A returned node chain is flattened back to an array of values.
    """

    def build_args(self, case_input):
        values, *rest = case_input
        head, _ = _build_chain(values)
        return [head] + rest

    def finish(self, value):
        if value is None:
            return []
        if isinstance(value, Node):
            return _chain_to_list(value)
        return value


class CyclicLinkedListAdapter:
    """Input is [values, cycle_index]; cycle_index -1 means no cycle,
    otherwise the tail links back to that position."""

    def build_args(self, case_input):
        values, cycle_index = case_input
        head, nodes = _build_chain(values)
        if cycle_index >= 0 and nodes:
            nodes[-1].successor = nodes[cycle_index]
        return [head]

    def finish(self, value):
        return value


class NodeGraphAdapter:
    """Input is [adjacency, start, goal]; adjacency maps node name to the
    list of successor names. The entry point receives (start, goal) nodes."""

    def build_args(self, case_input):
        adjacency, start, goal = case_input
        nodes = {name: Node(value=name) for name in adjacency}
        for name, succ_names in adjacency.items():
            nodes[name].successors = [nodes[s] for s in succ_names]
        return [nodes[start], nodes[goal]]

    def finish(self, value):
        return value


class WeightedNodeGraphAdapter:
    """Input is [edges, start, goal] with edges as [u, v, weight] triples.

    The entry point receives (length_by_edge, start, goal) where
    length_by_edge maps (node, node) pairs to weights.
    """

    def build_args(self, case_input):
        edges, start, goal = case_input
        nodes = {}
        for u, v, _w in edges:
            nodes.setdefault(u, Node(value=u))
            nodes.setdefault(v, Node(value=v))
        nodes.setdefault(start, Node(value=start))
        nodes.setdefault(goal, Node(value=goal))
        length_by_edge = {}
        for u, v, w in edges:
            nodes[u].successors.append(nodes[v])
            length_by_edge[nodes[u], nodes[v]] = w
        return [length_by_edge, nodes[start], nodes[goal]]

    def finish(self, value):
        return value


ADAPTERS = {
    "linked_list": LinkedListAdapter(),
    "cyclic_linked_list": CyclicLinkedListAdapter(),
    "node_graph": NodeGraphAdapter(),
    "weighted_node_graph": WeightedNodeGraphAdapter(),
}


def canonicalize(value):
    """Deterministic JSON form: tuples and iterators to arrays, sets to
    sorted arrays, node chains are handled by adapters before this."""
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, float):
        # json.dumps(allow_nan=False) would reject these later; fail now
        if value != value or value in (float("inf"), float("-inf")):
            raise ValueError(f"non-finite number: {value!r}")
        return value
    if isinstance(value, (list, tuple)):
        return [canonicalize(v) for v in value]
    if isinstance(value, (set, frozenset)):
        items = [canonicalize(v) for v in value]
        return sorted(items, key=lambda v: json.dumps(v, sort_keys=True))
    if isinstance(value, dict):
        return {str(k): canonicalize(v) for k, v in value.items()}
    if hasattr(value, "__iter__"):
        return [canonicalize(v) for v in value]
    raise TypeError(f"value of type {type(value).__name__} is not serializable")


def _emit(out, record):
    out.write(json.dumps(record, ensure_ascii=False, allow_nan=False) + "\n")
    out.flush()


def execute_job(job, out) -> None:
    cases = job["cases"]
    entry_point = job["entry_point"]
    adapter_name = job.get("adapter")
    adapter = None
    if adapter_name is not None:
        adapter = ADAPTERS.get(adapter_name)
        if adapter is None:
            _emit(out, {"status": "protocol_error", "detail": f"unknown adapter: {adapter_name}"})
            sys.exit(3)

    def load_failed(detail):
        for k in range(len(cases)):
            _emit(out, {"case": k, "status": "load_error", "value": None, "detail": detail})

    namespace = {"__name__": "__candidate__"}
    try:
        code = compile(job["source"], "<candidate>", "exec")
        exec(code, namespace)
    except BaseException as exc:  # noqa: BLE001 - anything at load time is a load error
        load_failed(f"{type(exc).__name__}: {exc}")
        return
    entry = namespace.get(entry_point)
    if not callable(entry):
        load_failed(f"entry point {entry_point!r} not defined")
        return

    for k, case in enumerate(cases):
        try:
            args = adapter.build_args(case["input"]) if adapter else list(case["input"])
            saved_stdout = sys.stdout
            sys.stdout = io.StringIO()
            try:
                result = entry(*args)
            finally:
                sys.stdout = saved_stdout
            if adapter:
                result = adapter.finish(result)
            value = canonicalize(result)
            _emit(out, {"case": k, "status": "value", "value": value, "detail": ""})
        except (Exception, SystemExit, KeyboardInterrupt, RecursionError) as exc:
            _emit(out, {"case": k, "status": "error", "value": None, "detail": type(exc).__name__})


def main() -> int:
    sys.setrecursionlimit(RECURSION_LIMIT)
    out = sys.stdout
    try:
        job = json.loads(sys.stdin.read())
        if not isinstance(job, dict) or "source" not in job or "cases" not in job:
            raise ValueError("job must be an object with 'source' and 'cases'")
    except ValueError as exc:
        _emit(out, {"status": "protocol_error", "detail": str(exc)})
        return 3
    execute_job(job, out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
