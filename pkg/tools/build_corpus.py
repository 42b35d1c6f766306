#!/usr/bin/env python3
"""Regenerate the bundled corpus of buggy/reference problem pairs.

Expected outputs are computed by executing each reference source through the
shim's adapter and canonicalization machinery, so the manifests agree with
what the sandbox will observe at run time. Buggy sources are intentionally
wrong; `patchgate validate` confirms each bug is visible to its suite.
"""

from __future__ import annotations

import copy
import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "shim"))

import shim_runner  # noqa: E402


def d(text: str) -> str:
    """Strip leading newline from a triple-quoted source block."""
    return text.lstrip("\n")


PROBLEMS: list[dict] = [
    {
        "name": "bitcount",
        "entry_point": "bitcount",
        "adapter": None,
        "inputs": [[0], [1], [4], [127], [128]],
        "reference": d('''
def bitcount(n):
    count = 0
    while n:
        n &= n - 1
        count += 1
    return count
'''),
        "buggy": d('''
def bitcount(n):
    count = 0
    while n:
        n >>= 1
        count += 1
    return count
'''),
    },
    {
        "name": "breadth_first_search",
        "entry_point": "breadth_first_search",
        "adapter": "node_graph",
        "inputs": [
            [{"a": ["b", "c"], "b": ["d"], "c": [], "d": []}, "a", "d"],
            [{"a": ["b"], "b": [], "c": []}, "a", "c"],
            [{"a": []}, "a", "a"],
            [{"a": ["b"], "b": ["a"], "c": []}, "a", "c"],
        ],
        "reference": d('''
from collections import deque


def breadth_first_search(startnode, goalnode):
    queue = deque()
    queue.append(startnode)
    nodesseen = set()
    nodesseen.add(startnode)
    while queue:
        node = queue.popleft()
        if node is goalnode:
            return True
        queue.extend(n for n in node.successors if n not in nodesseen)
        nodesseen.update(node.successors)
    return False
'''),
        "buggy": d('''
from collections import deque


def breadth_first_search(startnode, goalnode):
    queue = deque()
    queue.append(startnode)
    nodesseen = set()
    nodesseen.add(startnode)
    while True:
        node = queue.popleft()
        if node is goalnode:
            return True
        queue.extend(n for n in node.successors if n not in nodesseen)
        nodesseen.update(node.successors)
    return False
'''),
    },
    {
        "name": "bucketsort",
        "entry_point": "bucketsort",
        "adapter": None,
        "inputs": [[[2, 0, 1, 1], 3], [[0], 1], [[3, 1, 4, 1, 5, 2], 6]],
        "reference": d('''
def bucketsort(arr, k):
    counts = [0] * k
    for x in arr:
        counts[x] += 1
    sorted_arr = []
    for i, count in enumerate(counts):
        sorted_arr.extend([i] * count)
    return sorted_arr
'''),
        "buggy": d('''
def bucketsort(arr, k):
    counts = [0] * k
    for x in arr:
        counts[x] += 1
    sorted_arr = []
    for i, count in enumerate(arr):
        sorted_arr.extend([i] * count)
    return sorted_arr
'''),
    },
    {
        "name": "depth_first_search",
        "entry_point": "depth_first_search",
        "adapter": "node_graph",
        "inputs": [
            [{"a": ["b"], "b": ["c"], "c": []}, "a", "c"],
            [{"a": ["b"], "b": ["a"], "c": []}, "a", "c"],
            [{"a": []}, "a", "a"],
        ],
        "reference": d('''
def depth_first_search(startnode, goalnode):
    nodesvisited = set()

    def search_from(node):
        if node in nodesvisited:
            return False
        elif node is goalnode:
            return True
        else:
            nodesvisited.add(node)
            return any(search_from(nextnode) for nextnode in node.successors)

    return search_from(startnode)
'''),
        "buggy": d('''
def depth_first_search(startnode, goalnode):
    nodesvisited = set()

    def search_from(node):
        if node in nodesvisited:
            return False
        elif node is goalnode:
            return True
        else:
            return any(search_from(nextnode) for nextnode in node.successors)

    return search_from(startnode)
'''),
    },
    {
        "name": "detect_cycle_test",
        "entry_point": "detect_cycle",
        "adapter": "cyclic_linked_list",
        "inputs": [[[1, 2, 3, 4], -1], [[1, 2, 3], 0], [[1], -1], [[1, 2, 3, 4, 5], 2]],
        "reference": d('''
def detect_cycle(node):
    hare = tortoise = node
    while True:
        if hare is None or hare.successor is None:
            return False
        tortoise = tortoise.successor
        hare = hare.successor.successor
        if hare is tortoise:
            return True
'''),
        "buggy": d('''
def detect_cycle(node):
    hare = tortoise = node
    while True:
        if hare.successor is None:
            return False
        tortoise = tortoise.successor
        hare = hare.successor.successor
        if hare is tortoise:
            return True
'''),
    },
    {
        "name": "flatten",
        "entry_point": "flatten",
        "adapter": None,
        "inputs": [[[1, [2, [3]], 4]], [[]], [[[1], [], [2, 3]]]],
        "reference": d('''
def flatten(arr):
    for x in arr:
        if isinstance(x, list):
            for y in flatten(x):
                yield y
        else:
            yield x
'''),
        "buggy": d('''
def flatten(arr):
    for x in arr:
        if isinstance(x, list):
            for y in flatten(x):
                yield y
        else:
            yield flatten(x)
'''),
    },
    {
        "name": "kth",
        "entry_point": "kth",
        "adapter": None,
        "inputs": [
            [[1, 2, 3, 4, 5, 6, 7], 4],
            [[3, 6, 7, 1, 6, 3, 8, 1], 5],
            [[2, 1], 0],
            [[5], 0],
        ],
        "reference": d('''
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
'''),
        "buggy": d('''
def kth(arr, k):
    pivot = arr[0]
    below = [x for x in arr if x < pivot]
    above = [x for x in arr if x > pivot]

    num_less = len(below)
    num_lessoreq = len(arr) - len(above)

    if k < num_less:
        return kth(below, k)
    elif k >= num_lessoreq:
        return kth(above, k)
    else:
        return pivot
'''),
    },
    {
        "name": "lcs_length",
        "entry_point": "lcs_length",
        "adapter": None,
        "inputs": [["witch", "sandwich"], ["meow", "homeowner"], ["abc", "def"], ["", ""]],
        "reference": d('''
from collections import Counter


def lcs_length(s, t):
    dp = Counter()
    for i in range(len(s)):
        for j in range(len(t)):
            if s[i] == t[j]:
                dp[i, j] = dp[i - 1, j - 1] + 1
    return max(dp.values()) if dp else 0
'''),
        "buggy": d('''
from collections import Counter


def lcs_length(s, t):
    dp = Counter()
    for i in range(len(s)):
        for j in range(len(t)):
            if s[i] == t[j]:
                dp[i, j] = dp[i - 1, j] + 1
    return max(dp.values()) if dp else 0
'''),
    },
    {
        "name": "lis",
        "entry_point": "lis",
        "adapter": None,
        "inputs": [[[4, 1, 5, 3, 7, 6, 2]], [[1, 2, 3]], [[5, 4, 3]], [[]]],
        "reference": d('''
def lis(arr):
    ends = {}
    longest = 0
    for i, val in enumerate(arr):
        prefix_lengths = [j for j in range(1, longest + 1) if arr[ends[j]] < val]
        length = max(prefix_lengths) if prefix_lengths else 0
        if length == longest or val < arr[ends[length + 1]]:
            ends[length + 1] = i
            longest = max(longest, length + 1)
    return longest
'''),
        "buggy": d('''
def lis(arr):
    ends = {}
    longest = 0
    for i, val in enumerate(arr):
        prefix_lengths = [j for j in range(1, longest + 1) if arr[ends[j]] < val]
        length = max(prefix_lengths) if prefix_lengths else 0
        if length == longest or val < arr[ends[length + 1]]:
            ends[length + 1] = i
            longest = length + 1
    return longest
'''),
    },
    {
        "name": "next_permutation",
        "entry_point": "next_permutation",
        "adapter": None,
        "inputs": [[[3, 2, 4, 1]], [[1, 2, 3]], [[3, 1, 2]], [[1, 3, 5, 4, 2]]],
        "reference": d('''
def next_permutation(perm):
    for i in range(len(perm) - 2, -1, -1):
        if perm[i] < perm[i + 1]:
            for j in range(len(perm) - 1, i, -1):
                if perm[i] < perm[j]:
                    next_perm = list(perm)
                    next_perm[i], next_perm[j] = perm[j], perm[i]
                    next_perm[i + 1:] = reversed(next_perm[i + 1:])
                    return next_perm
    return list(reversed(perm))
'''),
        "buggy": d('''
def next_permutation(perm):
    for i in range(len(perm) - 2, -1, -1):
        if perm[i] < perm[i + 1]:
            for j in range(len(perm) - 1, i, -1):
                if perm[j] < perm[i]:
                    next_perm = list(perm)
                    next_perm[i], next_perm[j] = perm[j], perm[i]
                    next_perm[i + 1:] = reversed(next_perm[i + 1:])
                    return next_perm
    return list(reversed(perm))
'''),
    },
    {
        "name": "pascal",
        "entry_point": "pascal",
        "adapter": None,
        "inputs": [[1], [3], [5]],
        "reference": d('''
def pascal(n):
    rows = [[1]]
    for r in range(1, n):
        row = []
        for c in range(0, r + 1):
            upleft = rows[r - 1][c - 1] if c > 0 else 0
            upright = rows[r - 1][c] if c < r else 0
            row.append(upleft + upright)
        rows.append(row)
    return rows
'''),
        "buggy": d('''
def pascal(n):
    rows = [[1]]
    for r in range(1, n):
        row = []
        for c in range(0, r):
            upleft = rows[r - 1][c - 1] if c > 0 else 0
            upright = rows[r - 1][c] if c < r else 0
            row.append(upleft + upright)
        rows.append(row)
    return rows
'''),
    },
    {
        "name": "powerset",
        "entry_point": "powerset",
        "adapter": None,
        "inputs": [[["a", "b", "c"]], [[1, 2]], [[]]],
        "reference": d('''
def powerset(arr):
    if arr:
        first, *rest = arr
        rest_subsets = powerset(rest)
        return rest_subsets + [[first] + subset for subset in rest_subsets]
    else:
        return [[]]
'''),
        "buggy": d('''
def powerset(arr):
    if arr:
        first, *rest = arr
        rest_subsets = powerset(rest)
        return [[first] + subset for subset in rest_subsets]
    else:
        return [[]]
'''),
    },
    {
        "name": "reverse_linked_list_test",
        "entry_point": "reverse_linked_list",
        "adapter": "linked_list",
        "inputs": [[[1, 2, 3]], [[]], [[7]]],
        "reference": d('''
def reverse_linked_list(node):
    prevnode = None
    while node:
        nextnode = node.successor
        node.successor = prevnode
        prevnode = node
        node = nextnode
    return prevnode
'''),
        "buggy": d('''
def reverse_linked_list(node):
    prevnode = None
    while node:
        nextnode = node.successor
        node.successor = prevnode
        node = nextnode
    return prevnode
'''),
    },
    {
        "name": "rpn_eval",
        "entry_point": "rpn_eval",
        "adapter": None,
        "inputs": [
            [[3.0, 5.0, "+", 2.0, "*"]],
            [[2.0, 3.0, "-"]],
            [[4.0, 2.0, "/"]],
            [[5.0]],
        ],
        "reference": d('''
def rpn_eval(tokens):
    def op(symbol, a, b):
        return {
            '+': lambda a, b: a + b,
            '-': lambda a, b: a - b,
            '*': lambda a, b: a * b,
            '/': lambda a, b: a / b,
        }[symbol](a, b)

    stack = []
    for token in tokens:
        if isinstance(token, str):
            b = stack.pop()
            a = stack.pop()
            stack.append(op(token, a, b))
        else:
            stack.append(token)
    return stack.pop()
'''),
        "buggy": d('''
def rpn_eval(tokens):
    def op(symbol, a, b):
        return {
            '+': lambda a, b: a + b,
            '-': lambda a, b: a - b,
            '*': lambda a, b: a * b,
            '/': lambda a, b: a / b,
        }[symbol](a, b)

    stack = []
    for token in tokens:
        if isinstance(token, str):
            a = stack.pop()
            b = stack.pop()
            stack.append(op(token, a, b))
        else:
            stack.append(token)
    return stack.pop()
'''),
    },
    {
        "name": "shortest_path_length_test",
        "entry_point": "shortest_path_length",
        "adapter": "weighted_node_graph",
        "inputs": [
            [[["a", "b", 1], ["b", "c", 2], ["a", "c", 5]], "a", "c"],
            [[["a", "b", 1]], "a", "z"],
            [[["a", "b", 4]], "a", "b"],
        ],
        "reference": d('''
import heapq


def shortest_path_length(length_by_edge, startnode, goalnode):
    unvisited = [(0, 0, startnode)]
    visited = set()
    counter = 1
    while unvisited:
        distance, _, node = heapq.heappop(unvisited)
        if node is goalnode:
            return distance
        if node in visited:
            continue
        visited.add(node)
        for nextnode in node.successors:
            if nextnode in visited:
                continue
            heapq.heappush(
                unvisited, (distance + length_by_edge[node, nextnode], counter, nextnode)
            )
            counter += 1
    return -1
'''),
        "buggy": d('''
import heapq


def shortest_path_length(length_by_edge, startnode, goalnode):
    unvisited = [(0, 0, startnode)]
    visited = set()
    counter = 1
    while unvisited:
        distance, _, node = heapq.heappop(unvisited)
        if node is goalnode:
            return distance
        if node in visited:
            continue
        visited.add(node)
        for nextnode in node.successors:
            if nextnode in visited:
                continue
            heapq.heappush(
                unvisited, (length_by_edge[node, nextnode], counter, nextnode)
            )
            counter += 1
    return -1
'''),
    },
    {
        "name": "shortest_path_lengths",
        "entry_point": "shortest_path_lengths",
        "adapter": None,
        "inputs": [
            [3, [[0, 1, 3], [1, 2, 4]]],
            [2, [[0, 1, 1], [1, 0, 1]]],
            [1, []],
        ],
        "reference": d('''
INF = 10 ** 9


def shortest_path_lengths(n, edges):
    lengths = [[0 if i == j else INF for j in range(n)] for i in range(n)]
    for u, v, w in edges:
        lengths[u][v] = min(lengths[u][v], w)
    for k in range(n):
        for i in range(n):
            for j in range(n):
                via = lengths[i][k] + lengths[k][j]
                if via < lengths[i][j]:
                    lengths[i][j] = via
    return lengths
'''),
        "buggy": d('''
INF = 10 ** 9


def shortest_path_lengths(n, edges):
    lengths = [[0 if i == j else INF for j in range(n)] for i in range(n)]
    for u, v, w in edges:
        lengths[u][v] = min(lengths[u][v], w)
    for k in range(n):
        for i in range(n):
            for j in range(n):
                via = lengths[i][k] + lengths[j][k]
                if via < lengths[i][j]:
                    lengths[i][j] = via
    return lengths
'''),
    },
    {
        "name": "shunting_yard",
        "entry_point": "shunting_yard",
        "adapter": None,
        "inputs": [
            [[4, "+", 9, "*", 9, "-", 10, "+", 13]],
            [[1, "+", 2]],
            [[10]],
            [[3, "*", 4, "+", 5]],
        ],
        "reference": d('''
def shunting_yard(tokens):
    precedence = {'+': 1, '-': 1, '*': 2, '/': 2}

    rpntokens = []
    opstack = []
    for token in tokens:
        if isinstance(token, int):
            rpntokens.append(token)
        else:
            while opstack and precedence[token] <= precedence[opstack[-1]]:
                rpntokens.append(opstack.pop())
            opstack.append(token)

    while opstack:
        rpntokens.append(opstack.pop())

    return rpntokens
'''),
        "buggy": d('''
def shunting_yard(tokens):
    precedence = {'+': 1, '-': 1, '*': 2, '/': 2}

    rpntokens = []
    opstack = []
    for token in tokens:
        if isinstance(token, int):
            rpntokens.append(token)
        else:
            while opstack and precedence[token] <= precedence[opstack[-1]]:
                rpntokens.append(opstack.pop())

    while opstack:
        rpntokens.append(opstack.pop())

    return rpntokens
'''),
    },
    {
        "name": "sqrt",
        "entry_point": "sqrt",
        "adapter": None,
        "inputs": [[2, 0.01], [9, 0.5]],
        "reference": d('''
def sqrt(x, epsilon):
    approx = x / 2
    while abs(x - approx ** 2) > epsilon:
        approx = 0.5 * (approx + x / approx)
    return approx
'''),
        "buggy": d('''
def sqrt(x, epsilon):
    approx = x / 2
    while abs(x - approx) > epsilon:
        approx = 0.5 * (approx + x / approx)
    return approx
'''),
    },
    {
        "name": "subsequences",
        "entry_point": "subsequences",
        "adapter": None,
        "inputs": [[1, 5, 3], [1, 4, 2], [1, 3, 0]],
        "reference": d('''
def subsequences(a, b, k):
    if k == 0:
        return [[]]

    ret = []
    for i in range(a, b + 1 - k):
        ret.extend([i] + rest for rest in subsequences(i + 1, b, k - 1))
    return ret
'''),
        "buggy": d('''
def subsequences(a, b, k):
    if k == 0:
        return []

    ret = []
    for i in range(a, b + 1 - k):
        ret.extend([i] + rest for rest in subsequences(i + 1, b, k - 1))
    return ret
'''),
    },
    {
        "name": "to_base",
        "entry_point": "to_base",
        "adapter": None,
        "inputs": [[31, 16], [5, 2], [255, 16], [7, 8]],
        "reference": d('''
import string


def to_base(num, b):
    result = ''
    alphabet = string.digits + string.ascii_uppercase
    while num > 0:
        i = num % b
        num = num // b
        result = alphabet[i] + result
    return result
'''),
        "buggy": d('''
import string


def to_base(num, b):
    result = ''
    alphabet = string.digits + string.ascii_uppercase
    while num > 0:
        i = num % b
        num = num // b
        result = result + alphabet[i]
    return result
'''),
    },
]


def expected_for(problem: dict, case_input: list):
    namespace = {"__name__": "__candidate__"}
    exec(compile(problem["reference"], "<reference>", "exec"), namespace)
    entry = namespace[problem["entry_point"]]
    adapter = shim_runner.ADAPTERS[problem["adapter"]] if problem["adapter"] else None
    args = adapter.build_args(copy.deepcopy(case_input)) if adapter else copy.deepcopy(case_input)
    result = entry(*args)
    if adapter:
        result = adapter.finish(result)
    return shim_runner.canonicalize(result)


def main() -> None:
    corpus_root = ROOT / "corpus"
    for problem in PROBLEMS:
        directory = corpus_root / problem["name"]
        directory.mkdir(parents=True, exist_ok=True)
        (directory / "buggy.py").write_text(problem["buggy"], encoding="utf-8")
        (directory / "reference.py").write_text(problem["reference"], encoding="utf-8")
        manifest = {
            "name": problem["name"],
            "entry_point": problem["entry_point"],
            "adapter": problem["adapter"],
            "cases": [
                {"input": case_input, "expected": expected_for(problem, case_input)}
                for case_input in problem["inputs"]
            ],
        }
        (directory / "testcases.json").write_text(
            json.dumps(manifest, indent=2) + "\n", encoding="utf-8"
        )
        print(f"wrote {directory} ({len(manifest['cases'])} cases)")


if __name__ == "__main__":
    main()
