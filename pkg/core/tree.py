"""
TreeCode Hub - Rooted Tree Core
Canonical unordered rooted trees: validation, counting, enumeration and sampling
"""

import logging
import random
import threading
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

from .errors import TreeStructureError

logger = logging.getLogger(__name__)

MAX_NODES = 65535
ENUMERATION_LIMIT = 16

TreeCount = int


@dataclass(frozen=True)
class TreeStats:
    """Node count, leaf count and height of a tree"""
    n: int
    l: int
    depth: int


class Tree:
    """Unlabeled unordered rooted tree held in canonical form.

    Nodes are numbered in canonical preorder, so ``parents[0]`` is None and
    ``parents[i] < i`` for every other node. Children of a node are sorted by
    nonincreasing level sequence of their subtrees. Build instances with
    ``canonicalize``; the constructor trusts its input.
    """

    __slots__ = ("_parents", "_children")

    def __init__(self, parents: Sequence[Optional[int]]):
        self._parents: Tuple[Optional[int], ...] = tuple(parents)
        children: List[List[int]] = [[] for _ in self._parents]
        for node in range(1, len(self._parents)):
            children[self._parents[node]].append(node)
        self._children = tuple(tuple(c) for c in children)

    @property
    def n(self) -> int:
        return len(self._parents)

    @property
    def parents(self) -> Tuple[Optional[int], ...]:
        return self._parents

    def children(self, node: int) -> Tuple[int, ...]:
        return self._children[node]

    def is_leaf(self, node: int) -> bool:
        return not self._children[node]

    def depths(self) -> List[int]:
        depths = [0] * self.n
        for node in range(1, self.n):
            depths[node] = depths[self._parents[node]] + 1
        return depths

    def level_sequence(self) -> Tuple[int, ...]:
        """Depths in canonical preorder (the canonical level sequence)"""
        return tuple(self.depths())

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tree):
            return NotImplemented
        return self._parents == other._parents

    def __hash__(self) -> int:
        return hash(self._parents)

    def __repr__(self) -> str:
        return f"Tree(n={self.n}, levels={list(self.level_sequence())})"


def _normalize_parents(raw: Sequence) -> List[Optional[int]]:
    parents: List[Optional[int]] = []
    for index, value in enumerate(raw):
        if value is None or value == -1:
            parents.append(None)
            continue
        if isinstance(value, bool) or not isinstance(value, int):
            raise TreeStructureError(f"parent of node {index} is not an integer", index)
        if not 0 <= value < len(raw):
            raise TreeStructureError(f"parent index {value} out of range", index)
        parents.append(value)
    return parents


def canonical_order(raw: Sequence) -> Tuple[Tree, List[int]]:
    """Canonicalize a raw parent array and report where each node went.

    Returns the canonical Tree and ``order`` where ``order[i]`` is the index in
    ``raw`` of canonical node ``i``. Raw arrays may mark the root with None or -1
    and need not be topologically numbered.
    """
    n = len(raw)
    if n == 0:
        raise TreeStructureError("a tree needs at least one node")
    if n > MAX_NODES:
        raise TreeStructureError(f"{n} nodes exceeds the {MAX_NODES} node limit")
    parents = _normalize_parents(raw)

    roots = [i for i, p in enumerate(parents) if p is None]
    if len(roots) != 1:
        raise TreeStructureError(f"expected exactly one root, found {len(roots)}")
    root = roots[0]

    children: List[List[int]] = [[] for _ in range(n)]
    for node, parent in enumerate(parents):
        if parent is not None:
            children[parent].append(node)

    # Breadth-first from the root; anything unreached sits on a cycle
    depth = [-1] * n
    depth[root] = 0
    levels: List[List[int]] = [[root]]
    while levels[-1]:
        nxt = []
        for node in levels[-1]:
            for child in children[node]:
                depth[child] = depth[node] + 1
                nxt.append(child)
        levels.append(nxt)
    levels.pop()
    unreached = [i for i in range(n) if depth[i] < 0]
    if unreached:
        raise TreeStructureError("cycle detected in parent array", unreached[0])

    # Rank subtrees level by level, deepest first; ranks agree with the
    # lexicographic order of canonical level sequences among nodes of one depth
    rank = [0] * n
    for level in reversed(levels):
        keys = {}
        for node in level:
            keys[node] = tuple(sorted((rank[c] for c in children[node]), reverse=True))
        ordered = sorted(set(keys.values()))
        position = {key: r for r, key in enumerate(ordered)}
        for node in level:
            rank[node] = position[keys[node]]

    order: List[int] = []
    canonical_parents: List[Optional[int]] = []
    stack: List[Tuple[int, Optional[int]]] = [(root, None)]
    while stack:
        node, parent = stack.pop()
        canonical_parents.append(parent)
        order.append(node)
        me = len(order) - 1
        for child in sorted(children[node], key=lambda c: rank[c]):
            stack.append((child, me))
    return Tree(canonical_parents), order


def canonicalize(raw: Sequence) -> Tree:
    """Return the canonical Tree of a raw parent array"""
    tree, _ = canonical_order(raw)
    return tree


def from_level_sequence(levels: Sequence[int]) -> Tree:
    """Build a tree from a preorder depth sequence (root depth 0), then canonicalize"""
    if not levels or levels[0] != 0:
        raise TreeStructureError("level sequence must start with the root at depth 0")
    parents: List[Optional[int]] = [None]
    last_at_depth = [0]
    for index in range(1, len(levels)):
        depth = levels[index]
        if depth < 1 or depth > len(last_at_depth):
            raise TreeStructureError(f"depth {depth} cannot follow the previous node", index)
        parents.append(last_at_depth[depth - 1])
        del last_at_depth[depth:]
        last_at_depth.append(index)
    return canonicalize(parents)


def stats(tree: Tree) -> TreeStats:
    """Count nodes and leaves and measure the height"""
    leaves = sum(1 for node in range(tree.n) if tree.is_leaf(node))
    return TreeStats(n=tree.n, l=leaves, depth=max(tree.depths()))


# Counting

_counts: List[int] = [0, 1]
_divisor_sums: List[int] = [0]
_counts_lock = threading.Lock()


def count_trees(n: int) -> TreeCount:
    """Number of unlabeled unordered rooted trees with n nodes (A000081)"""
    if n < 1:
        raise TreeStructureError(f"node count must be at least 1, got {n}")
    # Entries below len(_counts) never change, so only extension is locked
    with _counts_lock:
        while len(_counts) <= n:
            m = len(_counts) - 1
            # _divisor_sums[k] = sum of d * a(d) over divisors d of k
            while len(_divisor_sums) <= m:
                k = len(_divisor_sums)
                _divisor_sums.append(sum(d * _counts[d] for d in range(1, k + 1) if k % d == 0))
            total = sum(_divisor_sums[k] * _counts[m - k + 1] for k in range(1, m + 1))
            _counts.append(total // m)
    return _counts[n]


def enumerate_trees(n: int) -> Iterator[Tree]:
    """Yield every canonical tree with n nodes exactly once.

    Walks canonical level sequences from the path down to the star with the
    successor rule of Beyer and Hedetniemi.
    """
    if not 1 <= n <= ENUMERATION_LIMIT:
        raise TreeStructureError(f"enumeration supports 1..{ENUMERATION_LIMIT} nodes, got {n}")
    return _walk_level_sequences(n)


def _walk_level_sequences(n: int) -> Iterator[Tree]:
    levels: Optional[List[int]] = list(range(n))
    while levels is not None:
        yield _tree_from_canonical_levels(levels)
        levels = _next_level_sequence(levels)


def _next_level_sequence(levels: List[int]) -> Optional[List[int]]:
    p = len(levels) - 1
    while p > 0 and levels[p] == 1:
        p -= 1
    if p == 0:
        return None
    q = p - 1
    while levels[q] != levels[p] - 1:
        q -= 1
    result = levels[:p]
    for i in range(p, len(levels)):
        result.append(result[i - (p - q)])
    return result


def _tree_from_canonical_levels(levels: Sequence[int]) -> Tree:
    parents: List[Optional[int]] = [None]
    last_at_depth = [0] * len(levels)
    for index in range(1, len(levels)):
        parents.append(last_at_depth[levels[index] - 1])
        last_at_depth[levels[index]] = index
    return Tree(parents)


# Uniform sampling

def sample_uniform(n: int, rng: random.Random) -> Tree:
    """Draw a tree uniformly from all count_trees(n) unordered rooted trees.

    Exact recursive sampler: a tree of size m is its root with j copies of one
    random d-node subtree hung off a random (m - j*d)-node tree, where (j, d)
    is drawn with weight d * a(d) * a(m - j*d).
    """
    if n < 1:
        raise TreeStructureError(f"node count must be at least 1, got {n}")
    if rng is None:
        raise TreeStructureError("sample_uniform needs an explicit random state")
    count_trees(n)

    root: List = []
    tasks = [(root, n)]
    while tasks:
        node, size = tasks.pop()
        while size > 1:
            copies, sub_size = _choose_split(size, rng)
            child: List = []
            # Copies share one child list; it is filled in once below
            node.extend([child] * copies)
            tasks.append((child, sub_size))
            size -= copies * sub_size

    parents: List[Optional[int]] = []
    stack: List[Tuple[List, Optional[int]]] = [(root, None)]
    while stack:
        shape, parent = stack.pop()
        parents.append(parent)
        me = len(parents) - 1
        for child in shape:
            stack.append((child, me))
    logger.debug("sampled a %d-node tree", n)
    return canonicalize(parents)


def _choose_split(size: int, rng: random.Random) -> Tuple[int, int]:
    target = rng.randrange((size - 1) * _counts[size])
    for sub_size in range(1, size):
        weight = sub_size * _counts[sub_size]
        copies = 1
        while copies * sub_size <= size - 1:
            w = weight * _counts[size - copies * sub_size]
            if target < w:
                return copies, sub_size
            target -= w
            copies += 1
    raise AssertionError("split weights do not sum to (size - 1) * a(size)")


# Parent-array text format

def read_parent_array(text: str) -> Tree:
    """Parse "n" then n parent indices (root -1) and canonicalize"""
    tokens = text.split()
    if not tokens:
        raise TreeStructureError("empty parent-array text")
    try:
        n = int(tokens[0])
        values = [int(t) for t in tokens[1:]]
    except ValueError as exc:
        raise TreeStructureError(f"parent-array text holds a non-integer: {exc}") from None
    if len(values) != n:
        raise TreeStructureError(f"header says {n} nodes but {len(values)} parents follow")
    return canonicalize(values)


def write_parent_array(tree: Tree) -> str:
    """Render a tree in the parent-array text format"""
    values = ["-1" if p is None else str(p) for p in tree.parents]
    return f"{tree.n}\n{' '.join(values)}\n"
