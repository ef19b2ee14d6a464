"""Static balanced tree over the block sequence of a run.

The leaf range [1, T] splits at ceil(T/2), recursively, giving depth
exactly ceil(log2 T).  Nodes carry pre-order integer ids starting at 0
for the root.  A depth-first traversal of the tree visits each leaf
once and emits one event per simulated step, which is the order the
streaming simulator works in; the (leaf, offset) pair of an emission
is in arithmetic bijection with the step time.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Iterator

from .blocks import (
    POLICY_BOUNDARY,
    POLICY_FULL,
    BlockDecomposition,
    IntervalSummary,
    leaf_summary,
    merge,
)
from .machine import RunRecord

ENTER = "enter"
LEAF_EMIT = "leaf_emit"
EXIT = "exit"


def split_left_count(n: int) -> int:
    """Size of the left child's leaf range when splitting n leaves."""
    return (n + 1) // 2


@dataclass(frozen=True)
class TreeNode:
    id: int
    leaf_lo: int
    leaf_hi: int
    interval: tuple[int, int]
    depth: int
    left: int | None
    right: int | None

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    @property
    def leaf_count(self) -> int:
        return self.leaf_hi - self.leaf_lo + 1


@dataclass(frozen=True)
class CausalTree:
    t: int
    b: int
    T: int
    depth: int
    nodes: tuple[TreeNode, ...]
    labels: dict[int, IntervalSummary] | None = None

    @property
    def root(self) -> TreeNode:
        return self.nodes[0]

    def node(self, node_id: int) -> TreeNode:
        return self.nodes[node_id]

    def leaves(self) -> Iterator[TreeNode]:
        return (n for n in self.nodes if n.is_leaf)


def build_tree(decomp: BlockDecomposition) -> CausalTree:
    """Balanced tree over a non-empty decomposition, nodes in pre-order."""
    if decomp.T == 0:
        raise ValueError("cannot build a tree over zero blocks")
    nodes: list[TreeNode] = []

    def grow(lo: int, hi: int, depth: int) -> int:
        node_id = len(nodes)
        nodes.append(None)  # type: ignore[arg-type]  # patched below
        interval = (decomp.block(lo)[0], decomp.block(hi)[1])
        if lo == hi:
            nodes[node_id] = TreeNode(node_id, lo, hi, interval, depth, None, None)
            return node_id
        mid = lo + split_left_count(hi - lo + 1) - 1
        left = grow(lo, mid, depth + 1)
        right = grow(mid + 1, hi, depth + 1)
        nodes[node_id] = TreeNode(node_id, lo, hi, interval, depth, left, right)
        return node_id

    grow(1, decomp.T, 0)
    depth = max(n.depth for n in nodes if n.is_leaf)
    return CausalTree(t=decomp.t, b=decomp.b, T=decomp.T, depth=depth, nodes=tuple(nodes))


@lru_cache(maxsize=None)
def tree_depth_for(T: int) -> int:
    """Depth of the tree over T leaves, by the same split recurrence as
    build_tree but without materializing nodes."""
    if T < 1:
        raise ValueError("need at least one leaf")
    if T == 1:
        return 0
    left = split_left_count(T)
    return 1 + max(tree_depth_for(left), tree_depth_for(T - left))


@dataclass(frozen=True)
class TraversalStep:
    index: int
    node: int
    phase: str
    leaf: int | None = None
    offset: int | None = None


def dfs_order(tree: CausalTree) -> tuple[TraversalStep, ...]:
    """Pre-order walk events: enter/exit per node, one leaf_emit per
    simulated step at each leaf."""
    steps: list[TraversalStep] = []

    def visit(node_id: int) -> None:
        node = tree.node(node_id)
        steps.append(TraversalStep(len(steps), node_id, ENTER))
        if node.is_leaf:
            L, R = node.interval
            for offset in range(R - L + 1):
                steps.append(
                    TraversalStep(len(steps), node_id, LEAF_EMIT, leaf=node.leaf_lo, offset=offset)
                )
        else:
            visit(node.left)  # type: ignore[arg-type]
            visit(node.right)  # type: ignore[arg-type]
        steps.append(TraversalStep(len(steps), node_id, EXIT))

    visit(0)
    return tuple(steps)


def time_to_leaf(tau: int, b: int, t: int) -> tuple[int, int]:
    """Map step time tau to its (leaf index, offset inside the leaf)."""
    if b < 1:
        raise ValueError(f"b must be >= 1, got {b}")
    if not 1 <= tau <= t:
        raise ValueError(f"tau {tau} outside [1, {t}]")
    k = -(-tau // b)
    delta = tau - ((k - 1) * b + 1)
    return k, delta


def leaf_to_time(k: int, delta: int, b: int, t: int) -> int:
    """Inverse of time_to_leaf; rejects offsets past the leaf's end."""
    if b < 1:
        raise ValueError(f"b must be >= 1, got {b}")
    T = -(-t // b)
    if not 1 <= k <= T:
        raise ValueError(f"leaf {k} outside [1, {T}]")
    L = (k - 1) * b + 1
    R = min(k * b, t)
    if not 0 <= delta <= R - L:
        raise ValueError(f"offset {delta} outside [0, {R - L}] for leaf {k}")
    return L + delta


def label_tree(
    tree: CausalTree, run: RunRecord, c_int: int, policy: str = POLICY_FULL
) -> CausalTree:
    """Audit mode: compute every node's interval summary, leaves from
    the oracle history and internal nodes by merging their children."""
    if run.t != tree.t:
        raise ValueError(f"tree is over t={tree.t} but run has t={run.t}")
    decomp = decompose_of(tree)
    labels: dict[int, IntervalSummary] = {}

    def fill(node_id: int) -> IntervalSummary:
        node = tree.node(node_id)
        if node.is_leaf:
            s = leaf_summary(run, decomp.block(node.leaf_lo), c_int, tree.b)
            if policy == POLICY_BOUNDARY:
                s = replace(s, policy=POLICY_BOUNDARY)
        else:
            s = merge(fill(node.left), fill(node.right))  # type: ignore[arg-type]
        labels[node_id] = s
        return s

    fill(0)
    return replace(tree, labels=labels)


def decompose_of(tree: CausalTree) -> BlockDecomposition:
    from .blocks import decompose

    return decompose(tree.t, tree.b)


@dataclass(frozen=True)
class RadialProfile:
    """Interval lengths by tree depth, root outward, with the check
    that block counts halve (rounded up) from parent to child."""

    levels: tuple[tuple[int, ...], ...]
    decay_ok: bool


def radial_profile(tree: CausalTree) -> RadialProfile:
    by_depth: dict[int, list[int]] = {}
    for node in tree.nodes:
        L, R = node.interval
        by_depth.setdefault(node.depth, []).append(R - L + 1)
    decay_ok = True
    for node in tree.nodes:
        if node.is_leaf:
            continue
        bound = split_left_count(node.leaf_count)
        for child_id in (node.left, node.right):
            child = tree.node(child_id)  # type: ignore[arg-type]
            if child.leaf_count > bound:
                decay_ok = False
    return RadialProfile(
        levels=tuple(tuple(by_depth[d]) for d in sorted(by_depth)),
        decay_ok=decay_ok,
    )


def tree_to_json(tree: CausalTree) -> dict:
    """JSON-ready structure; audit labels ride along as hex-encoded
    summary bytes when present."""
    from .codec import encode_summary

    nodes = []
    for n in tree.nodes:
        entry: dict = {
            "id": n.id,
            "leaves": [n.leaf_lo, n.leaf_hi],
            "interval": [n.interval[0], n.interval[1]],
            "depth": n.depth,
            "children": None if n.is_leaf else [n.left, n.right],
        }
        if tree.labels is not None:
            entry["summary_hex"] = encode_summary(tree.labels[n.id]).hex()
        nodes.append(entry)
    return {"t": tree.t, "b": tree.b, "T": tree.T, "depth": tree.depth, "nodes": nodes}
