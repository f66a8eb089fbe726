"""Tree-based open list for THTS.

Each node caches the statistics of the heuristic values at the leaves of its
subtree: count, sum, sum of squares, min and max.  A leaf contributes its own
h once; an expanded node's statistics are the merge of its children's.  The
mean is the Monte Carlo backup value, min/max are the Full Bellman values and
the uniform-support estimates, and the Clark backup additionally keeps a
(mean, std) estimate of the subtree minimum.
"""

from __future__ import annotations

import math
from typing import Iterator

from ..bandit import (
    ArmStats,
    Direction,
    PolicyConfig,
    PolicyKind,
    clark_extreme_moments,
    index_ucb1_uniform,
    policy_index,
    select_arm,
)
from .config import Backup


class SearchNode:
    __slots__ = ("state", "parent", "action", "children", "stats", "h", "expanded",
                 "dead", "preferred", "preferred_ops", "clark", "gen", "lo_gen")

    def __init__(self, state, h: float, parent: "SearchNode | None" = None, action=None,
                 preferred: bool = False, preferred_ops: frozenset = frozenset(), gen: int = 0):
        if not math.isfinite(h):
            raise ValueError("dead-end nodes must not enter the tree")
        self.state = state
        self.parent = parent
        self.action = action
        self.children: list[SearchNode] = []
        self.stats = ArmStats(1, h, h * h, h, h)
        self.h = h
        self.expanded = False
        self.dead = False
        self.preferred = preferred
        self.preferred_ops = preferred_ops
        self.clark = (h, 0.0)
        # generation number of this node / of the oldest leaf below attaining stats.lo
        self.gen = gen
        self.lo_gen = gen

    def __repr__(self) -> str:
        return f"SearchNode(h={self.h}, t={self.stats.t}, children={len(self.children)})"

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def leaves(self) -> Iterator["SearchNode"]:
        if not self.children:
            yield self
            return
        for ch in self.children:
            yield from ch.leaves()

    def path(self) -> list["SearchNode"]:
        out = []
        node: SearchNode | None = self
        while node is not None:
            out.append(node)
            node = node.parent
        out.reverse()
        return out

    def attach(self, h: float, state=None, action=None, preferred: bool = False,
               preferred_ops: frozenset = frozenset(), gen: int = 0) -> "SearchNode":
        child = SearchNode(state, h, self, action, preferred, preferred_ops, gen)
        self.children.append(child)
        self.expanded = True
        return child


def _refresh(node: SearchNode, kind: Backup) -> None:
    st = ArmStats()
    for ch in node.children:
        st.merge(ch.stats)
    node.stats = st
    node.lo_gen = min(ch.lo_gen for ch in node.children if ch.stats.lo == st.lo)
    if kind is Backup.CLARK:
        node.clark = clark_fold(node.children)


def clark_fold(children: list[SearchNode]) -> tuple[float, float]:
    """Left fold of Clark's minimum over the children's (mean, std) estimates.

    Children with fewer than two leaves contribute std 0.
    """
    first = children[0].stats
    mu, sd = first.mean, first.std
    for ch in children[1:]:
        mu, sd = clark_extreme_moments(mu, sd, ch.stats.mean, ch.stats.std, Direction.MINIMIZE)
    return mu, sd


def backup(node: SearchNode, kind: Backup = Backup.MONTE_CARLO) -> None:
    """Recompute cached statistics on ``node`` and all its ancestors."""
    cur: SearchNode | None = node
    while cur is not None:
        if cur.children:
            _refresh(cur, kind)
        cur = cur.parent


def backup_monte_carlo(node: SearchNode) -> None:
    backup(node, Backup.MONTE_CARLO)


def backup_full_bellman(node: SearchNode) -> None:
    backup(node, Backup.FULL_BELLMAN)


def backup_clark(node: SearchNode) -> None:
    backup(node, Backup.CLARK)


def node_value(node: SearchNode, kind: Backup, direction: Direction = Direction.MINIMIZE) -> float:
    """The backed-up NEC value of ``node``."""
    if kind is Backup.MONTE_CARLO:
        return node.stats.mean
    if kind is Backup.FULL_BELLMAN:
        return node.stats.lo if direction is Direction.MINIMIZE else node.stats.hi
    return node.clark[0]


def remove_dead_end(node: SearchNode, kind: Backup = Backup.MONTE_CARLO) -> SearchNode | None:
    """Detach a dead node, propagating death to ancestors left childless.

    Returns the lowest surviving ancestor (whose statistics and those of its
    ancestors are recomputed), or None when the root itself died.
    """
    node.dead = True
    node.children = []
    parent = node.parent
    while parent is not None:
        parent.children = [ch for ch in parent.children if ch is not node]
        if parent.children:
            backup(parent, kind)
            return parent
        parent.dead = True
        node, parent = parent, parent.parent
    return None


def select_child(node: SearchNode, cfg: PolicyConfig, kind: Backup, boost_preferred: bool = False,
                 fifo_ties: bool = False) -> int:
    """Index of the child to descend into.

    With ``fifo_ties`` equal indices are resolved in favour of the subtree
    holding the oldest minimum-h leaf instead of the lowest child index; with
    a Full Bellman backup and zero exploration this reproduces GBFS's FIFO
    expansion order exactly.
    """
    children = node.children
    if boost_preferred:
        for i, ch in enumerate(children):
            if ch.preferred and not ch.expanded:
                return i
    T = node.stats.t
    if cfg.kind is PolicyKind.UNIFORM:
        def index(i, st):
            return index_ucb1_uniform(st, T, cfg)
    elif kind is Backup.CLARK:
        def index(i, st):
            mu, sd = children[i].clark
            return policy_index(st, T, cfg, center=mu, spread=sd)
    else:
        def index(i, st):
            return policy_index(st, T, cfg, center=node_value(children[i], kind, cfg.direction))
    if fifo_ties:
        def fifo(i, st):
            return index(i, st), children[i].lo_gen
        index_key = fifo
    else:
        index_key = index
    return select_arm([ch.stats for ch in children], T, cfg, index_key)


def descend(root: SearchNode, cfg: PolicyConfig, kind: Backup, boost_preferred: bool = False,
            fifo_ties: bool = False) -> SearchNode:
    node = root
    while node.children:
        node = node.children[select_child(node, cfg, kind, boost_preferred, fifo_ties)]
    return node
