"""Delete-relaxation heuristics and goal count.

Heuristic values are floats; dead ends are reported as ``math.inf`` exactly,
never as a large sentinel.
"""

from __future__ import annotations

import heapq
import math
import weakref
from dataclasses import dataclass
from typing import Callable

from .task import GroundTask, State

INF = math.inf


@dataclass(frozen=True)
class Evaluation:
    value: float
    preferred: frozenset[int] = frozenset()  # action indices


class RelaxedGraph:
    """Precomputed fact/action incidence for relaxed reachability.

    Read-only after construction; :meth:`costs` allocates its scratch arrays
    per call, so one graph can serve several searches over the same task.
    """

    def __init__(self, task: GroundTask):
        self.task = task
        n = len(task.facts)
        self.pre = [tuple(sorted(a.pre)) for a in task.actions]
        self.add = [tuple(sorted(a.add)) for a in task.actions]
        self.cost = [a.cost for a in task.actions]
        self.consumers: list[list[int]] = [[] for _ in range(n)]
        for i, pre in enumerate(self.pre):
            for f in pre:
                self.consumers[f].append(i)
        self.no_pre = [i for i, pre in enumerate(self.pre) if not pre]
        self.goal = tuple(sorted(task.goal))

    def costs(self, s: State, combine: str) -> tuple[list[float], list[int]]:
        """Dijkstra-style fixpoint over facts.

        ``combine`` is ``"max"`` (h_max) or ``"add"`` (h_add).  Returns the
        per-fact cost and the best supporter of each fact (-1 for facts true in
        ``s`` or unreachable).  Supporter ties go to the cheaper action, then
        to the lower action index.
        """
        n = len(self.consumers)
        cost = [INF] * n
        support = [-1] * n
        unsat = [len(p) for p in self.pre]
        acc = [0.0] * len(self.pre)
        heap: list[tuple[float, int]] = []
        for f in s:
            cost[f] = 0.0
            heap.append((0.0, f))
        heapq.heapify(heap)
        is_max = combine == "max"
        done = [False] * n

        def fire(a: int, base: float):
            c = base + self.cost[a]
            for g in self.add[a]:
                if c < cost[g]:
                    cost[g] = c
                    support[g] = a
                    heapq.heappush(heap, (c, g))
                elif c == cost[g] and support[g] > a and not done[g]:
                    support[g] = a

        for a in self.no_pre:
            fire(a, 0.0)
        while heap:
            c, f = heapq.heappop(heap)
            if done[f] or c > cost[f]:
                continue
            done[f] = True
            for a in self.consumers[f]:
                acc[a] = max(acc[a], c) if is_max else acc[a] + c
                unsat[a] -= 1
                if unsat[a] == 0:
                    fire(a, acc[a])
        return cost, support


_graphs: "weakref.WeakKeyDictionary[GroundTask, RelaxedGraph]" = weakref.WeakKeyDictionary()


def relaxed_graph(task: GroundTask) -> RelaxedGraph:
    g = _graphs.get(task)
    if g is None:
        g = _graphs[task] = RelaxedGraph(task)
    return g


def _aggregate(graph: RelaxedGraph, s: State, combine: str) -> float:
    if graph.task.goal <= s:
        return 0.0
    cost, _ = graph.costs(s, combine)
    vals = [cost[g] for g in graph.goal]
    return max(vals) if combine == "max" else sum(vals)


def h_max(task: GroundTask, s: State) -> float:
    return _aggregate(relaxed_graph(task), s, "max")


def h_add(task: GroundTask, s: State) -> float:
    return _aggregate(relaxed_graph(task), s, "add")


def h_ff(task: GroundTask, s: State) -> Evaluation:
    """FF heuristic: cost of a relaxed plan extracted from h_add supporters.

    Preferred operators are the relaxed-plan actions applicable in ``s``.
    """
    graph = relaxed_graph(task)
    if task.goal <= s:
        return Evaluation(0.0)
    cost, support = graph.costs(s, "add")
    if any(cost[g] == INF for g in graph.goal):
        return Evaluation(INF)
    plan: set[int] = set()
    seen: set[int] = set(s)
    stack = [g for g in graph.goal if g not in s]
    while stack:
        f = stack.pop()
        if f in seen:
            continue
        seen.add(f)
        a = support[f]
        if a in plan:
            continue
        plan.add(a)
        stack.extend(p for p in graph.pre[a] if p not in seen)
    value = float(sum(graph.cost[a] for a in plan))
    preferred = frozenset(a for a in plan if task.actions[a].pre <= s)
    return Evaluation(value, preferred)


def h_goal_count(task: GroundTask, s: State) -> float:
    return float(len(task.goal - s))


def _scalar(fn):
    return lambda task: (lambda s: Evaluation(fn(task, s)))


HEURISTICS: dict[str, Callable[[GroundTask], Callable[[State], Evaluation]]] = {
    "ff": lambda task: (lambda s: h_ff(task, s)),
    "add": _scalar(h_add),
    "hmax": _scalar(h_max),
    "gc": _scalar(h_goal_count),
}


def make_heuristic(name: str, task: GroundTask) -> Callable[[State], Evaluation]:
    """Return ``state -> Evaluation`` for one of ``ff``, ``add``, ``hmax``, ``gc``."""
    try:
        return HEURISTICS[name](task)
    except KeyError:
        raise ValueError(f"unknown heuristic {name!r}; choose from {sorted(HEURISTICS)}") from None
