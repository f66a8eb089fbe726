"""Greedy best-first search over a priority-queue open list."""

from __future__ import annotations

import heapq
import itertools
import logging
from typing import Callable

from ..heuristics import Evaluation, make_heuristic
from ..task import GroundAction, GroundTask, Plan, State, applicable_actions
from .config import Outcome, SearchConfig, SearchResult

log = logging.getLogger(__name__)


def _plan(parents: dict, state: State, last: GroundAction) -> Plan:
    steps = [last]
    while True:
        prev, a = parents[state]
        if a is None:
            break
        steps.append(a)
        state = prev
    steps.reverse()
    return Plan(tuple(steps))


def gbfs(task: GroundTask, config: SearchConfig | None = None,
         heuristic: Callable[[State], Evaluation] | None = None) -> SearchResult:
    """GBFS ordered by h with FIFO tie-breaking and early goal detection.

    Every generated state enters a closed set, so duplicates are neither
    evaluated nor queued.  Dead ends (h = inf) are dropped.
    """
    config = config or SearchConfig(algorithm="gbfs")
    h = heuristic or make_heuristic(config.heuristic, task)
    res = SearchResult(Outcome.EXHAUSTED)
    if task.goal <= task.init:
        res.outcome, res.plan = Outcome.SOLVED, Plan()
        return res
    ev = h(task.init)
    res.evaluations = 1
    res.h_init = ev.value
    res.h_values.append(ev.value)
    if ev.value == float("inf"):
        return res
    counter = itertools.count()
    open_list = [(ev.value, next(counter), task.init)]
    parents: dict[State, tuple[State | None, GroundAction | None]] = {task.init: (None, None)}
    while open_list:
        if config.max_expansions is not None and res.expansions >= config.max_expansions:
            res.outcome = Outcome.BUDGET
            return res
        _, _, s = heapq.heappop(open_list)
        res.expansions += 1
        for a in applicable_actions(task, s):
            succ = (s - a.delete) | a.add
            if succ in parents:
                continue
            parents[succ] = (s, a)
            if task.goal <= succ:
                res.outcome, res.plan = Outcome.SOLVED, _plan(parents, s, a)
                return res
            if res.evaluations >= config.max_evaluations:
                res.outcome = Outcome.BUDGET
                return res
            ev = h(succ)
            res.evaluations += 1
            res.h_values.append(ev.value)
            if ev.value != float("inf"):
                heapq.heappush(open_list, (ev.value, next(counter), succ))
        if config.trace:
            log.debug("expansion=%d open=%d evaluations=%d", res.expansions, len(open_list), res.evaluations)
    return res
