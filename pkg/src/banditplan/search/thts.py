"""Trial-based heuristic tree search (greedy UCT family)."""

from __future__ import annotations

import logging
import random
from typing import Callable

from ..heuristics import Evaluation, make_heuristic
from ..task import GroundTask, Plan, State, applicable_actions, is_goal
from .config import Outcome, SearchConfig, SearchResult
from .tree import SearchNode, backup, descend, remove_dead_end

log = logging.getLogger(__name__)


def _plan_to(node: SearchNode, last=None) -> Plan:
    steps = [n.action for n in node.path()[1:]]
    if last is not None:
        steps.append(last)
    return Plan(tuple(steps))


def thts(task: GroundTask, config: SearchConfig,
         heuristic: Callable[[State], Evaluation] | None = None) -> SearchResult:
    """Run THTS until a goal is generated, the tree dies, or a budget runs out.

    Each trial descends from the root by the configured bandit, expands the
    selected leaf, evaluates every new successor once, and backs the leaf
    statistics up to the root.  Successors already generated elsewhere are
    not attached, and dead ends (h = inf, or nodes left without children) are
    removed from the tree.
    """
    if config.algorithm == "gbfs":
        raise ValueError("use gbfs() for greedy best-first search")
    h = heuristic or make_heuristic(config.heuristic, task)
    policy, kind = config.policy, config.backup
    boost = config.preferred == "boost"
    fifo = config.tie_break == "fifo"
    gen = 0
    rng = random.Random(config.seed)
    res = SearchResult(Outcome.EXHAUSTED)

    if is_goal(task, task.init):
        res.outcome, res.plan = Outcome.SOLVED, Plan()
        return res
    ev = h(task.init)
    res.evaluations = 1
    res.h_init = ev.value
    res.h_values.append(ev.value)
    if ev.value == float("inf"):
        return res
    root = SearchNode(task.init, ev.value, preferred_ops=ev.preferred if boost else frozenset())
    generated = {task.init}

    while True:
        if config.max_expansions is not None and res.expansions >= config.max_expansions:
            res.outcome = Outcome.BUDGET
            return res
        leaf = descend(root, policy, kind, boost, fifo)
        res.trials += 1
        ops = applicable_actions(task, leaf.state)
        if config.shuffle:
            rng.shuffle(ops)
        res.expansions += 1
        for a in ops:
            succ = (leaf.state - a.delete) | a.add
            if succ in generated:
                continue
            generated.add(succ)
            if task.goal <= succ:
                res.outcome, res.plan = Outcome.SOLVED, _plan_to(leaf, a)
                return res
            if res.evaluations >= config.max_evaluations:
                res.outcome = Outcome.BUDGET
                return res
            ev = h(succ)
            res.evaluations += 1
            res.h_values.append(ev.value)
            if ev.value == float("inf"):
                continue
            gen += 1
            leaf.attach(ev.value, succ, a, preferred=a.index in leaf.preferred_ops,
                        preferred_ops=ev.preferred if boost else frozenset(), gen=gen)
        if leaf.children:
            backup(leaf, kind)
        elif remove_dead_end(leaf, kind) is None:
            res.outcome = Outcome.EXHAUSTED
            return res
        if config.trace:
            log.debug("trial=%d depth=%d evaluations=%d", res.trials, len(leaf.path()) - 1, res.evaluations)
