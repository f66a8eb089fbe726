"""Task builders and brute-force oracles shared by the test modules."""

from __future__ import annotations

import itertools
import random
from collections import deque

from banditplan.search.tree import SearchNode, backup, remove_dead_end
from banditplan.task import GroundAction, GroundTask


def make_task(facts, actions, init, goal, name="toy") -> GroundTask:
    """Build a task from fact names; ``actions`` holds (name, pre, add, delete[, cost]) tuples."""
    idx = {f: i for i, f in enumerate(facts)}
    ids = lambda names: frozenset(idx[f] for f in names)  # noqa: E731
    ground = []
    for k, entry in enumerate(actions):
        name_, pre, add, delete, *cost = entry
        ground.append(GroundAction(name_, (), ids(pre), ids(add), ids(delete), cost[0] if cost else 1, k))
    return GroundTask(tuple(facts), tuple(ground), ids(init), ids(goal), name)


def chain_task() -> GroundTask:
    """a -> b -> g with unit costs: o1 needs a and adds b, o2 needs b and adds g."""
    return make_task(["a", "b", "g"], [("o1", ["a"], ["b"], []), ("o2", ["b"], ["g"], [])], ["a"], ["g"])


def random_task(rng: random.Random, n_facts: int = 8, n_actions: int = 10, max_pre: int = 2,
                goal_size: int = 2) -> GroundTask:
    facts = [f"f{i}" for i in range(n_facts)]
    n = len(facts)
    actions = []
    for k in range(n_actions):
        pre = rng.sample(facts, min(n, rng.randint(0, max_pre)))
        add = rng.sample(facts, min(n, rng.randint(1, 2)))
        delete = rng.sample(facts, min(n, rng.randint(0, 2)))
        actions.append((f"a{k}", pre, add, delete))
    init = rng.sample(facts, min(n, rng.randint(1, 3)))
    goal = rng.sample(facts, min(n, goal_size))
    return make_task(facts, actions, init, goal)


def naive_applicable(task: GroundTask, s) -> list:
    out = []
    for a in task.actions:
        if all(p in s for p in a.pre):
            out.append(a)
    return out


def h_plus(task: GroundTask, s) -> float:
    """Optimal delete-relaxation cost by breadth-first search over relaxed fact sets (unit costs)."""
    start = frozenset(s)
    if task.goal <= start:
        return 0
    seen = {start}
    queue = deque([(start, 0)])
    while queue:
        cur, d = queue.popleft()
        for a in task.actions:
            if a.pre <= cur and not a.add <= cur:
                nxt = cur | a.add
                if task.goal <= nxt:
                    return d + 1
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append((nxt, d + 1))
    return float("inf")


def relaxed_layers(task: GroundTask, s) -> dict[int, int]:
    """Layer in which each fact first appears when all applicable actions fire in parallel."""
    layer = {f: 0 for f in s}
    k = 0
    while True:
        k += 1
        new = {f for a in task.actions if all(p in layer for p in a.pre) for f in a.add if f not in layer}
        if not new:
            return layer
        for f in new:
            layer[f] = k


def naive_ground_names(domain, problem) -> set[str]:
    """Every type-consistent instantiation whose static preconditions and (in)equalities hold in init."""
    parents = {"object": None}
    for t in domain.types:
        if t.name != "object":
            parents[t.name] = t.type

    def is_a(t, target):
        while t is not None:
            if t == target:
                return True
            t = parents.get(t, "object" if t != "object" else None)
        return False

    objects = {o.name: o.type for o in list(domain.constants) + list(problem.objects)}
    fluent = {a.predicate for s in domain.actions for a in s.add + s.delete}
    init = set(problem.init)
    out = set()
    for schema in domain.actions:
        pools = [[o for o, t in objects.items() if is_a(t, p.type)] for p in schema.params]
        for combo in itertools.product(*pools):
            bind = {p.name: o for p, o in zip(schema.params, combo)}
            sub = lambda xs: tuple(bind.get(x, x) for x in xs)  # noqa: E731
            ok = True
            for at in schema.pre:
                args = sub(at.args)
                if at.predicate == "=":
                    ok = args[0] == args[1]
                elif at.predicate not in fluent:
                    ok = type(at)(at.predicate, args) in init
                if not ok:
                    break
            if ok:
                ok = all(bind.get(x, x) != bind.get(y, y) for x, y in schema.distinct)
            if ok:
                out.add("(" + " ".join((schema.name,) + combo) + ")")
    return out


def tree_coherence_errors(root, tol=1e-9) -> list[str]:
    """Nodes whose cached (count, sum, min, max) disagree with a scan of their live leaves."""
    order, stack = [], [root]
    while stack:
        n = stack.pop()
        order.append(n)
        stack.extend(n.children)
    leaf_hs = {}
    errors = []
    for n in reversed(order):
        hs = [n.h] if not n.children else [h for ch in n.children for h in leaf_hs[id(ch)]]
        leaf_hs[id(n)] = hs
        t, s, ss, lo, hi = len(hs), sum(hs), sum(h * h for h in hs), min(hs), max(hs)
        if n.dead:
            errors.append(f"{n!r} is dead but still attached")
        if n.stats.t != t or abs(n.stats.sum - s) > tol or (n.stats.lo, n.stats.hi) != (lo, hi):
            errors.append(f"{n!r}: cached {n.stats} vs leaves ({t}, {s}, {lo}, {hi})")
        if abs(n.stats.sumsq - ss) > tol * max(1.0, ss):
            errors.append(f"{n!r}: sum of squares {n.stats.sumsq} vs {ss}")
    return errors


def random_interleaving(rng, kind, max_nodes=2000, steps=300, p_remove=0.25):
    """Grow and prune a synthetic tree at random and return its root.

    Each step picks a live leaf and either expands it with 1-4 children or
    declares it a dead end.  A removal that would kill the root is skipped so
    the final tree is never empty.
    """
    root = SearchNode(None, rng.uniform(0, 20))
    leaves = [root]
    nodes = 1
    for _ in range(steps):
        leaf = rng.choice(leaves)
        if rng.random() < p_remove or nodes >= max_nodes:
            if len(leaves) == 1:
                continue
            leaves.remove(leaf)
            survivor = remove_dead_end(leaf, kind)
            assert survivor is not None
            leaves = [n for n in leaves if not _detached(n)]
            continue
        leaves.remove(leaf)
        k = min(rng.randint(1, 4), max_nodes - nodes)
        for _ in range(k):
            leaves.append(leaf.attach(rng.choice([rng.uniform(0, 20), float(rng.randint(0, 5))])))
        nodes += k
        backup(leaf, kind)
    return root


def _detached(node):
    while node.parent is not None:
        if node not in node.parent.children:
            return True
        node = node.parent
    return node.dead
