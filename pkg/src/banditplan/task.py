"""Grounded STRIPS tasks: states, actions, successor generation, plan checking."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

# A state is the frozen set of indices of the facts that hold in it.  frozenset
# caches its hash, so closed-set lookups stay O(1) after the first probe.
State = frozenset


class PlanningError(Exception):
    """Base class for task-level contract violations."""


class NotApplicableError(PlanningError):
    pass


@dataclass(frozen=True)
class GroundAction:
    name: str
    args: tuple[str, ...]
    pre: frozenset[int]
    add: frozenset[int]
    delete: frozenset[int]
    cost: int = 1
    index: int = -1

    def __post_init__(self):
        if self.cost < 0:
            raise ValueError(f"negative cost on {self}")
        # delete-then-add: a fact both deleted and added stays true
        if self.add & self.delete:
            object.__setattr__(self, "delete", self.delete - self.add)

    def __str__(self) -> str:
        return "(" + " ".join((self.name,) + self.args) + ")"

    def applicable(self, s: State) -> bool:
        return self.pre <= s


@dataclass(eq=False)
class GroundTask:
    """Grounded task <facts, actions, init, goal>.

    ``facts`` names every proposition; all other members refer to facts by
    position in that tuple.  Instances compare by identity.
    """

    facts: tuple[str, ...]
    actions: tuple[GroundAction, ...]
    init: State
    goal: frozenset[int]
    name: str = ""
    domain_name: str = ""
    _fact_index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        n = len(self.facts)
        self.init = frozenset(self.init)
        self.goal = frozenset(self.goal)
        actions = []
        seen = set()
        for i, a in enumerate(self.actions):
            if a.index != i:
                a = GroundAction(a.name, a.args, a.pre, a.add, a.delete, a.cost, i)
            key = (a.name, a.args)
            if key in seen:
                raise ValueError(f"duplicate action {a}")
            seen.add(key)
            for part in (a.pre, a.add, a.delete):
                if part and (max(part) >= n or min(part) < 0):
                    raise ValueError(f"action {a} references a fact outside the universe")
            actions.append(a)
        self.actions = tuple(actions)
        for part in (self.init, self.goal):
            if part and (max(part) >= n or min(part) < 0):
                raise ValueError("init/goal references a fact outside the universe")
        self._fact_index = {f: i for i, f in enumerate(self.facts)}

    def fact_id(self, name: str) -> int:
        return self._fact_index[name]

    def state(self, names: Iterable[str]) -> State:
        return State(self._fact_index[f] for f in names)

    def fact_names(self, s: Iterable[int]) -> list[str]:
        return sorted(self.facts[i] for i in s)

    def action(self, name: str) -> GroundAction:
        """Look up an action by its printed form, e.g. ``"(pick-up a)"``."""
        for a in self.actions:
            if str(a) == name:
                return a
        raise KeyError(name)


@dataclass(frozen=True)
class Plan:
    actions: tuple[GroundAction, ...] = ()

    @property
    def cost(self) -> int:
        return sum(a.cost for a in self.actions)

    def __len__(self) -> int:
        return len(self.actions)

    def __iter__(self):
        return iter(self.actions)

    def to_text(self) -> str:
        lines = [str(a).lower() for a in self.actions]
        lines.append(f"; cost = {self.cost}")
        return "\n".join(lines) + "\n"


def applicable_actions(task: GroundTask, s: State) -> list[GroundAction]:
    return [a for a in task.actions if a.pre <= s]


def apply(s: State, a: GroundAction) -> State:
    if not a.pre <= s:
        raise NotApplicableError(f"{a} is not applicable")
    return (s - a.delete) | a.add


def is_goal(task: GroundTask, s: State) -> bool:
    return task.goal <= s


@dataclass(frozen=True)
class Validation:
    valid: bool
    cost: int | None = None
    failed_step: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.valid


def validate_plan(task: GroundTask, plan: Sequence[GroundAction] | Plan) -> Validation:
    """Simulate ``plan`` from the initial state.

    Returns a falsy :class:`Validation` carrying the index of the first
    inapplicable step, or ``failed_step == len(plan)`` when every step applies
    but the goal does not hold at the end.
    """
    s = task.init
    cost = 0
    steps = list(plan)
    for i, a in enumerate(steps):
        if not a.pre <= s:
            missing = task.fact_names(a.pre - s)
            return Validation(False, failed_step=i, reason=f"{a} missing {missing}")
        s = (s - a.delete) | a.add
        cost += a.cost
    if not task.goal <= s:
        missing = task.fact_names(task.goal - s)
        return Validation(False, failed_step=len(steps), reason=f"goal facts unmet: {missing}")
    return Validation(True, cost=cost)


def read_plan(task: GroundTask, text: str) -> Plan:
    """Parse the plan file format written by :meth:`Plan.to_text`."""
    by_name = {str(a).lower(): a for a in task.actions}
    steps = []
    for line in text.splitlines():
        line = line.split(";", 1)[0].strip().lower()
        if not line:
            continue
        line = "(" + " ".join(line.strip("()").split()) + ")"
        try:
            steps.append(by_name[line])
        except KeyError:
            raise PlanningError(f"unknown action {line}") from None
    return Plan(tuple(steps))
