from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from ..bandit import Direction, PolicyConfig, PolicyKind, UniformExploration
from ..task import Plan


class Backup(str, Enum):
    MONTE_CARLO = "monte-carlo"
    FULL_BELLMAN = "full-bellman"
    CLARK = "clark"


# algorithm -> (bandit policy, backup)
ALGORITHMS: dict[str, tuple[PolicyKind, Backup] | None] = {
    "gbfs": None,
    "guct": (PolicyKind.UCB1, Backup.MONTE_CARLO),
    "guct-star": (PolicyKind.UCB1, Backup.FULL_BELLMAN),
    "guct-normal": (PolicyKind.NORMAL, Backup.MONTE_CARLO),
    "guct-star-normal": (PolicyKind.NORMAL, Backup.FULL_BELLMAN),
    "guct-normal2": (PolicyKind.NORMAL2, Backup.MONTE_CARLO),
    "guct-star-normal2": (PolicyKind.NORMAL2, Backup.FULL_BELLMAN),
    "guct-plus-normal2": (PolicyKind.NORMAL2, Backup.CLARK),
    "guct-uniform": (PolicyKind.UNIFORM, Backup.FULL_BELLMAN),
}


class Outcome(str, Enum):
    SOLVED = "solved"
    EXHAUSTED = "exhausted"
    BUDGET = "budget-reached"


@dataclass(frozen=True)
class SearchConfig:
    algorithm: str = "guct-uniform"
    heuristic: str = "ff"
    max_evaluations: int = 10_000
    max_expansions: int | None = None
    seed: int = 0
    c: float = 1.0
    uniform_exploration: UniformExploration = UniformExploration.GROWING
    auer_forced: bool = True
    preferred: str = "off"  # "off" | "boost"
    # THTS only: shuffle successor order with the seed before attaching children
    shuffle: bool = True
    # THTS only: "index" breaks equal bandit indices by child order, "fifo" by leaf age
    tie_break: str = "index"
    trace: bool = False

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.max_evaluations <= 0:
            raise ValueError("evaluation budget must be positive")
        if self.max_expansions is not None and self.max_expansions <= 0:
            raise ValueError("expansion budget must be positive")
        if self.preferred not in ("off", "boost"):
            raise ValueError(f"unknown preferred-operator mode {self.preferred!r}")
        if self.tie_break not in ("index", "fifo"):
            raise ValueError(f"unknown tie-break mode {self.tie_break!r}")
        object.__setattr__(self, "uniform_exploration", UniformExploration(self.uniform_exploration))

    @property
    def policy(self) -> PolicyConfig:
        wiring = ALGORITHMS[self.algorithm]
        if wiring is None:
            raise ValueError("gbfs has no bandit policy")
        return PolicyConfig(wiring[0], Direction.MINIMIZE, self.c, self.uniform_exploration, self.auer_forced)

    @property
    def backup(self) -> Backup:
        wiring = ALGORITHMS[self.algorithm]
        if wiring is None:
            raise ValueError("gbfs has no backup")
        return wiring[1]


@dataclass
class SearchResult:
    outcome: Outcome
    plan: Plan | None = None
    evaluations: int = 0
    expansions: int = 0
    trials: int = 0
    h_init: float = 0.0
    # every heuristic value computed, in evaluation order
    h_values: list[float] = field(default_factory=list, repr=False)

    @property
    def solved(self) -> bool:
        return self.outcome is Outcome.SOLVED

    @property
    def frac_h_above_init(self) -> float:
        if not self.h_values:
            return 0.0
        return sum(1 for h in self.h_values if h > self.h_init) / len(self.h_values)
