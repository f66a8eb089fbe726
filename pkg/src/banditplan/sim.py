"""Synthetic stationary bandits and expected cumulative regret.

Rewards come from per-(seed, arm) generator streams, so the j-th pull of an
arm returns the same reward under every policy (common random numbers).
Regret is the expected (pseudo-)regret: each pull of arm i costs the gap
between the best true mean and mu_i.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .bandit import (
    ArmStats,
    Direction,
    PolicyConfig,
    PolicyKind,
    UniformExploration,
    auer_threshold,
    select_arm,
)

BLOCK = 4096
CHECKPOINTS = (100, 1_000, 10_000, 100_000)


@dataclass(frozen=True)
class ArmSpec:
    kind: str
    params: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        k, p = self.kind, self.params
        if k == "bernoulli":
            ok = len(p) == 1 and 0.0 <= p[0] <= 1.0
        elif k == "uniform":
            ok = len(p) == 2 and p[0] <= p[1]
        elif k == "gaussian":
            ok = len(p) == 2 and p[1] >= 0.0
        elif k == "point":
            ok = len(p) == 1
        else:
            raise ValueError(f"unknown arm distribution {k!r}")
        if not ok or not all(math.isfinite(x) for x in p):
            raise ValueError(f"invalid parameters for {k}: {p}")

    @classmethod
    def parse(cls, text: str) -> "ArmSpec":
        """``bernoulli:0.9``, ``uniform:2:9``, ``gaussian:0:1`` or ``point:1``."""
        kind, *params = text.strip().split(":")
        return cls(kind.lower(), tuple(float(x) for x in params))

    def __str__(self) -> str:
        return ":".join([self.kind] + [f"{p:g}" for p in self.params])

    @property
    def mean(self) -> float:
        p = self.params
        if self.kind == "uniform":
            return 0.5 * (p[0] + p[1])
        return p[0]

    def draw(self, rng: np.random.Generator, n: int) -> np.ndarray:
        p = self.params
        if self.kind == "bernoulli":
            return (rng.random(n) < p[0]).astype(float)
        if self.kind == "uniform":
            return rng.uniform(p[0], p[1], n)
        if self.kind == "gaussian":
            return rng.normal(p[0], p[1], n)
        return np.full(n, p[0])


def parse_arms(text: str) -> list[ArmSpec]:
    return [ArmSpec.parse(part) for part in text.split(",") if part.strip()]


class _Stream:
    """Reward stream of one arm under one seed, drawn in fixed-size blocks."""

    def __init__(self, arm: ArmSpec, seed: int, index: int):
        self.arm = arm
        self.rng = np.random.default_rng([seed, index])
        self.buf = arm.draw(self.rng, BLOCK)
        self.pos = 0

    def next(self) -> float:
        if self.pos == BLOCK:
            self.buf = self.arm.draw(self.rng, BLOCK)
            self.pos = 0
        x = self.buf[self.pos]
        self.pos += 1
        return float(x)


def _gaps(arms: Sequence[ArmSpec], direction: Direction) -> list[float]:
    means = [a.mean for a in arms]
    if direction is Direction.MAXIMIZE:
        best = max(means)
        return [best - m for m in means]
    best = min(means)
    return [m - best for m in means]


@dataclass
class RegretTrace:
    pulls: list[int] = field(default_factory=list)
    increments: list[float] = field(default_factory=list)
    # cumulative[T] is the regret after T pulls; cumulative[0] == 0
    cumulative: list[float] = field(default_factory=lambda: [0.0])

    def regret(self, T: int | None = None) -> float:
        return self.cumulative[-1 if T is None else T]


def simulate(arms: Sequence[ArmSpec], policy: PolicyConfig, horizon: int, seed: int = 0) -> RegretTrace:
    """Run ``policy`` for ``horizon`` pulls, choosing arms with :func:`select_arm`."""
    if len(arms) < 2:
        raise ValueError("need at least two arms")
    if horizon < len(arms):
        raise ValueError("horizon shorter than the number of arms")
    streams = [_Stream(a, seed, i) for i, a in enumerate(arms)]
    gaps = _gaps(arms, policy.direction)
    stats = [ArmStats() for _ in arms]
    trace = RegretTrace()
    total = 0.0
    for T in range(horizon):
        i = select_arm(stats, T, policy)
        stats[i].push(streams[i].next())
        total += gaps[i]
        trace.pulls.append(i)
        trace.increments.append(gaps[i])
        trace.cumulative.append(total)
    return trace


def cumulative_regret(trace: RegretTrace | Sequence[int], arms: Sequence[ArmSpec],
                      direction: Direction | str = Direction.MAXIMIZE) -> float:
    pulls = trace.pulls if isinstance(trace, RegretTrace) else trace
    gaps = _gaps(arms, Direction(direction))
    total = 0.0
    for i in pulls:
        total += gaps[i]
    return total


def simulate_batch(arms: Sequence[ArmSpec], policy: PolicyConfig, horizon: int,
                   seeds: Iterable[int], checkpoints: Sequence[int] = CHECKPOINTS) -> dict[int, np.ndarray]:
    """Vectorised :func:`simulate` over many seeds.

    Returns ``{T: regret per seed}`` for each checkpoint ``T <= horizon``.
    The arm choices equal those of :func:`simulate` for every seed: the
    index arithmetic is performed in the same order and ``log T`` is taken
    from :func:`math.log` as in the scalar path.
    """
    seeds = list(seeds)
    S, K = len(seeds), len(arms)
    if K < 2:
        raise ValueError("need at least two arms")
    streams = [[_Stream(a, s, i) for i, a in enumerate(arms)] for s in seeds]
    buf = np.stack([np.stack([st.buf for st in row]) for row in streams])  # (S, K, BLOCK)
    pos = np.zeros((S, K), dtype=np.int64)
    t = np.zeros((S, K), dtype=np.int64)
    tot = np.zeros((S, K))
    sq = np.zeros((S, K))
    lo = np.full((S, K), np.inf)
    hi = np.full((S, K), -np.inf)
    gaps = np.array(_gaps(arms, policy.direction))
    regret = np.zeros(S)
    sign = float(policy.direction.sign)
    rows = np.arange(S)
    marks = {T for T in checkpoints if T <= horizon}
    out: dict[int, np.ndarray] = {}
    kind = policy.kind
    minimize = policy.direction is Direction.MINIMIZE
    for T in range(horizon):
        if T in marks:
            out[T] = regret.copy()
        if T < K:
            # every arm is unvisited until the first K pulls are done
            choice = np.full(S, T)
        else:
            choice = None
            if kind is PolicyKind.NORMAL and policy.auer_forced:
                need = auer_threshold(T)
                low = t < need
                if low.any():
                    forced = np.where(low.any(axis=1), low.argmax(axis=1), -1)
            logT = math.log(T)
            mean = tot / t
            if kind is PolicyKind.UCB1:
                idx = mean + sign * policy.c * np.sqrt(2.0 * logT / t)
            elif kind is PolicyKind.UNIFORM:
                if policy.uniform_exploration is UniformExploration.GROWING:
                    width = np.sqrt(6.0 * t * logT)
                else:
                    width = np.sqrt(6.0 * logT / t)
                idx = 0.5 * (hi + lo) + sign * (hi - lo) * width
            else:
                var = np.where(t < 2, 0.0, np.maximum(0.0, (sq - t * mean * mean) / np.maximum(t - 1, 1)))
                sd = np.sqrt(var)
                if kind is PolicyKind.NORMAL:
                    idx = mean + sign * sd * np.sqrt(16.0 * logT / t)
                else:
                    idx = mean + sign * sd * math.sqrt(2.0 * logT)
            choice = idx.argmin(axis=1) if minimize else idx.argmax(axis=1)
            if kind is PolicyKind.NORMAL and policy.auer_forced and low.any():
                choice = np.where(forced >= 0, forced, choice)
        p = pos[rows, choice]
        refill = np.nonzero(p == BLOCK)[0]
        for s in refill:
            k = choice[s]
            st = streams[s][k]
            st.pos = BLOCK
            st.next()
            buf[s, k] = st.buf
            pos[s, k] = 0
        p = pos[rows, choice]
        x = buf[rows, choice, p]
        pos[rows, choice] = p + 1
        t[rows, choice] += 1
        tot[rows, choice] += x
        sq[rows, choice] += x * x
        lo[rows, choice] = np.minimum(lo[rows, choice], x)
        hi[rows, choice] = np.maximum(hi[rows, choice], x)
        regret += gaps[choice]
    if horizon in marks:
        out[horizon] = regret.copy()
    return out


def write_csv(path, rows: Iterable[tuple[str, str, int, int, float]]) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["policy", "arms", "seed", "T", "regret"])
        for policy, arms, seed, T, regret in rows:
            w.writerow([policy, arms, seed, T, f"{regret:.6g}"])
