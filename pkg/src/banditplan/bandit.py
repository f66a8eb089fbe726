"""Arm statistics, confidence-bound index policies, GP density, Clark moments.

All index policies are direction-parametric.  With ``direction=maximize`` an
index is an upper confidence bound and the arm with the largest index wins;
with ``direction=minimize`` the exploration term is subtracted and the arm
with the smallest index wins.  In tree search the rewards are heuristic
values (costs), so the planner runs every policy in minimize mode.

Summary of the indices, for an arm pulled ``t`` times out of ``T``:

    ucb1          mean      +- c * sqrt(2 ln T / t)
    ucb1-normal   mean      +- std * sqrt(16 ln T / t)
    ucb1-normal2  mean      +- std * sqrt(2 ln T)
    ucb1-uniform  (lo+hi)/2 +- (hi-lo) * sqrt(6 t ln T)        ("growing")
                  (lo+hi)/2 +- (hi-lo) * sqrt(6 ln T / t)      ("shrinking")

For ucb1-uniform the uniform support [lo, hi] is estimated by the sample
min/max, which are the maximum-likelihood estimates for U(l, u).  With
``auer_forced`` (the default) ucb1-normal first pulls any arm whose count is
below ceil(8 ln T).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence


class Direction(str, Enum):
    MINIMIZE = "minimize"
    MAXIMIZE = "maximize"

    @property
    def sign(self) -> int:
        return 1 if self is Direction.MAXIMIZE else -1


class PolicyKind(str, Enum):
    UCB1 = "ucb1"
    NORMAL = "ucb1-normal"
    NORMAL2 = "ucb1-normal2"
    UNIFORM = "ucb1-uniform"


class UniformExploration(str, Enum):
    GROWING = "growing"
    SHRINKING = "shrinking"


@dataclass
class ArmStats:
    """Running summary of the rewards observed on one arm."""

    t: int = 0
    sum: float = 0.0
    sumsq: float = 0.0
    lo: float = math.inf
    hi: float = -math.inf

    @classmethod
    def from_samples(cls, xs) -> "ArmStats":
        st = cls()
        for x in xs:
            st.push(x)
        return st

    def push(self, x: float) -> None:
        if not math.isfinite(x):
            raise ValueError(f"non-finite reward {x!r}")
        self.t += 1
        self.sum += x
        self.sumsq += x * x
        if x < self.lo:
            self.lo = x
        if x > self.hi:
            self.hi = x

    def merge(self, other: "ArmStats") -> None:
        self.t += other.t
        self.sum += other.sum
        self.sumsq += other.sumsq
        self.lo = min(self.lo, other.lo)
        self.hi = max(self.hi, other.hi)

    def copy(self) -> "ArmStats":
        return ArmStats(self.t, self.sum, self.sumsq, self.lo, self.hi)

    @property
    def mean(self) -> float:
        if self.t == 0:
            raise ValueError("mean of an unpulled arm")
        return self.sum / self.t

    @property
    def var(self) -> float:
        """Bessel-corrected sample variance; 0 below two samples."""
        if self.t < 2:
            return 0.0
        m = self.sum / self.t
        return max(0.0, (self.sumsq - self.t * m * m) / (self.t - 1))

    @property
    def std(self) -> float:
        return math.sqrt(self.var)

    @property
    def midrange(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def spread(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class PolicyConfig:
    kind: PolicyKind = PolicyKind.UCB1
    direction: Direction = Direction.MAXIMIZE
    c: float = 1.0
    uniform_exploration: UniformExploration = UniformExploration.GROWING
    auer_forced: bool = True

    def __post_init__(self):
        object.__setattr__(self, "kind", PolicyKind(self.kind))
        object.__setattr__(self, "direction", Direction(self.direction))
        object.__setattr__(self, "uniform_exploration", UniformExploration(self.uniform_exploration))
        if self.c < 0:
            raise ValueError("exploration rate must be non-negative")


_MAX = PolicyConfig()


def mle_uniform(stats: ArmStats) -> tuple[float, float]:
    """(l_hat, u_hat) = (min, max) of the samples."""
    if stats.t < 1:
        raise ValueError("uniform MLE needs at least one sample")
    return stats.lo, stats.hi


def mle_gaussian(stats: ArmStats) -> tuple[float, float]:
    """(mean, std) with the Bessel-corrected variance."""
    if stats.t < 2:
        raise ValueError("standard deviation needs at least two samples")
    return stats.mean, stats.std


def index_ucb1(stats: ArmStats, T: int, cfg: PolicyConfig = _MAX, center: float | None = None) -> float:
    mu = stats.mean if center is None else center
    return mu + cfg.direction.sign * cfg.c * math.sqrt(2.0 * math.log(T) / stats.t)


def index_ucb1_normal(stats: ArmStats, T: int, cfg: PolicyConfig = _MAX,
                      center: float | None = None, spread: float | None = None) -> float:
    mu = stats.mean if center is None else center
    sd = stats.std if spread is None else spread
    return mu + cfg.direction.sign * sd * math.sqrt(16.0 * math.log(T) / stats.t)


def index_ucb1_normal2(stats: ArmStats, T: int, cfg: PolicyConfig = _MAX,
                       center: float | None = None, spread: float | None = None) -> float:
    mu = stats.mean if center is None else center
    sd = stats.std if spread is None else spread
    return mu + cfg.direction.sign * sd * math.sqrt(2.0 * math.log(T))


def index_ucb1_uniform(stats: ArmStats, T: int, cfg: PolicyConfig = _MAX) -> float:
    lo, hi = mle_uniform(stats)
    if cfg.uniform_exploration is UniformExploration.GROWING:
        width = math.sqrt(6.0 * stats.t * math.log(T))
    else:
        width = math.sqrt(6.0 * math.log(T) / stats.t)
    return 0.5 * (hi + lo) + cfg.direction.sign * (hi - lo) * width


def policy_index(stats: ArmStats, T: int, cfg: PolicyConfig,
                 center: float | None = None, spread: float | None = None) -> float:
    """Index of ``stats`` under ``cfg.kind``.

    ``center``/``spread`` replace the sample mean/std for the mean-based
    policies; the tree search uses them for Full Bellman and Clark backups.
    They are ignored by ucb1-uniform, which reads min/max directly.
    """
    kind = cfg.kind
    if kind is PolicyKind.UCB1:
        return index_ucb1(stats, T, cfg, center)
    if kind is PolicyKind.NORMAL:
        return index_ucb1_normal(stats, T, cfg, center, spread)
    if kind is PolicyKind.NORMAL2:
        return index_ucb1_normal2(stats, T, cfg, center, spread)
    return index_ucb1_uniform(stats, T, cfg)


def auer_threshold(T: int) -> int:
    return math.ceil(8.0 * math.log(T)) if T > 1 else 0


def select_arm(arms: Sequence[ArmStats], T: int, cfg: PolicyConfig,
               index: Callable[[int, ArmStats], float] | None = None) -> int:
    """Pick the next arm.

    Unpulled arms come first, then (ucb1-normal with ``auer_forced``) arms
    below the forced-exploration count, then the best index.  Every tie goes
    to the lowest arm index.  ``index(i, stats)`` overrides the default
    :func:`policy_index`.
    """
    if not arms:
        raise ValueError("no arms to select from")
    for i, a in enumerate(arms):
        if a.t == 0:
            return i
    if cfg.kind is PolicyKind.NORMAL and cfg.auer_forced:
        need = auer_threshold(T)
        for i, a in enumerate(arms):
            if a.t < need:
                return i
    if index is None:
        values = [policy_index(a, T, cfg) for a in arms]
    else:
        values = [index(i, a) for i, a in enumerate(arms)]
    return argbest(values, cfg.direction)


def argbest(values: Sequence[float], direction: Direction) -> int:
    best = 0
    if direction is Direction.MINIMIZE:
        for i in range(1, len(values)):
            if values[i] < values[best]:
                best = i
    else:
        for i in range(1, len(values)):
            if values[i] > values[best]:
                best = i
    return best


# ---------------------------------------------------------------------------
# Generalized Pareto


@dataclass(frozen=True)
class GpParams:
    theta: float = 0.0
    sigma: float = 1.0
    xi: float = 0.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("GP scale must be positive")

    @property
    def support(self) -> tuple[float, float]:
        if self.xi < 0:
            return self.theta, self.theta - self.sigma / self.xi
        return self.theta, math.inf


def gp_pdf(x: float, p: GpParams) -> float:
    """Generalized Pareto density; 0 outside the support."""
    lo, hi = p.support
    if x < lo or x > hi:
        return 0.0
    z = (x - p.theta) / p.sigma
    if p.xi == 0:
        return math.exp(-z) / p.sigma
    base = 1.0 + p.xi * z
    power = -(p.xi + 1.0) / p.xi
    if base <= 0.0:
        # upper endpoint when xi < 0
        if power > 0:
            return 0.0
        return 1.0 / p.sigma if power == 0 else math.inf
    return base ** power / p.sigma


def uniform_pdf(x: float, lo: float, hi: float) -> float:
    return 1.0 / (hi - lo) if lo <= x <= hi else 0.0


# ---------------------------------------------------------------------------
# Clark's moments for the max/min of two independent Gaussians

_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)


def _cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / _SQRT2)


def _pdf(x: float) -> float:
    return math.exp(-0.5 * x * x) / _SQRT2PI


def clark_extreme_moments(mu1: float, sigma1: float, mu2: float, sigma2: float,
                          direction: Direction | str = Direction.MAXIMIZE) -> tuple[float, float]:
    """Mean and std of max(X1, X2) (or min) for independent X_i ~ N(mu_i, sigma_i^2).

    The result is the exact first two moments of the extremum; treating it as
    Gaussian again, as a fold over more than two arms does, is an
    approximation.
    """
    if sigma1 < 0 or sigma2 < 0:
        raise ValueError("negative standard deviation")
    if Direction(direction) is Direction.MINIMIZE:
        m, s = clark_extreme_moments(-mu1, sigma1, -mu2, sigma2, Direction.MAXIMIZE)
        return -m, s
    a = math.hypot(sigma1, sigma2)
    if a == 0.0:
        return (mu1, 0.0) if mu1 >= mu2 else (mu2, 0.0)
    # moments are computed relative to mu2 to avoid cancellation in m2 - m1^2
    diff = mu1 - mu2
    alpha = diff / a
    p, q, d = _cdf(alpha), _cdf(-alpha), _pdf(alpha)
    m1 = diff * p + a * d
    m2 = (diff * diff + sigma1 * sigma1) * p + sigma2 * sigma2 * q + diff * a * d
    return mu2 + m1, math.sqrt(max(0.0, m2 - m1 * m1))
