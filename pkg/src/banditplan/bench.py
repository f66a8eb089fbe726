"""Benchmark harness: algorithm x heuristic x seed grids over PDDL problems."""

from __future__ import annotations

import csv
import glob
import io
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from statistics import mean
from typing import Iterable, Sequence

import yaml

from .pddl import PDDLError, load_task
from .search import SearchConfig, search
from .task import validate_plan

log = logging.getLogger(__name__)

HEADER = ["domain", "problem", "algorithm", "heuristic", "seed", "solved", "evaluations",
          "expansions", "plan_length", "plan_cost", "wall_time_s", "frac_h_above_init"]
SUMMARY_HEADER = ["algorithm", "heuristic", "seeds", "mean_solved", "mean_ipc_score"]

BENCHMARK_DIR = Path(__file__).parent / "benchmarks"


def ipc_score(times: Iterable[float | None], limit: float = 300.0) -> float:
    """Sum of min(1, 1 - log t / log limit) over solved instances (``None`` = unsolved)."""
    total = 0.0
    for t in times:
        if t is None:
            continue
        if t <= 0:
            raise ValueError("solve times must be positive")
        total += max(0.0, min(1.0, 1.0 - math.log(t) / math.log(limit)))
    return total


@dataclass
class SuiteConfig:
    problems: list[tuple[str, str]]  # (domain file, problem file)
    algorithms: list[str] = field(default_factory=lambda: ["gbfs", "guct-uniform"])
    heuristics: list[str] = field(default_factory=lambda: ["ff"])
    seeds: list[int] = field(default_factory=lambda: [0])
    max_evaluations: int = 10_000
    # advisory: only used as the IPC-score limit
    time_limit: float | None = None
    output: str | None = None
    plan_dir: str | None = None
    coverage_dat: str | None = None
    # one file per run listing every heuristic value computed
    eval_log_dir: str | None = None
    # wall_time_s is written as 0 when false, making reruns byte-identical
    timing: bool = True
    workers: int = 1
    preferred: str = "off"
    c: float = 1.0
    uniform_exploration: str = "growing"

    def __post_init__(self):
        for name in ("problems", "algorithms", "heuristics", "seeds"):
            if not getattr(self, name):
                raise ValueError(f"suite needs a nonempty {name} list")
        if self.max_evaluations <= 0:
            raise ValueError("evaluation budget must be positive")

    @classmethod
    def from_file(cls, path) -> "SuiteConfig":
        """Load a YAML suite description; relative paths resolve against its directory."""
        path = Path(path)
        with open(path, encoding="utf-8") as f:
            raw = yaml.safe_load(f) or {}
        base = path.parent
        problems: list[tuple[str, str]] = []
        for entry in raw.pop("problems", []):
            dom = str(base / entry["domain"])
            for pattern in entry["problems"]:
                matches = sorted(glob.glob(str(base / pattern)))
                if not matches:
                    raise FileNotFoundError(f"no problem files match {pattern}")
                problems.extend((dom, m) for m in matches)
        for key in ("output", "plan_dir", "coverage_dat", "eval_log_dir"):
            if raw.get(key):
                raw[key] = str(base / raw[key])
        return cls(problems=problems, **raw)


@dataclass
class RunRecord:
    domain: str
    problem: str
    algorithm: str
    heuristic: str
    seed: int
    solved: bool = False
    evaluations: int = 0
    expansions: int = 0
    plan_length: int = -1
    plan_cost: int = -1
    wall_time_s: float = 0.0
    frac_h_above_init: float = 0.0
    error: str | None = None
    plan_text: str | None = field(default=None, repr=False)
    h_init: float = 0.0
    h_values: list[float] = field(default_factory=list, repr=False)

    def row(self) -> list[str]:
        head = [self.domain, self.problem, self.algorithm, self.heuristic, str(self.seed)]
        if self.error is not None:
            return head + ["0", "", "", "", "", "", ""]
        return head + [
            str(int(self.solved)), str(self.evaluations), str(self.expansions),
            str(self.plan_length), str(self.plan_cost), f"{self.wall_time_s:.6g}",
            f"{self.frac_h_above_init:.6g}",
        ]


@lru_cache(maxsize=8)
def _load(domain_path: str, problem_path: str):
    return load_task(domain_path, problem_path)


def _names(domain_path: str, problem_path: str) -> tuple[str, str]:
    return Path(domain_path).parent.name, Path(problem_path).stem


def run_one(domain_path: str, problem_path: str, algorithm: str, heuristic: str, seed: int,
            max_evaluations: int = 10_000, timing: bool = True, **search_kw) -> RunRecord:
    dname, pname = _names(domain_path, problem_path)
    rec = RunRecord(dname, pname, algorithm, heuristic, seed)
    try:
        task = _load(domain_path, problem_path)
    except (OSError, PDDLError) as exc:
        rec.error = f"{type(exc).__name__}: {exc}"
        return rec
    cfg = SearchConfig(algorithm=algorithm, heuristic=heuristic, seed=seed,
                       max_evaluations=max_evaluations, **search_kw)
    start = time.perf_counter()
    res = search(task, cfg)
    elapsed = time.perf_counter() - start
    rec.evaluations = res.evaluations
    rec.expansions = res.expansions
    rec.frac_h_above_init = res.frac_h_above_init
    rec.wall_time_s = elapsed if timing else 0.0
    rec.h_init, rec.h_values = res.h_init, res.h_values
    if res.solved:
        check = validate_plan(task, res.plan)
        if not check:
            raise AssertionError(f"{algorithm} returned an invalid plan on {pname}: {check.reason}")
        rec.solved = True
        rec.plan_length = len(res.plan)
        rec.plan_cost = res.plan.cost
        rec.plan_text = res.plan.to_text()
    return rec


def _run_job(job: tuple) -> RunRecord:
    args, kw = job
    return run_one(*args, **kw)


def run_suite(config: SuiteConfig) -> tuple[list[RunRecord], list[list[str]]]:
    """Run every (problem, algorithm, heuristic, seed) and write the CSV if requested.

    Rows come back in configuration order regardless of ``workers``.
    """
    kw = dict(max_evaluations=config.max_evaluations, timing=config.timing, preferred=config.preferred,
              c=config.c, uniform_exploration=config.uniform_exploration)
    jobs = [((d, p, alg, h, seed), kw)
            for d, p in config.problems
            for alg in config.algorithms
            for h in config.heuristics
            for seed in config.seeds]
    if config.workers > 1:
        with ProcessPoolExecutor(config.workers) as pool:
            records = list(pool.map(_run_job, jobs))
    else:
        records = [_run_job(j) for j in jobs]
    for r in records:
        if r.error:
            log.warning("%s/%s: %s", r.domain, r.problem, r.error)
    summary = summarize(records, config)
    if config.output:
        with open(config.output, "w", newline="", encoding="utf-8") as f:
            f.write(format_csv(records, summary))
    if config.plan_dir:
        write_plans(records, config.plan_dir)
    if config.coverage_dat:
        write_coverage(records, config.coverage_dat, config.max_evaluations)
    if config.eval_log_dir:
        write_eval_logs(records, config.eval_log_dir)
    return records, summary


def summarize(records: Sequence[RunRecord], config: SuiteConfig) -> list[list[str]]:
    rows = []
    limit = config.time_limit or 300.0
    for alg in config.algorithms:
        for h in config.heuristics:
            solved, ipc = [], []
            for seed in config.seeds:
                mine = [r for r in records if (r.algorithm, r.heuristic, r.seed) == (alg, h, seed)]
                solved.append(sum(r.solved for r in mine))
                if config.timing:
                    ipc.append(ipc_score([max(r.wall_time_s, 1e-9) if r.solved else None for r in mine], limit))
            rows.append([alg, h, str(len(config.seeds)), f"{mean(solved):.6g}",
                         f"{mean(ipc):.6g}" if ipc else ""])
    return rows


def format_csv(records: Sequence[RunRecord], summary: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for r in records:
        w.writerow(r.row())
    buf.write("\n# summary\n")
    w.writerow(SUMMARY_HEADER)
    for row in summary:
        w.writerow(row)
    errors = sorted({(r.domain, r.problem, r.error) for r in records if r.error})
    for d, p, e in errors:
        buf.write(f"# error {d}/{p}: {e}\n")
    return buf.getvalue()


def read_csv(text: str) -> tuple[list[dict[str, str]], list[dict[str, str]]]:
    """Split a suite CSV into (run rows, summary rows)."""
    data, _, rest = text.partition("\n# summary\n")
    runs = list(csv.DictReader(io.StringIO(data.strip("\n") + "\n")))
    summary_lines = [ln for ln in rest.splitlines() if ln and not ln.startswith("#")]
    summary = list(csv.DictReader(io.StringIO("\n".join(summary_lines) + "\n")))
    return runs, summary


def run_stem(r: RunRecord) -> str:
    return f"{r.domain}-{r.problem}-{r.algorithm}-{r.heuristic}-s{r.seed}"


def plan_filename(r: RunRecord) -> str:
    return run_stem(r) + ".plan"


def write_eval_logs(records: Iterable[RunRecord], log_dir) -> None:
    """First line is h of the initial state, then one evaluated h per line (``inf`` for dead ends)."""
    os.makedirs(log_dir, exist_ok=True)
    for r in records:
        if r.error:
            continue
        with open(os.path.join(log_dir, run_stem(r) + ".hlog"), "w", encoding="utf-8") as f:
            f.write(f"# h_init {r.h_init!r}\n")
            f.writelines(f"{h!r}\n" for h in r.h_values)


def write_plans(records: Iterable[RunRecord], plan_dir) -> None:
    os.makedirs(plan_dir, exist_ok=True)
    for r in records:
        if r.solved and r.plan_text is not None:
            with open(os.path.join(plan_dir, plan_filename(r)), "w", encoding="utf-8") as f:
                f.write(r.plan_text)


def write_coverage(records: Sequence[RunRecord], path, budget: int, points: int = 50) -> None:
    """Mean solved count against evaluation budget, one gnuplot data block per configuration."""
    configs = list(dict.fromkeys((r.algorithm, r.heuristic) for r in records))
    budgets = sorted({max(1, round(budget * (k + 1) / points)) for k in range(points)})
    with open(path, "w", encoding="utf-8") as f:
        for alg, h in configs:
            mine = [r for r in records if (r.algorithm, r.heuristic) == (alg, h)]
            seeds = sorted({r.seed for r in mine})
            f.write(f"# {alg} {h}\n# evaluations mean_solved\n")
            for b in budgets:
                per_seed = [sum(1 for r in mine if r.seed == s and r.solved and r.evaluations <= b) for s in seeds]
                f.write(f"{b} {mean(per_seed):.6g}\n")
            f.write("\n\n")


def fixture_problems(domains: Sequence[str] | None = None) -> list[tuple[str, str]]:
    """(domain, problem) paths of the bundled fixture suite."""
    out = []
    for dom in sorted(BENCHMARK_DIR.glob("*/domain.pddl")):
        if domains is not None and dom.parent.name not in domains:
            continue
        for prob in sorted(dom.parent.glob("p*.pddl")):
            out.append((str(dom), str(prob)))
    return out
