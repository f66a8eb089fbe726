"""Command-line entry point: ``banditplan plan | bench | bandit-sim``."""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys

from .bandit import Direction, PolicyConfig, PolicyKind, UniformExploration
from .heuristics import HEURISTICS
from .pddl import PDDLError, load_task
from .search import ALGORITHMS, SearchConfig, search
from .task import validate_plan


def _plan(args) -> int:
    try:
        task = load_task(args.domain, args.problem)
    except (OSError, PDDLError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    cfg = SearchConfig(algorithm=args.search, heuristic=args.heuristic, max_evaluations=args.evals,
                       seed=args.seed, c=args.c, uniform_exploration=args.uniform_exploration,
                       preferred="boost" if args.po else "off", trace=args.verbose > 1)
    res = search(task, cfg)
    print(f"; {res.outcome.value}: evaluations={res.evaluations} expansions={res.expansions}", file=sys.stderr)
    if not res.solved:
        return 1
    assert validate_plan(task, res.plan)
    text = res.plan.to_text()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _bench(args) -> int:
    from .bench import SuiteConfig, format_csv, run_suite

    cfg = SuiteConfig.from_file(args.config)
    overrides = {}
    if args.output:
        overrides["output"] = args.output
    if args.no_timing:
        overrides["timing"] = False
    if args.workers:
        overrides["workers"] = args.workers
    cfg = dataclasses.replace(cfg, **overrides)
    records, summary = run_suite(cfg)
    if not cfg.output:
        sys.stdout.write(format_csv(records, summary))
    return 1 if any(r.error for r in records) else 0


def _bandit_sim(args) -> int:
    from .sim import CHECKPOINTS, parse_arms, simulate_batch, write_csv

    arms = parse_arms(args.arms)
    direction = Direction.MINIMIZE if args.minimize else Direction.MAXIMIZE
    policy = PolicyConfig(PolicyKind(args.policy), direction, args.c, UniformExploration(args.uniform_exploration))
    checkpoints = sorted({T for T in CHECKPOINTS if T <= args.horizon} | {args.horizon})
    seeds = range(args.seed_offset, args.seed_offset + args.seeds)
    out = simulate_batch(arms, policy, args.horizon, seeds, checkpoints)
    arm_text = ",".join(str(a) for a in arms)
    rows = [(args.policy, arm_text, s, T, float(out[T][j])) for T in checkpoints for j, s in enumerate(seeds)]
    if args.csv:
        write_csv(args.csv, rows)
    if args.dat:
        with open(args.dat, "w", encoding="utf-8") as f:
            f.write("# T mean_regret\n")
            for T in checkpoints:
                f.write(f"{T} {out[T].mean():.6g}\n")
    for T in checkpoints:
        print(f"T={T} mean_regret={out[T].mean():.6g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="banditplan", description=__doc__)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="solve one PDDL problem")
    p.add_argument("domain")
    p.add_argument("problem")
    p.add_argument("--search", choices=sorted(ALGORITHMS), default="guct-uniform")
    p.add_argument("--heuristic", choices=sorted(HEURISTICS), default="ff")
    p.add_argument("--evals", type=int, default=10_000, help="evaluation budget")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--po", action="store_true", help="prefer children reached by preferred operators")
    p.add_argument("--c", type=float, default=1.0, help="exploration constant")
    p.add_argument("--uniform-exploration", choices=[e.value for e in UniformExploration], default="growing")
    p.add_argument("-o", "--output", help="write the plan here instead of stdout")
    p.set_defaults(func=_plan)

    b = sub.add_parser("bench", help="run a benchmark suite")
    b.add_argument("--config", required=True, help="YAML suite file")
    b.add_argument("-o", "--output", help="CSV path (overrides the suite file)")
    b.add_argument("--no-timing", action="store_true", help="write wall_time_s as 0 for reproducible output")
    b.add_argument("--workers", type=int)
    b.set_defaults(func=_bench)

    s = sub.add_parser("bandit-sim", help="cumulative regret on synthetic arms")
    s.add_argument("--policy", choices=[k.value for k in PolicyKind], default="ucb1")
    s.add_argument("--arms", required=True, help="e.g. bernoulli:0.9,bernoulli:0.1")
    s.add_argument("--horizon", type=int, default=10_000)
    s.add_argument("--seeds", type=int, default=10, help="number of seeds")
    s.add_argument("--seed-offset", type=int, default=0)
    s.add_argument("--minimize", action="store_true")
    s.add_argument("--c", type=float, default=1.0)
    s.add_argument("--uniform-exploration", choices=[e.value for e in UniformExploration], default="growing")
    s.add_argument("--csv")
    s.add_argument("--dat", help="gnuplot-style mean regret per checkpoint")
    s.set_defaults(func=_bandit_sim)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
