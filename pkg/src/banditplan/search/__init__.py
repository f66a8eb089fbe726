from __future__ import annotations

from ..task import GroundTask
from .config import ALGORITHMS, Backup, Outcome, SearchConfig, SearchResult
from .gbfs import gbfs
from .thts import thts
from .tree import (
    SearchNode,
    backup,
    backup_clark,
    backup_full_bellman,
    backup_monte_carlo,
    clark_fold,
    descend,
    node_value,
    remove_dead_end,
    select_child,
)


def search(task: GroundTask, config: SearchConfig, heuristic=None) -> SearchResult:
    if config.algorithm == "gbfs":
        return gbfs(task, config, heuristic)
    return thts(task, config, heuristic)


__all__ = [
    "ALGORITHMS", "Backup", "Outcome", "SearchConfig", "SearchNode", "SearchResult",
    "backup", "backup_clark", "backup_full_bellman", "backup_monte_carlo", "clark_fold",
    "descend", "gbfs", "node_value", "remove_dead_end", "search", "select_child", "thts",
]
