"""Bipartite worker-task registration network and collaborator sets."""
from __future__ import annotations

import csv
from collections import defaultdict
from dataclasses import dataclass
from datetime import date, timedelta
from pathlib import Path
from typing import Mapping

from .ingestion import Dataset


@dataclass(frozen=True)
class CollaborationIndex:
    worker_tasks: Mapping[str, frozenset[str]]
    task_workers: Mapping[str, frozenset[str]]
    collaborators: Mapping[str, frozenset[str]]

    def __contains__(self, worker_id: str) -> bool:
        return worker_id in self.worker_tasks


def build_index(ds: Dataset) -> CollaborationIndex:
    """Two workers collaborate when they registered for at least one common task."""
    worker_tasks: dict[str, set[str]] = defaultdict(set)
    task_workers: dict[str, set[str]] = defaultdict(set)
    for r in ds.registrations:
        worker_tasks[r.worker_id].add(r.task_id)
        task_workers[r.task_id].add(r.worker_id)

    collaborators: dict[str, set[str]] = {w: set() for w in worker_tasks}
    for members in task_workers.values():
        for w in members:
            collaborators[w] |= members
    for w, peers in collaborators.items():
        peers.discard(w)

    def _freeze(d):
        return {k: frozenset(v) for k, v in sorted(d.items())}

    return CollaborationIndex(_freeze(worker_tasks), _freeze(task_workers), _freeze(collaborators))


class UnknownWorkerError(KeyError):
    pass


def potential_tasks(
    worker_id: str,
    index: CollaborationIndex,
    cutoff: date,
    horizon: int,
    ds: Dataset,
) -> set[str]:
    """Tasks collaborators registered for, that ``worker_id`` did not, and that are
    open at some point in ``[cutoff, cutoff + horizon)``."""
    if worker_id not in index:
        raise UnknownWorkerError(worker_id)
    own = index.worker_tasks[worker_id]
    end = cutoff + timedelta(days=horizon)
    pool: set[str] = set()
    for k in index.collaborators[worker_id]:
        pool |= index.worker_tasks[k] - own
    return {t for t in pool if ds.tasks[t].is_open_during(cutoff, end)}


def write_edge_list(index: CollaborationIndex, path: str | Path) -> Path:
    """worker_id,task_id CSV, one row per registration edge."""
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["worker_id", "task_id"])
        for worker, tasks in index.worker_tasks.items():
            for t in sorted(tasks):
                w.writerow([worker, t])
    return path
