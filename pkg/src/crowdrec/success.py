"""Competitor-relative probability of success for recommended tasks.

The competitor pool of a task is every worker the task was recommended to in
the same run. Each member gets the product

    specialty participation ratio * average proficiency experience ratio
        * trustworthiness * belt valid-submission probability

and the products are normalized over the pool.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Sequence

from .ingestion import IndicatorTable, TaskRecord
from .profile import WorkerProfile
from .recommender import Recommendation


@dataclass(frozen=True)
class CompetitorPool:
    task_id: str
    members: frozenset[str]


@dataclass(frozen=True)
class SuccessBreakdown:
    worker_id: str
    task_id: str
    spr: float
    aper: float
    tl: float
    p_vs: float
    p_success: float
    degenerate: bool = False
    flags: tuple[str, ...] = ()

    @property
    def numerator(self) -> float:
        return self.spr * self.aper * self.tl * self.p_vs


def competitor_pools(recs: Iterable[Recommendation]) -> dict[str, CompetitorPool]:
    members: dict[str, set[str]] = defaultdict(set)
    for r in recs:
        members[r.task_id].add(r.worker_id)
    return {t: CompetitorPool(t, frozenset(m)) for t, m in sorted(members.items())}


def _ratio(num: float, den: float) -> float:
    return num / den if den > 0 else 0.0


def specialty_participation_ratio(
    worker_id: str, task: TaskRecord, pool: Iterable[str], indicators: IndicatorTable
) -> float:
    """The worker's registrations on the task's type over the pool's total on that type."""
    key = task.type_key
    total = sum(indicators.type_counts(j).get(key, 0) for j in sorted(pool))
    return _ratio(indicators.type_counts(worker_id).get(key, 0), total)


def proficiency_experience_ratios(
    worker_id: str, task: TaskRecord, pool: Iterable[str], indicators: IndicatorTable
) -> dict[str, float]:
    """Per required technology, the worker's usage count over the pool's total."""
    members = sorted(pool)
    out = {}
    for k in sorted(task.tech_keys):
        total = sum(indicators.tech_counts(j).get(k, 0) for j in members)
        out[k] = _ratio(indicators.tech_counts(worker_id).get(k, 0), total)
    return out


def avg_proficiency_experience_ratio(
    worker_id: str, task: TaskRecord, pool: Iterable[str], indicators: IndicatorTable
) -> float:
    per = proficiency_experience_ratios(worker_id, task, pool, indicators)
    if not per:
        return 0.0
    return sum(per.values()) / len(per)


def score_pool(
    task: TaskRecord,
    pool: Iterable[str],
    profiles: Mapping[str, WorkerProfile],
    indicators: IndicatorTable,
    p_vs: Mapping[str, float] | None = None,
) -> dict[str, SuccessBreakdown]:
    """Success breakdown for every member of one task's pool.

    ``p_vs`` maps belt name to valid-submission probability; the belt's table
    value is used when omitted. A pool in which every product is zero is
    degenerate: all members get 0.
    """
    members = sorted(pool)
    parts = {}
    for w in members:
        prof = profiles[w]
        parts[w] = (
            specialty_participation_ratio(w, task, members, indicators),
            avg_proficiency_experience_ratio(w, task, members, indicators),
            prof.trustworthiness,
            prof.belt.p_vs if p_vs is None else p_vs[prof.belt.name],
        )
    nums = {w: spr * aper * tl * pvs for w, (spr, aper, tl, pvs) in parts.items()}
    total = sum(nums[w] for w in members)
    degenerate = total <= 0
    flags = []
    if degenerate:
        flags.append("degenerate_pool")
    if not task.technologies:
        flags.append("no_technologies")
    return {
        w: SuccessBreakdown(
            worker_id=w,
            task_id=task.task_id,
            spr=parts[w][0],
            aper=parts[w][1],
            tl=parts[w][2],
            p_vs=parts[w][3],
            p_success=0.0 if degenerate else nums[w] / total,
            degenerate=degenerate,
            flags=tuple(flags),
        )
        for w in members
    }


def success_probability(
    worker_id: str,
    task: TaskRecord,
    pool: Iterable[str],
    profiles: Mapping[str, WorkerProfile],
    indicators: IndicatorTable,
    p_vs: Mapping[str, float] | None = None,
) -> SuccessBreakdown:
    pool = set(pool)
    if worker_id not in pool:
        raise ValueError(f"worker {worker_id!r} is not in the competitor pool of {task.task_id!r}")
    return score_pool(task, pool, profiles, indicators, p_vs)[worker_id]


def score_recommendations(
    recs: Iterable[Recommendation],
    tasks: Mapping[str, TaskRecord],
    profiles: Mapping[str, WorkerProfile],
    indicators: IndicatorTable,
    p_vs: Mapping[str, float] | None = None,
) -> tuple[list[Recommendation], dict[tuple[str, str], SuccessBreakdown]]:
    """Fill ``success_probability`` on every recommendation of a run.

    Returns the scored recommendations in (worker_id, task_id) order and the
    breakdowns keyed by (worker_id, task_id).
    """
    recs = list(recs)
    breakdowns: dict[tuple[str, str], SuccessBreakdown] = {}
    for task_id, pool in competitor_pools(recs).items():
        for w, b in score_pool(tasks[task_id], pool.members, profiles, indicators, p_vs).items():
            breakdowns[(w, task_id)] = b
    scored = []
    for r in sorted(recs, key=lambda r: (r.worker_id, r.task_id)):
        b = breakdowns[(r.worker_id, r.task_id)]
        extra = tuple(f for f in b.flags if f not in r.flags)
        scored.append(replace(r, success_probability=b.p_success, flags=r.flags + extra))
    return scored, breakdowns


def top_k(recs: Sequence[Recommendation], k: int = 3) -> list[Recommendation]:
    """Highest success probability first; ties broken by task_id."""
    ranked = sorted(recs, key=lambda r: (-(r.success_probability or 0.0), r.task_id))
    return ranked[: max(k, 0)]
