"""Collaborative filtering over collaborator tasks, with the four-quadrant labels."""
from __future__ import annotations

from dataclasses import dataclass, replace
from datetime import date
from typing import Mapping, Sequence

from .ingestion import Dataset, TaskRecord
from .network import CollaborationIndex, potential_tasks
from .profile import NoHistoryError, WorkerProfile, avg_proficiency, specialty

VERY_STRONG = "VeryStrong"
STRONG = "Strong"
RECOMMEND = "Recommend"
LOW = "Low"
LABELS = (VERY_STRONG, STRONG, RECOMMEND, LOW)

CONDITION_NAMES = ("prize", "duration", "proficiency", "specialty")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RecommenderConfig:
    alpha: float = 0.30
    beta: float = 0.30
    min_conditions: int = 3
    label_threshold: float = 0.5
    horizon_days: int = 14

    def __post_init__(self):
        for name in ("alpha", "beta", "label_threshold"):
            v = getattr(self, name)
            if not 0 <= v <= 1:
                raise ConfigError(f"{name} must lie in [0, 1], got {v}")
        if not 1 <= self.min_conditions <= 4:
            raise ConfigError(f"min_conditions must lie in 1..4, got {self.min_conditions}")
        if self.horizon_days < 1:
            raise ConfigError(f"horizon_days must be positive, got {self.horizon_days}")


@dataclass(frozen=True)
class Recommendation:
    worker_id: str
    task_id: str
    conditions: tuple[bool, bool, bool, bool]
    apl: float
    sl: float
    norm_proficiency: float | None = None
    norm_specialty: float | None = None
    label: str | None = None
    success_probability: float | None = None
    flags: tuple[str, ...] = ()

    @property
    def conditions_met(self) -> int:
        return sum(self.conditions)

    def to_dict(self) -> dict:
        return {
            "worker_id": self.worker_id,
            "task_id": self.task_id,
            "conditions": dict(zip(CONDITION_NAMES, self.conditions)),
            "apl": self.apl,
            "sl": self.sl,
            "norm_proficiency": self.norm_proficiency,
            "norm_specialty": self.norm_specialty,
            "label": self.label,
            "success_probability": self.success_probability,
            "flags": list(self.flags),
        }


def check_conditions(worker: WorkerProfile, task: TaskRecord, cfg: RecommenderConfig) -> tuple[bool, bool, bool, bool]:
    """Prize, duration, proficiency and specialty conditions, in that order."""
    return (
        worker.base_monetary_prize <= task.monetary_prize,
        worker.base_duration <= task.duration,
        avg_proficiency(worker.wtech, task.technologies) > cfg.alpha,
        specialty(worker.wtype, task.task_type) > cfg.beta,
    )


def recommend(
    worker_id: str,
    ds: Dataset,
    index: CollaborationIndex,
    profiles: Mapping[str, WorkerProfile],
    cfg: RecommenderConfig,
    cutoff: date,
) -> list[Recommendation]:
    """Unlabeled recommendations for one worker, ordered by task_id.

    Candidates come from :func:`potential_tasks`; a candidate is kept when at
    least ``cfg.min_conditions`` of the four conditions hold.
    """
    worker = profiles.get(worker_id)
    if worker is None:
        raise NoHistoryError(f"worker {worker_id!r} has no history before {cutoff}")
    if worker_id not in index:
        return []
    out = []
    for task_id in sorted(potential_tasks(worker_id, index, cutoff, cfg.horizon_days, ds)):
        task = ds.tasks[task_id]
        conds = check_conditions(worker, task, cfg)
        if sum(conds) < cfg.min_conditions:
            continue
        out.append(
            Recommendation(
                worker_id=worker_id,
                task_id=task_id,
                conditions=conds,
                apl=avg_proficiency(worker.wtech, task.technologies),
                sl=specialty(worker.wtype, task.task_type),
                flags=() if task.technologies else ("no_technologies",),
            )
        )
    return out


def quadrant(norm_proficiency: float, norm_specialty: float, threshold: float = 0.5) -> str:
    high_p = norm_proficiency > threshold
    high_s = norm_specialty > threshold
    if high_p and high_s:
        return VERY_STRONG
    if high_p:
        return STRONG
    if high_s:
        return RECOMMEND
    return LOW


def label(recs: Sequence[Recommendation], threshold: float = 0.5) -> list[Recommendation]:
    """Max-normalize APL and SL within one worker's list and assign quadrant labels.

    When every APL (or SL) is zero the normalized value on that axis is 0 and
    the recommendation is flagged ``zero_max_apl`` (``zero_max_sl``).
    """
    if not recs:
        return []
    if len({r.worker_id for r in recs}) != 1:
        raise ValueError("label() expects recommendations for a single worker")
    mx_apl = max(r.apl for r in recs)
    mx_sl = max(r.sl for r in recs)
    extra = ()
    if mx_apl <= 0:
        extra += ("zero_max_apl",)
    if mx_sl <= 0:
        extra += ("zero_max_sl",)
    out = []
    for r in recs:
        p = r.apl / mx_apl if mx_apl > 0 else 0.0
        s = r.sl / mx_sl if mx_sl > 0 else 0.0
        out.append(replace(r, norm_proficiency=p, norm_specialty=s, label=quadrant(p, s, threshold), flags=r.flags + extra))
    return out
