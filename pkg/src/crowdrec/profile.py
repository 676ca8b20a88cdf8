"""Per-worker metrics: prize and duration preferences, proficiency, specialty,
rating belt, trustworthiness and belt-level valid-submission probability."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .ingestion import Dataset, IndicatorTable, RegistrationRecord, TaskRecord, derive_indicators, normalize_name

TRUST_WINDOW = 15


class NoHistoryError(ValueError):
    """The worker has no registrations to derive a preference from."""


@dataclass(frozen=True, order=True)
class Belt:
    rank: int
    name: str
    lower: float  # inclusive
    upper: float  # exclusive
    p_vs: float

    def contains(self, rating: int) -> bool:
        return self.lower <= rating < self.upper


INF = float("inf")
GRAY = Belt(0, "Gray", -INF, 900, 0.25)
GREEN = Belt(1, "Green", 900, 1200, 0.45)
BLUE = Belt(2, "Blue", 1200, 1500, 0.39)
YELLOW = Belt(3, "Yellow", 1500, 2200, 0.6)
RED = Belt(4, "Red", 2200, INF, 0.6)
BELTS = (GRAY, GREEN, BLUE, YELLOW, RED)
BELTS_BY_NAME = {b.name: b for b in BELTS}

# share of the worker population per belt, in percent
BELT_SHARES = {"Gray": 90.02, "Green": 2.88, "Blue": 5.39, "Yellow": 1.54, "Red": 0.16}


def belt_of(rating: int) -> Belt:
    """Belt whose half-open rating interval ``[lower, upper)`` holds ``rating``."""
    for b in BELTS:
        if b.contains(rating):
            return b
    raise AssertionError(f"rating {rating!r} fell outside every belt")  # pragma: no cover


def base_monetary_prize(history: Iterable[TaskRecord]) -> float:
    prizes = [t.monetary_prize for t in history]
    if not prizes:
        raise NoHistoryError("no registered tasks")
    return min(prizes)


def base_duration(history: Iterable[RegistrationRecord], catalog: Mapping[str, TaskRecord] | None = None) -> int:
    """Shortest registration-to-submission span, in whole days.

    Workers who never submitted fall back to the shortest duration among the
    tasks they registered for (needs ``catalog``).
    """
    history = list(history)
    spans = [(r.submission_date - r.registration_date).days for r in history if r.submission_date is not None]
    if spans:
        return min(spans)
    if catalog is not None and history:
        return min(catalog[r.task_id].duration for r in history)
    raise NoHistoryError("no submitted registrations")


def proficiency(tech_counts: Mapping[str, int], tech: str) -> float:
    """Share of the worker's technology usage that went to ``tech``."""
    total = sum(tech_counts.values())
    if total == 0:
        return 0.0
    return tech_counts.get(normalize_name(tech), 0) / total


def avg_proficiency(tech_counts: Mapping[str, int], technologies: Iterable[str]) -> float:
    """Mean proficiency over a task's required technologies; 0 for a task with none."""
    keys = sorted({normalize_name(t) for t in technologies})
    if not keys:
        return 0.0
    return sum(proficiency(tech_counts, k) for k in keys) / len(keys)


def specialty(type_counts: Mapping[str, int], task_type: str) -> float:
    total = sum(type_counts.values())
    if total == 0:
        return 0.0
    return type_counts.get(normalize_name(task_type), 0) / total


def trustworthiness(history: Iterable[RegistrationRecord], window: int = TRUST_WINDOW) -> float:
    """Valid-submission ratio over the latest ``window`` registrations.

    Registrations are ordered by ``(registration_date, task_id)``; workers with
    fewer registrations use all of them.
    """
    recent = sorted(history, key=lambda r: (r.registration_date, r.task_id))[-window:]
    if not recent:
        raise NoHistoryError("no registrations")
    return sum(r.valid_submission for r in recent) / len(recent)


def empirical_p_vs(ds: Dataset) -> dict[str, float]:
    """Per-belt valid submissions over registrations, Table-2 constant where a belt is empty."""
    vs = dict.fromkeys(BELTS_BY_NAME, 0)
    regs = dict.fromkeys(BELTS_BY_NAME, 0)
    for r in ds.registrations:
        b = belt_of(ds.ratings.get(r.worker_id, 0)).name
        regs[b] += 1
        vs[b] += r.valid_submission
    return {name: (vs[name] / regs[name] if regs[name] else BELTS_BY_NAME[name].p_vs) for name in BELTS_BY_NAME}


def prob_valid_submission(belt: Belt | str, ds: Dataset | None = None) -> float:
    if isinstance(belt, str):
        belt = BELTS_BY_NAME[belt]
    if ds is None:
        return belt.p_vs
    return empirical_p_vs(ds)[belt.name]


@dataclass(frozen=True)
class WorkerProfile:
    worker_id: str
    rating: int
    belt: Belt
    base_monetary_prize: float
    base_duration: int
    duration_fallback: bool
    wtech: Mapping[str, int]
    wtype: Mapping[str, int]
    trustworthiness: float
    registration_count: int
    submission_count: int
    valid_submission_count: int

    def to_dict(self) -> dict:
        return {
            "worker_id": self.worker_id,
            "rating": self.rating,
            "belt": self.belt.name,
            "p_vs_table": self.belt.p_vs,
            "base_monetary_prize": self.base_monetary_prize,
            "base_duration": self.base_duration,
            "duration_fallback": self.duration_fallback,
            "wtech": dict(self.wtech),
            "wtype": dict(self.wtype),
            "trustworthiness": self.trustworthiness,
            "registration_count": self.registration_count,
            "submission_count": self.submission_count,
            "valid_submission_count": self.valid_submission_count,
        }


def build_profile(worker_id: str, ds: Dataset, indicators: IndicatorTable) -> WorkerProfile:
    history = ds.registrations_of(worker_id)
    if not history:
        raise NoHistoryError(f"worker {worker_id!r} has no registrations")
    rating = ds.ratings.get(worker_id, 0)
    return WorkerProfile(
        worker_id=worker_id,
        rating=rating,
        belt=belt_of(rating),
        base_monetary_prize=base_monetary_prize(ds.tasks[r.task_id] for r in history),
        base_duration=base_duration(history, ds.tasks),
        duration_fallback=not any(r.submitted for r in history),
        wtech=indicators.tech_counts(worker_id),
        wtype=indicators.type_counts(worker_id),
        trustworthiness=trustworthiness(history),
        registration_count=len(history),
        submission_count=sum(r.submitted for r in history),
        valid_submission_count=sum(r.valid_submission for r in history),
    )


def build_profiles(ds: Dataset, indicators: IndicatorTable | None = None) -> dict[str, WorkerProfile]:
    """Profile every worker with at least one registration in ``ds``."""
    if indicators is None:
        indicators = derive_indicators(ds)
    return {w: build_profile(w, ds, indicators) for w in ds.workers}
