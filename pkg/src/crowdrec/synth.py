"""Seeded synthetic marketplaces for testing and demos.

Belts follow the platform's population shares (about 90% Gray), each
registration turns into a valid submission with the belt's table probability,
and workers favour a few task types and technologies so that specialty and
proficiency vary across the population.
"""
from __future__ import annotations

from datetime import date, timedelta

import numpy as np

from .ingestion import Dataset, RegistrationRecord, TaskRecord, build_dataset
from .profile import BELT_SHARES, BELTS_BY_NAME

TECH_NAMES = (
    "Java", "JavaScript", "HTML", "CSS", "SQL", "Android", "iOS", ".NET", "Node.js",
    "MongoDB", "Apex", "Angular.js", "Python", "PostgreSQL", "React", "Swift",
)
TYPE_NAMES = (
    "First2Finish", "Code", "Assembly Competition", "UI Prototype Competition",
    "Design", "Bug Hunt", "Test Suites", "Architecture",
)
PRIZES = (100, 150, 200, 250, 300, 400, 500, 600, 750, 800, 1000, 1250, 1500, 2000, 2500)
_RATING_BOUNDS = {"Gray": (0, 900), "Green": (900, 1200), "Blue": (1200, 1500), "Yellow": (1500, 2200), "Red": (2200, 3200)}


def _names(pool, n, prefix):
    return [pool[i] if i < len(pool) else f"{prefix}{i}" for i in range(n)]


def synth_generate(
    seed: int,
    n_workers: int,
    n_tasks: int,
    n_techs: int = 8,
    n_types: int = 4,
    months: int = 4,
    start: date = date(2014, 1, 1),
    mean_registrations: float = 8.0,
) -> Dataset:
    """Same seed and parameters always give the same dataset."""
    for name, v in (("n_workers", n_workers), ("n_tasks", n_tasks), ("n_techs", n_techs), ("n_types", n_types), ("months", months)):
        if v < 1:
            raise ValueError(f"{name} must be positive, got {v}")
    rng = np.random.default_rng(seed)
    span = int(round(months * 30.44))
    techs = _names(TECH_NAMES, n_techs, "tech")
    types = _names(TYPE_NAMES, n_types, "type")
    wid = len(str(max(n_workers, n_tasks) - 1))

    # tasks: zipf-like popularity over types and technologies
    type_w = 1.0 / np.arange(1, n_types + 1)
    type_w /= type_w.sum()
    tech_w = 1.0 / np.arange(1, n_techs + 1) ** 0.8
    tech_w /= tech_w.sum()
    tasks = []
    task_type_idx = np.empty(n_tasks, dtype=int)
    task_techs = []
    for i in range(n_tasks):
        ti = int(rng.choice(n_types, p=type_w))
        n_req = min(n_techs, 1 + int(rng.binomial(2, 0.3)))
        req = sorted(int(x) for x in rng.choice(n_techs, size=n_req, replace=False, p=tech_w))
        reg_start = start + timedelta(days=int(rng.integers(0, span)))
        duration = int(rng.integers(3, 22))
        tasks.append(
            TaskRecord(
                task_id=f"T{i:0{wid}d}",
                task_type=types[ti],
                technologies=tuple(techs[j] for j in req),
                monetary_prize=float(PRIZES[int(rng.integers(0, len(PRIZES)))]),
                registration_start=reg_start,
                submission_end=reg_start + timedelta(days=duration),
                status="completed" if rng.random() < 0.7 else "failed",
            )
        )
        task_type_idx[i] = ti
        task_techs.append(req)
    popularity = rng.gamma(2.0, 1.0, size=n_tasks)

    belt_names = list(BELT_SHARES)
    shares = np.array([BELT_SHARES[b] for b in belt_names])
    shares /= shares.sum()

    ratings = {}
    registrations = []
    for w in range(n_workers):
        worker_id = f"W{w:0{wid}d}"
        belt = belt_names[int(rng.choice(len(belt_names), p=shares))]
        lo, hi = _RATING_BOUNDS[belt]
        ratings[worker_id] = int(rng.integers(lo, hi))
        p_valid = BELTS_BY_NAME[belt].p_vs

        type_pref = rng.dirichlet(np.full(n_types, 0.5))
        tech_pref = rng.dirichlet(np.full(n_techs, 0.5))
        affinity = np.array([type_pref[task_type_idx[i]] + tech_pref[task_techs[i]].mean() for i in range(n_tasks)])
        weights = popularity * (affinity + 0.05)
        weights /= weights.sum()
        n_reg = min(n_tasks, 1 + int(rng.poisson(mean_registrations - 1)))
        chosen = sorted(int(x) for x in rng.choice(n_tasks, size=n_reg, replace=False, p=weights))
        for i in chosen:
            task = tasks[i]
            reg_date = task.registration_start + timedelta(days=int(rng.integers(0, task.duration + 1)))
            valid = bool(rng.random() < p_valid)
            submitted = valid or bool(rng.random() < 0.3)
            sub_date = None
            if submitted:
                sub_date = reg_date + timedelta(days=int(rng.integers(0, (task.submission_end - reg_date).days + 1)))
            registrations.append(
                RegistrationRecord(
                    worker_id=worker_id,
                    task_id=task.task_id,
                    registration_date=reg_date,
                    submission_date=sub_date,
                    submitted=submitted,
                    valid_submission=valid,
                )
            )
    return build_dataset(tasks, registrations, ratings)


def default_cutoff(ds: Dataset, fraction: float = 0.75) -> date:
    """A date ``fraction`` of the way through the catalog's date range."""
    lo, hi = ds.date_range()
    return lo + timedelta(days=int((hi - lo).days * fraction))
