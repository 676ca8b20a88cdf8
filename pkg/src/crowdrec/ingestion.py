"""Loading and validating task catalogs, registration logs and ratings.

Three CSV files make up a dataset::

    tasks.csv          task_id,task_type,technologies,monetary_prize,registration_start,submission_end,status
    registrations.csv  worker_id,task_id,registration_date,submission_date,submitted,valid_submission
    ratings.csv        worker_id,rating

``technologies`` is a semicolon-joined list, dates are ISO ``YYYY-MM-DD`` and
booleans are the literals ``true``/``false``.
"""
from __future__ import annotations

import csv
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field, replace
from datetime import date
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping

_log = logging.getLogger(__name__)

TASK_COLUMNS = (
    "task_id",
    "task_type",
    "technologies",
    "monetary_prize",
    "registration_start",
    "submission_end",
    "status",
)
REGISTRATION_COLUMNS = (
    "worker_id",
    "task_id",
    "registration_date",
    "submission_date",
    "submitted",
    "valid_submission",
)
RATING_COLUMNS = ("worker_id", "rating")
TASK_STATUSES = frozenset({"completed", "failed", "open"})


class DatasetError(ValueError):
    """Raised when input files violate the dataset schema or its invariants.

    ``problems`` holds one human-readable line per offending row or record.
    """

    def __init__(self, message: str, problems: Iterable[str] = ()):
        self.problems = list(problems)
        if self.problems:
            message = message + "\n  " + "\n  ".join(self.problems)
        super().__init__(message)


class MalformedRowError(DatasetError):
    pass


class DanglingReferenceError(DatasetError):
    pass


class DuplicateRegistrationError(DatasetError):
    pass


def normalize_name(name: str) -> str:
    """Matching key for technology and task-type names."""
    return " ".join(name.split()).casefold()


@dataclass(frozen=True)
class TaskRecord:
    task_id: str
    task_type: str
    technologies: tuple[str, ...]
    monetary_prize: float
    registration_start: date
    submission_end: date
    status: str = "completed"

    @property
    def type_key(self) -> str:
        return normalize_name(self.task_type)

    @property
    def tech_keys(self) -> frozenset[str]:
        return frozenset(normalize_name(t) for t in self.technologies)

    @property
    def duration(self) -> int:
        """Whole days from registration start to submission end."""
        return (self.submission_end - self.registration_start).days

    def is_open_during(self, start: date, end: date) -> bool:
        """True if the registration window overlaps ``[start, end)``."""
        return self.registration_start < end and self.submission_end >= start


@dataclass(frozen=True)
class RegistrationRecord:
    worker_id: str
    task_id: str
    registration_date: date
    submission_date: date | None = None
    submitted: bool = False
    valid_submission: bool = False


@dataclass(frozen=True)
class Dataset:
    tasks: Mapping[str, TaskRecord]
    registrations: tuple[RegistrationRecord, ...]
    ratings: Mapping[str, int] = field(default_factory=dict)

    @property
    def workers(self) -> list[str]:
        return sorted(self._by_worker)

    @cached_property
    def _by_worker(self) -> dict[str, list[RegistrationRecord]]:
        out: dict[str, list[RegistrationRecord]] = defaultdict(list)
        for r in self.registrations:
            out[r.worker_id].append(r)
        return dict(out)

    def registrations_of(self, worker_id: str) -> list[RegistrationRecord]:
        return list(self._by_worker.get(worker_id, ()))

    def history_before(self, cutoff: date) -> Dataset:
        """Same catalog and ratings, keeping only registrations made before ``cutoff``."""
        kept = tuple(r for r in self.registrations if r.registration_date < cutoff)
        return replace(self, registrations=kept)

    def date_range(self) -> tuple[date, date] | None:
        if not self.tasks:
            return None
        lo = min(t.registration_start for t in self.tasks.values())
        hi = max(t.submission_end for t in self.tasks.values())
        return lo, hi


def build_dataset(
    tasks: Iterable[TaskRecord],
    registrations: Iterable[RegistrationRecord],
    ratings: Mapping[str, int] | None = None,
) -> Dataset:
    """Assemble and validate a dataset from in-memory records."""
    tasks = list(tasks)
    registrations = tuple(registrations)
    ratings = dict(ratings or {})

    problems = []
    for task_id, n in Counter(t.task_id for t in tasks).items():
        if n > 1:
            problems.append(f"task_id {task_id!r} appears {n} times")
    for t in tasks:
        problems.extend(f"task {t.task_id!r}: {p}" for p in _task_problems(t))
    if problems:
        raise DatasetError("invalid task catalog", problems)

    catalog = {t.task_id: t for t in sorted(tasks, key=lambda t: t.task_id)}

    problems = []
    for r in registrations:
        problems.extend(f"registration ({r.worker_id}, {r.task_id}): {p}" for p in _registration_problems(r))
    if problems:
        raise DatasetError("invalid registration log", problems)

    dangling = sorted({r.task_id for r in registrations if r.task_id not in catalog})
    if dangling:
        raise DanglingReferenceError(
            "registrations reference unknown tasks",
            [f"task_id {t!r}" for t in dangling],
        )

    pairs = Counter((r.worker_id, r.task_id) for r in registrations)
    dupes = sorted(p for p, n in pairs.items() if n > 1)
    if dupes:
        raise DuplicateRegistrationError(
            "duplicate (worker_id, task_id) registrations",
            [f"({w}, {t})" for w, t in dupes],
        )

    for w in {r.worker_id for r in registrations}:
        ratings.setdefault(w, 0)
    return Dataset(tasks=catalog, registrations=registrations, ratings=dict(sorted(ratings.items())))


def _task_problems(t: TaskRecord) -> list[str]:
    out = []
    if t.monetary_prize < 0:
        out.append(f"monetary_prize {t.monetary_prize} is negative")
    if t.submission_end < t.registration_start:
        out.append("submission_end precedes registration_start")
    if t.status not in TASK_STATUSES:
        out.append(f"status {t.status!r} not one of {sorted(TASK_STATUSES)}")
    return out


def _registration_problems(r: RegistrationRecord) -> list[str]:
    out = []
    if r.valid_submission and not r.submitted:
        out.append("valid_submission without submission")
    if r.submitted != (r.submission_date is not None):
        out.append("submission_date must be present exactly when submitted")
    if r.submission_date is not None and r.submission_date < r.registration_date:
        out.append("submission_date precedes registration_date")
    return out


# -- CSV reading ------------------------------------------------------------


def _parse_date(value: str) -> date:
    return date.fromisoformat(value.strip())


def _parse_bool(value: str) -> bool:
    v = value.strip().lower()
    if v == "true":
        return True
    if v == "false":
        return False
    raise ValueError(f"expected true/false, got {value!r}")


def _read_rows(path: Path, columns: tuple[str, ...], parse):
    """Yield parsed rows; collect every malformed cell before raising."""
    out = []
    problems = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = tuple(h.strip() for h in (reader.fieldnames or ()))
        missing = [c for c in columns if c not in header]
        if missing:
            raise MalformedRowError(f"{path}: header missing columns {missing}")
        reader.fieldnames = list(header)
        for row in reader:
            line = reader.line_num
            try:
                out.append((line, parse(row)))
            except _FieldError as e:
                problems.append(f"{path}:{line}: field {e.field!r}: {e.reason}")
    if problems:
        raise MalformedRowError(f"malformed rows in {path}", problems)
    return out


class _FieldError(Exception):
    def __init__(self, field: str, reason: str):
        self.field = field
        self.reason = reason


def _cell(row: dict, name: str, conv):
    raw = row.get(name)
    if raw is None:
        raise _FieldError(name, "missing value")
    try:
        return conv(raw)
    except ValueError as e:
        raise _FieldError(name, str(e)) from None


def _nonempty(value: str) -> str:
    value = value.strip()
    if not value:
        raise ValueError("empty value")
    return value


def _parse_task(row: dict) -> TaskRecord:
    techs = tuple(t.strip() for t in (row.get("technologies") or "").split(";") if t.strip())
    return TaskRecord(
        task_id=_cell(row, "task_id", _nonempty),
        task_type=_cell(row, "task_type", _nonempty),
        technologies=techs,
        monetary_prize=_cell(row, "monetary_prize", float),
        registration_start=_cell(row, "registration_start", _parse_date),
        submission_end=_cell(row, "submission_end", _parse_date),
        status=_cell(row, "status", lambda s: s.strip().lower()),
    )


def _parse_registration(row: dict) -> RegistrationRecord:
    sub = (row.get("submission_date") or "").strip()
    return RegistrationRecord(
        worker_id=_cell(row, "worker_id", _nonempty),
        task_id=_cell(row, "task_id", _nonempty),
        registration_date=_cell(row, "registration_date", _parse_date),
        submission_date=_cell(row, "submission_date", _parse_date) if sub else None,
        submitted=_cell(row, "submitted", _parse_bool),
        valid_submission=_cell(row, "valid_submission", _parse_bool),
    )


def _parse_rating(row: dict) -> tuple[str, int]:
    return _cell(row, "worker_id", _nonempty), _cell(row, "rating", lambda s: int(s.strip()))


def load_dataset(
    tasks_path: str | Path,
    registrations_path: str | Path,
    ratings_path: str | Path | None = None,
) -> Dataset:
    """Read and validate the three CSV files.

    Row-level problems are reported as ``file:line: field 'name': reason``.
    Registration invariants (validity implies submission, submission date
    present exactly when submitted, ...) are reported with the offending line.
    """
    tasks_path, registrations_path = Path(tasks_path), Path(registrations_path)
    task_rows = _read_rows(tasks_path, TASK_COLUMNS, _parse_task)
    reg_rows = _read_rows(registrations_path, REGISTRATION_COLUMNS, _parse_registration)
    ratings: dict[str, int] = {}
    if ratings_path is not None:
        for _, (w, rating) in _read_rows(Path(ratings_path), RATING_COLUMNS, _parse_rating):
            ratings[w] = rating

    problems = [f"{tasks_path}:{line}: {p}" for line, t in task_rows for p in _task_problems(t)]
    problems += [f"{registrations_path}:{line}: {p}" for line, r in reg_rows for p in _registration_problems(r)]
    if problems:
        raise DatasetError("invariant violations", problems)

    known = {t.task_id for _, t in task_rows}
    dangling = [
        f"{registrations_path}:{line}: task_id {r.task_id!r}" for line, r in reg_rows if r.task_id not in known
    ]
    if dangling:
        raise DanglingReferenceError("registrations reference unknown tasks", dangling)

    seen: dict[tuple[str, str], int] = {}
    dupes = []
    for line, r in reg_rows:
        key = (r.worker_id, r.task_id)
        if key in seen:
            dupes.append(f"{registrations_path}:{line}: ({r.worker_id}, {r.task_id}) first seen on line {seen[key]}")
        seen.setdefault(key, line)
    if dupes:
        raise DuplicateRegistrationError("duplicate (worker_id, task_id) registrations", dupes)

    ds = build_dataset((t for _, t in task_rows), (r for _, r in reg_rows), ratings)
    _log.info("loaded %d tasks, %d registrations, %d rated workers", len(ds.tasks), len(ds.registrations), len(ds.ratings))
    return ds


def load_dataset_dir(directory: str | Path) -> Dataset:
    """Load ``tasks.csv``, ``registrations.csv`` and (if present) ``ratings.csv``."""
    d = Path(directory)
    ratings = d / "ratings.csv"
    return load_dataset(d / "tasks.csv", d / "registrations.csv", ratings if ratings.exists() else None)


# -- CSV writing ------------------------------------------------------------


def _fmt_prize(p: float) -> str:
    return str(int(p)) if float(p).is_integer() else repr(float(p))


def write_dataset(ds: Dataset, directory: str | Path) -> dict[str, Path]:
    """Serialize ``ds`` into the three CSV files under ``directory``."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    paths = {name: d / f"{name}.csv" for name in ("tasks", "registrations", "ratings")}

    with open(paths["tasks"], "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TASK_COLUMNS)
        for t in ds.tasks.values():
            w.writerow([
                t.task_id,
                t.task_type,
                ";".join(t.technologies),
                _fmt_prize(t.monetary_prize),
                t.registration_start.isoformat(),
                t.submission_end.isoformat(),
                t.status,
            ])
    with open(paths["registrations"], "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(REGISTRATION_COLUMNS)
        for r in ds.registrations:
            w.writerow([
                r.worker_id,
                r.task_id,
                r.registration_date.isoformat(),
                r.submission_date.isoformat() if r.submission_date else "",
                "true" if r.submitted else "false",
                "true" if r.valid_submission else "false",
            ])
    with open(paths["ratings"], "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RATING_COLUMNS)
        for worker, rating in ds.ratings.items():
            w.writerow([worker, rating])
    return paths


# -- derived indicators -----------------------------------------------------


@dataclass(frozen=True)
class IndicatorTable:
    """Per-worker frequency counts over technologies (WTech) and task types (WType).

    Keys are normalized names; ``display`` maps each key back to the first raw
    spelling seen in the catalog.
    """

    wtech: Mapping[str, Mapping[str, int]]
    wtype: Mapping[str, Mapping[str, int]]
    display: Mapping[str, str] = field(default_factory=dict)

    def tech_counts(self, worker_id: str) -> Mapping[str, int]:
        return self.wtech.get(worker_id, {})

    def type_counts(self, worker_id: str) -> Mapping[str, int]:
        return self.wtype.get(worker_id, {})

    def is_expert(self, worker_id: str, tech: str) -> bool:
        """Binary WTech: the worker has registered on at least one task using ``tech``."""
        return self.tech_counts(worker_id).get(normalize_name(tech), 0) > 0

    def is_specialist(self, worker_id: str, task_type: str) -> bool:
        return self.type_counts(worker_id).get(normalize_name(task_type), 0) > 0


def derive_indicators(ds: Dataset) -> IndicatorTable:
    """Count each worker's registrations per technology and per task type.

    A task requiring several technologies increments every one of them.
    """
    wtech: dict[str, dict[str, int]] = defaultdict(dict)
    wtype: dict[str, dict[str, int]] = defaultdict(dict)
    display: dict[str, str] = {}
    for t in ds.tasks.values():
        display.setdefault(t.type_key, t.task_type)
        for raw in t.technologies:
            display.setdefault(normalize_name(raw), raw)

    for r in ds.registrations:
        task = ds.tasks[r.task_id]
        techs = wtech[r.worker_id]
        for key in task.tech_keys:
            techs[key] = techs.get(key, 0) + 1
        types = wtype[r.worker_id]
        types[task.type_key] = types.get(task.type_key, 0) + 1

    def _sorted(d):
        return {w: dict(sorted(c.items())) for w, c in sorted(d.items())}

    return IndicatorTable(wtech=_sorted(wtech), wtype=_sorted(wtype), display=display)


def _month_of(month: date | str | tuple[int, int]) -> tuple[int, int]:
    if isinstance(month, date):
        return month.year, month.month
    if isinstance(month, tuple):
        return month
    y, m = month.strip().split("-")[:2]
    return int(y), int(m)


def active_workers(ds: Dataset, month: date | str | tuple[int, int]) -> set[str]:
    """Workers with at least one registration dated in the given calendar month.

    ``month`` may be any date inside the month, a ``"YYYY-MM"`` string or a
    ``(year, month)`` pair.
    """
    ym = _month_of(month)
    return {r.worker_id for r in ds.registrations if (r.registration_date.year, r.registration_date.month) == ym}
