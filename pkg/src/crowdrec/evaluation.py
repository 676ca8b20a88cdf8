"""Offline validation of a recommendation run against held-out registrations."""
from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, field
from datetime import date
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .recommender import Recommendation


class EmptyReportError(ValueError):
    pass


@dataclass(frozen=True)
class MREResult:
    per_worker_errors: dict[str, float]
    mre: float | None
    aggregate_mre: float | None
    excluded: list[str]


def mre(actual: Mapping[str, int], recommended: Mapping[str, int]) -> MREResult:
    """Relative error between actual and recommended task counts.

    Per worker the error is ``(n_actual - n_recommended) / n_actual``, so
    over-recommendation is negative. ``mre`` averages the per-worker errors;
    ``aggregate_mre`` is the same ratio over summed counts. Workers with no
    actual registrations cannot be scored and are listed in ``excluded``.
    """
    workers = sorted(set(actual) | set(recommended))
    if not workers:
        raise EmptyReportError("no workers to evaluate")
    errors = {}
    excluded = []
    for w in workers:
        n_act = actual.get(w, 0)
        if n_act <= 0:
            excluded.append(w)
            continue
        errors[w] = (n_act - recommended.get(w, 0)) / n_act
    mean = sum(errors.values()) / len(errors) if errors else None
    scored = list(errors)
    tot_act = sum(actual.get(w, 0) for w in scored)
    tot_rec = sum(recommended.get(w, 0) for w in scored)
    aggregate = (tot_act - tot_rec) / tot_act if tot_act else None
    return MREResult(errors, mean, aggregate, excluded)


@dataclass(frozen=True)
class SuccessStats:
    mean: float
    min: float
    max: float


@dataclass(frozen=True)
class EvaluationReport:
    cutoff: date | None
    horizon: int | None
    workers_total: int
    workers_with_recommendations: int
    mre: float | None
    aggregate_mre: float | None
    per_worker_errors: dict[str, float]
    excluded_from_mre: list[str]
    success_stats: SuccessStats | None
    below_average_count: int
    below_average_fraction: float | None
    degenerate_pool_count: int
    flags: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["cutoff"] = self.cutoff.isoformat() if self.cutoff else None
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def summarize(
    recs_by_worker: Mapping[str, Sequence[Recommendation]],
    workers: Iterable[str] | None = None,
    actual: Mapping[str, int] | None = None,
    degenerate_pool_count: int = 0,
    cutoff: date | None = None,
    horizon: int | None = None,
) -> EvaluationReport:
    """Run-level report: coverage, distribution of each worker's best success
    probability, and the relative error against ``actual`` counts if given."""
    workers = sorted(set(workers) if workers is not None else set(recs_by_worker))
    with_recs = [w for w in workers if recs_by_worker.get(w)]
    top1 = [max((r.success_probability or 0.0) for r in recs_by_worker[w]) for w in with_recs]

    flags = []
    stats = None
    below = 0
    below_frac = None
    if top1:
        mean = sum(top1) / len(top1)
        stats = SuccessStats(mean=mean, min=min(top1), max=max(top1))
        below = sum(p < mean for p in top1)
        below_frac = below / len(top1)
    else:
        flags.append("success_stats_undefined")

    err = None
    if actual is not None and workers:
        recommended = {w: len(recs_by_worker.get(w, ())) for w in workers}
        err = mre({w: actual.get(w, 0) for w in workers}, recommended)
        if err.mre is None:
            flags.append("mre_undefined")

    return EvaluationReport(
        cutoff=cutoff,
        horizon=horizon,
        workers_total=len(workers),
        workers_with_recommendations=len(with_recs),
        mre=err.mre if err else None,
        aggregate_mre=err.aggregate_mre if err else None,
        per_worker_errors=err.per_worker_errors if err else {},
        excluded_from_mre=err.excluded if err else [],
        success_stats=stats,
        below_average_count=below,
        below_average_fraction=below_frac,
        degenerate_pool_count=degenerate_pool_count,
        flags=flags,
    )


def write_errors_csv(errors: Mapping[str, float], path: str | Path) -> Path:
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["worker_id", "relative_error"])
        for worker, e in sorted(errors.items()):
            w.writerow([worker, repr(e)])
    return path
