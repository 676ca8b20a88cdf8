"""End-to-end recommendation run for one cutoff date.

Profiles and indicators come from registrations made before the cutoff;
the collaboration network uses the whole registration log. Target workers are
those active in the cutoff's calendar month, and candidate tasks must be open
during ``[cutoff, cutoff + horizon)``.
"""
from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path
from typing import Mapping

from .evaluation import EvaluationReport, summarize, write_errors_csv
from .ingestion import Dataset, active_workers, derive_indicators
from .network import build_index
from .profile import BELTS_BY_NAME, build_profiles, empirical_p_vs
from .recommender import Recommendation, RecommenderConfig, label, recommend
from .success import SuccessBreakdown, score_recommendations, top_k

_log = logging.getLogger(__name__)

PVS_MODES = ("table", "empirical")


@dataclass
class RecommendationRun:
    cutoff: date
    config: RecommenderConfig
    k: int
    pvs_mode: str
    p_vs: dict[str, float]
    workers: list[str]
    excluded_workers: list[str]
    recommendations: list[Recommendation]
    breakdowns: dict[tuple[str, str], SuccessBreakdown]
    top: dict[str, list[Recommendation]]
    actual_counts: dict[str, int]
    degenerate_tasks: list[str]
    evaluation: EvaluationReport
    warnings: list[str] = field(default_factory=list)

    @property
    def by_worker(self) -> dict[str, list[Recommendation]]:
        out: dict[str, list[Recommendation]] = {w: [] for w in self.workers}
        for r in self.recommendations:
            out.setdefault(r.worker_id, []).append(r)
        return out


def window_counts(ds: Dataset, workers, cutoff: date, horizon: int) -> dict[str, int]:
    """Registrations each worker actually made in ``[cutoff, cutoff + horizon)``."""
    end = cutoff + timedelta(days=horizon)
    counts = dict.fromkeys(workers, 0)
    for r in ds.registrations:
        if r.worker_id in counts and cutoff <= r.registration_date < end:
            counts[r.worker_id] += 1
    return counts


def run_recommendation(
    ds: Dataset,
    cutoff: date,
    config: RecommenderConfig | None = None,
    k: int = 3,
    pvs_mode: str = "table",
) -> RecommendationRun:
    cfg = config or RecommenderConfig()
    if pvs_mode not in PVS_MODES:
        raise ValueError(f"pvs_mode must be one of {PVS_MODES}, got {pvs_mode!r}")
    warnings = []
    span = ds.date_range()
    if span is None or not span[0] <= cutoff <= span[1]:
        msg = f"cutoff {cutoff} lies outside the dataset date range {span}"
        _log.warning(msg)
        warnings.append(msg)

    train = ds.history_before(cutoff)
    indicators = derive_indicators(train)
    profiles = build_profiles(train, indicators)
    index = build_index(ds)
    if pvs_mode == "empirical":
        p_vs = empirical_p_vs(train)
    else:
        p_vs = {name: b.p_vs for name, b in BELTS_BY_NAME.items()}

    targets = sorted(active_workers(ds, cutoff))
    workers = [w for w in targets if w in profiles]
    excluded = [w for w in targets if w not in profiles]
    if excluded:
        _log.info("%d active workers have no history before %s", len(excluded), cutoff)

    labeled = []
    for w in workers:
        labeled.extend(label(recommend(w, ds, index, profiles, cfg, cutoff), cfg.label_threshold))
    scored, breakdowns = score_recommendations(labeled, ds.tasks, profiles, indicators, p_vs)

    by_worker: dict[str, list[Recommendation]] = {w: [] for w in workers}
    for r in scored:
        by_worker[r.worker_id].append(r)
    top = {w: top_k(recs, k) for w, recs in by_worker.items()}
    degenerate = sorted({t for (_, t), b in breakdowns.items() if b.degenerate})
    actual = window_counts(ds, workers, cutoff, cfg.horizon_days)
    report = summarize(
        by_worker,
        workers,
        actual=actual,
        degenerate_pool_count=len(degenerate),
        cutoff=cutoff,
        horizon=cfg.horizon_days,
    )
    return RecommendationRun(
        cutoff=cutoff,
        config=cfg,
        k=k,
        pvs_mode=pvs_mode,
        p_vs=p_vs,
        workers=workers,
        excluded_workers=excluded,
        recommendations=scored,
        breakdowns=breakdowns,
        top=top,
        actual_counts=actual,
        degenerate_tasks=degenerate,
        evaluation=report,
        warnings=warnings,
    )


# -- canonical records ------------------------------------------------------


def recommendation_records(recs) -> list[dict]:
    return [r.to_dict() for r in sorted(recs, key=lambda r: (r.worker_id, r.task_id))]


def top_records(top: Mapping[str, list[Recommendation]]) -> list[dict]:
    rows = []
    for w in sorted(top):
        for rank, r in enumerate(top[w], start=1):
            rows.append({
                "worker_id": w,
                "rank": rank,
                "task_id": r.task_id,
                "label": r.label,
                "p_success": r.success_probability,
            })
    return rows


def run_records(run: RecommendationRun) -> dict:
    """Canonical run output, in the same shape :func:`crowdrec.oracle.oracle_recommend` returns."""
    return {
        "workers": list(run.workers),
        "excluded_workers": list(run.excluded_workers),
        "recommendations": recommendation_records(run.recommendations),
        "top": top_records(run.top),
        "degenerate_tasks": list(run.degenerate_tasks),
    }


def dumps_jsonl(records) -> str:
    return "".join(json.dumps(rec, sort_keys=True) + "\n" for rec in records)


# -- artifact writers -------------------------------------------------------


def write_quadrant_csv(recs, path: str | Path) -> Path:
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["worker_id", "task_id", "norm_proficiency", "norm_specialty", "label"])
        for r in sorted(recs, key=lambda r: (r.worker_id, r.task_id)):
            w.writerow([r.worker_id, r.task_id, repr(r.norm_proficiency), repr(r.norm_specialty), r.label])
    return path


def write_top_csv(top: Mapping[str, list[Recommendation]], path: str | Path) -> Path:
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["worker_id", "rank", "task_id", "label", "p_success"])
        for row in top_records(top):
            w.writerow([row["worker_id"], row["rank"], row["task_id"], row["label"], repr(row["p_success"])])
    return path


def write_run(run: RecommendationRun, out_dir: str | Path) -> dict[str, Path]:
    """Write every run artifact; identical runs give byte-identical files."""
    d = Path(out_dir)
    d.mkdir(parents=True, exist_ok=True)
    paths = {
        "recommendations": d / "recommendations.jsonl",
        "quadrant": d / "quadrant.csv",
        "top_k": d / "top_k.csv",
        "evaluation": d / "evaluation.json",
        "errors": d / "per_worker_errors.csv",
    }
    paths["recommendations"].write_text(dumps_jsonl(recommendation_records(run.recommendations)), encoding="utf-8")
    write_quadrant_csv(run.recommendations, paths["quadrant"])
    write_top_csv(run.top, paths["top_k"])
    paths["evaluation"].write_text(run.evaluation.to_json(), encoding="utf-8")
    write_errors_csv(run.evaluation.per_worker_errors, paths["errors"])
    return paths
