"""Brute-force reference implementation of a full recommendation run.

Everything is recomputed with straight-line loops over the raw registration
log: collaborators by enumerating worker pairs, conditions, labels, competitor
pools and success probabilities. Nothing here calls the engine modules; only
the dataset containers are shared. Intended for desk-scale datasets only.
"""
from __future__ import annotations

from datetime import date, timedelta

from .ingestion import Dataset
from .recommender import RecommenderConfig

MAX_WORKERS = 50
MAX_TASKS = 200

_TABLE_P_VS = {"Gray": 0.25, "Green": 0.45, "Blue": 0.39, "Yellow": 0.6, "Red": 0.6}


class OracleScaleError(ValueError):
    pass


def _key(name):
    return " ".join(name.split()).casefold()


def _belt(rating):
    if rating < 900:
        return "Gray"
    if rating < 1200:
        return "Green"
    if rating < 1500:
        return "Blue"
    if rating < 2200:
        return "Yellow"
    return "Red"


def oracle_recommend(ds: Dataset, cfg: RecommenderConfig | None = None, cutoff: date = None, k: int = 3, pvs_mode: str = "table") -> dict:
    """Canonical run output: ``workers``, ``excluded_workers``, ``recommendations``,
    ``top`` and ``degenerate_tasks``, all sorted."""
    cfg = cfg or RecommenderConfig()
    n_workers = len({r.worker_id for r in ds.registrations})
    if n_workers > MAX_WORKERS or len(ds.tasks) > MAX_TASKS:
        raise OracleScaleError(
            f"oracle limited to {MAX_WORKERS} workers and {MAX_TASKS} tasks, got {n_workers} and {len(ds.tasks)}"
        )
    end = cutoff + timedelta(days=cfg.horizon_days)

    # full-history task sets, for the collaboration network
    registered = {}
    for r in ds.registrations:
        registered.setdefault(r.worker_id, set()).add(r.task_id)

    # training history
    train = [r for r in ds.registrations if r.registration_date < cutoff]

    active = set()
    for r in ds.registrations:
        if r.registration_date.year == cutoff.year and r.registration_date.month == cutoff.month:
            active.add(r.worker_id)
    has_history = {r.worker_id for r in train}
    workers = sorted(w for w in active if w in has_history)
    excluded = sorted(w for w in active if w not in has_history)

    # p(VS) per belt
    if pvs_mode == "empirical":
        p_vs = {}
        for belt in _TABLE_P_VS:
            n_reg = 0
            n_valid = 0
            for r in train:
                if _belt(ds.ratings.get(r.worker_id, 0)) == belt:
                    n_reg += 1
                    if r.valid_submission:
                        n_valid += 1
            p_vs[belt] = n_valid / n_reg if n_reg else _TABLE_P_VS[belt]
    else:
        p_vs = dict(_TABLE_P_VS)

    # per-worker profile values, recomputed for every worker with history
    tech_count = {}
    type_count = {}
    min_prize = {}
    min_span = {}
    trust = {}
    for w in sorted(has_history):
        mine = [r for r in train if r.worker_id == w]
        tc = {}
        yc = {}
        for r in mine:
            task = ds.tasks[r.task_id]
            for t in {_key(x) for x in task.technologies}:
                tc[t] = tc.get(t, 0) + 1
            y = _key(task.task_type)
            yc[y] = yc.get(y, 0) + 1
        tech_count[w] = tc
        type_count[w] = yc
        min_prize[w] = min(ds.tasks[r.task_id].monetary_prize for r in mine)
        spans = [(r.submission_date - r.registration_date).days for r in mine if r.submission_date is not None]
        if not spans:
            spans = [(ds.tasks[r.task_id].submission_end - ds.tasks[r.task_id].registration_start).days for r in mine]
        min_span[w] = min(spans)
        mine.sort(key=lambda r: (r.registration_date, r.task_id))
        last = mine[-15:]
        trust[w] = len([r for r in last if r.valid_submission]) / len(last)

    # enumerate every (worker, task) pair
    rows = []
    for w in workers:
        cands = []
        for task_id in sorted(ds.tasks):
            task = ds.tasks[task_id]
            if task_id in registered[w]:
                continue
            if not (task.registration_start < end and task.submission_end >= cutoff):
                continue
            via_collaborator = False
            for other, theirs in registered.items():
                if other != w and task_id in theirs and theirs & registered[w]:
                    via_collaborator = True
                    break
            if not via_collaborator:
                continue

            techs = sorted({_key(x) for x in task.technologies})
            tc = tech_count[w]
            total_t = sum(tc.values())
            if techs:
                apl = sum((tc.get(t, 0) / total_t if total_t else 0.0) for t in techs) / len(techs)
            else:
                apl = 0.0
            yc = type_count[w]
            total_y = sum(yc.values())
            sl = yc.get(_key(task.task_type), 0) / total_y if total_y else 0.0
            duration = (task.submission_end - task.registration_start).days
            conds = [
                min_prize[w] <= task.monetary_prize,
                min_span[w] <= duration,
                apl > cfg.alpha,
                sl > cfg.beta,
            ]
            met = 0
            for c in conds:
                if c:
                    met += 1
            if met >= cfg.min_conditions:
                cands.append([task_id, conds, apl, sl, [] if techs else ["no_technologies"]])

        if not cands:
            continue
        mx_apl = max(c[2] for c in cands)
        mx_sl = max(c[3] for c in cands)
        for task_id, conds, apl, sl, flags in cands:
            if mx_apl > 0:
                np_ = apl / mx_apl
            else:
                np_ = 0.0
                flags.append("zero_max_apl")
            if mx_sl > 0:
                ns = sl / mx_sl
            else:
                ns = 0.0
                flags.append("zero_max_sl")
            t = cfg.label_threshold
            if np_ > t and ns > t:
                lab = "VeryStrong"
            elif np_ > t and not ns > t:
                lab = "Strong"
            elif not np_ > t and ns > t:
                lab = "Recommend"
            else:
                lab = "Low"
            rows.append({
                "worker_id": w,
                "task_id": task_id,
                "conditions": {"prize": conds[0], "duration": conds[1], "proficiency": conds[2], "specialty": conds[3]},
                "apl": apl,
                "sl": sl,
                "norm_proficiency": np_,
                "norm_specialty": ns,
                "label": lab,
                "success_probability": None,
                "flags": flags,
            })

    # competitor pools: everyone the task went to in this run
    degenerate = []
    for task_id in sorted({row["task_id"] for row in rows}):
        task = ds.tasks[task_id]
        members = sorted(row["worker_id"] for row in rows if row["task_id"] == task_id)
        y = _key(task.task_type)
        techs = sorted({_key(x) for x in task.technologies})
        numer = {}
        for i in members:
            sp_total = 0
            for j in members:
                sp_total += type_count[j].get(y, 0)
            spr = type_count[i].get(y, 0) / sp_total if sp_total > 0 else 0.0
            per_sum = 0.0
            for kk in techs:
                pe_total = 0
                for j in members:
                    pe_total += tech_count[j].get(kk, 0)
                per_sum += tech_count[i].get(kk, 0) / pe_total if pe_total > 0 else 0.0
            aper = per_sum / len(techs) if techs else 0.0
            numer[i] = spr * aper * trust[i] * p_vs[_belt(ds.ratings.get(i, 0))]
        total = 0.0
        for i in members:
            total += numer[i]
        if total <= 0:
            degenerate.append(task_id)
        for row in rows:
            if row["task_id"] == task_id:
                row["success_probability"] = numer[row["worker_id"]] / total if total > 0 else 0.0
                if total <= 0:
                    row["flags"].append("degenerate_pool")

    rows.sort(key=lambda row: (row["worker_id"], row["task_id"]))
    top = []
    for w in workers:
        mine = [row for row in rows if row["worker_id"] == w]
        mine.sort(key=lambda row: (-row["success_probability"], row["task_id"]))
        for rank, row in enumerate(mine[:k], start=1):
            top.append({
                "worker_id": w,
                "rank": rank,
                "task_id": row["task_id"],
                "label": row["label"],
                "p_success": row["success_probability"],
            })
    return {
        "workers": workers,
        "excluded_workers": excluded,
        "recommendations": rows,
        "top": top,
        "degenerate_tasks": degenerate,
    }
