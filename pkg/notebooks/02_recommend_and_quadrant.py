"""
Collaborator-driven candidates and the proficiency/specialty quadrant
=====================================================================

Three workers who have shared tasks before. Two new tasks open; each worker is
offered what their collaborators joined and checked against four conditions.
"""

# %%
from datetime import date, timedelta

from crowdrec import (
    RecommenderConfig,
    RegistrationRecord,
    TaskRecord,
    build_dataset,
    build_index,
    build_profiles,
    label,
    recommend,
)

day = date(2015, 1, 5)


def t(tid, kind, techs, prize, start, days):
    return TaskRecord(tid, kind, tuple(techs), prize, start, start + timedelta(days=days), "completed")


def r(w, tid, when, span=None, valid=False):
    sub = None if span is None else when + timedelta(days=span)
    return RegistrationRecord(w, tid, when, sub, sub is not None, valid)


cutoff = date(2015, 3, 1)
tasks = [
    t("old1", "Code", ["Java"], 400, day, 12),
    t("old2", "Code", ["Java", "SQL"], 600, day, 12),
    t("old3", "Design", ["CSS"], 300, day, 8),
    t("new1", "Code", ["Java"], 700, cutoff, 14),
    t("new2", "Design", ["CSS", "HTML"], 250, cutoff, 5),
]
regs = [
    r("ana", "old1", day, 6, True), r("ana", "old2", day, 9, True), r("ana", "new2", cutoff),
    r("bo", "old2", day, 4), r("bo", "old3", day, 3, True), r("bo", "new1", cutoff),
    r("cy", "old3", day, 2, True), r("cy", "new1", cutoff),
]
ds = build_dataset(tasks, regs, {"ana": 1300, "bo": 700, "cy": 2300})

# %% [markdown]
# The index is built over the full log; profiles only see the past.

# %%
index = build_index(ds)
profiles = build_profiles(ds.history_before(cutoff))
cfg = RecommenderConfig(alpha=0.3, beta=0.3, min_conditions=3)
print("collaborators:", {w: sorted(index.collaborators[w]) for w in sorted(ds.workers)})

# %%
for w in sorted(ds.workers):
    for rec in label(recommend(w, ds, index, profiles, cfg, cutoff)):
        met = ", ".join(n for n, ok in rec.to_dict()["conditions"].items() if ok)
        print(f"{w} -> {rec.task_id}: apl={rec.apl:.2f} sl={rec.sl:.2f} [{met}] {rec.label}")

# %% [markdown]
# Labels place each task on a 2x2 grid after scaling both axes by the best
# task in the worker's own list. A value exactly at half the maximum is not
# "above" the threshold.

# %%
from crowdrec import Recommendation

points = [("a", 0.40, 0.60), ("b", 0.20, 0.60), ("c", 0.35, 0.10), ("d", 0.05, 0.05)]
for rec in label([Recommendation("demo", tid, (True,) * 4, apl, sl) for tid, apl, sl in points]):
    print(f"{rec.task_id}: ({rec.norm_proficiency:.2f}, {rec.norm_specialty:.2f}) {rec.label}")
