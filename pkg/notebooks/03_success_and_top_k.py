"""
Winning chances against the other recommended workers
=====================================================

Each recommended task's competitors are the workers it was recommended to in
the same run. A worker's score multiplies type share, technology share,
trustworthiness and belt reliability, then normalizes across the pool.
"""

# %%
import numpy as np

from crowdrec import run_recommendation, synth_generate
from crowdrec.synth import default_cutoff

ds = synth_generate(seed=11, n_workers=40, n_tasks=150)
run = run_recommendation(ds, default_cutoff(ds), k=3)
print(f"{len(run.workers)} workers, {len(run.recommendations)} recommendations, "
      f"{len(run.degenerate_tasks)} tasks where nobody in the pool scores")

# %% [markdown]
# One crowded task, broken down factor by factor.

# %%
pools = {}
for (w, tid), b in run.breakdowns.items():
    pools.setdefault(tid, []).append(b)
tid, pool = max(pools.items(), key=lambda kv: len(kv[1]))
print(f"task {tid}: {len(pool)} competitors")
for b in sorted(pool, key=lambda b: -b.p_success):
    print(f"  {b.worker_id}  spr={b.spr:.3f} aper={b.aper:.3f} tl={b.tl:.2f} pvs={b.p_vs:.2f}  p={b.p_success:.3f}")
print("pool total:", round(sum(b.p_success for b in pool), 12))

# %% [markdown]
# Top three per worker, ties broken by task id.

# %%
for w in run.workers[:5]:
    print(w, [(rec.task_id, round(rec.success_probability, 3), rec.label) for rec in run.top[w]])

# %%
best = np.array([recs[0].success_probability for recs in run.top.values() if recs])
print(f"best-task probability: mean {best.mean():.3f}, min {best.min():.3f}, max {best.max():.3f}")
print(np.histogram(best, bins=5, range=(0, 1))[0])
