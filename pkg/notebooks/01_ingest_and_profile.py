"""
Loading a registration log and profiling workers
=================================================

A small synthetic market is written to CSV, read back through the validating
loader, and turned into per-worker profiles.
"""

# %%
import tempfile
from collections import Counter
from pathlib import Path

import numpy as np

from crowdrec import build_profiles, derive_indicators, load_dataset_dir, synth_generate, write_dataset
from crowdrec.synth import default_cutoff

# %% [markdown]
# Generate 40 workers and 150 tasks over four months, then round-trip through CSV.

# %%
tmp = Path(tempfile.mkdtemp())
write_dataset(synth_generate(seed=3, n_workers=40, n_tasks=150), tmp)
ds = load_dataset_dir(tmp)
print(f"{len(ds.tasks)} tasks, {len(ds.registrations)} registrations, {len(ds.workers)} workers")
print("date range:", *ds.date_range())

# %% [markdown]
# Technology and type counts per worker. Names are compared after trimming and
# case-folding, so "Java" and " java" land in the same bucket.

# %%
ind = derive_indicators(ds)
busiest = max(ds.workers, key=lambda w: sum(ind.type_counts(w).values()))
print(busiest, dict(ind.tech_counts(busiest)))
print(busiest, dict(ind.type_counts(busiest)))

# %% [markdown]
# Profiles use only registrations before the cutoff.

# %%
cutoff = default_cutoff(ds)
profiles = build_profiles(ds.history_before(cutoff))
p = profiles[busiest]
print(f"cutoff {cutoff}: belt={p.belt.name} base prize={p.base_monetary_prize} base duration={p.base_duration}d "
      f"trust={p.trustworthiness:.2f}")

# %%
belts = Counter(p.belt.name for p in profiles.values())
trust = np.array([p.trustworthiness for p in profiles.values()])
print("belts:", dict(belts))
print(f"trustworthiness mean {trust.mean():.3f}, quartiles {np.percentile(trust, [25, 50, 75]).round(3)}")
print("workers that never submitted:", sum(p.duration_fallback for p in profiles.values()))
