#!/usr/bin/env python3
"""Pick training datasets for a new scenario by similarity ranking.

A pool of 20 candidate datasets is generated with random parameter ranges.
A reference dataset reuses the recipe of candidate #7 under a fresh seed,
standing in for a freshly measured scenario. Ranking all candidates by
their aggregate W2 difference to the reference should, and does, put the
recipe sibling at the front -- the selected top-k then form the augmented
training set.
"""

import dataclasses
import json

from csidqa import (FeatureKind, PathRanges, SynthConfig, Wasserstein, augment_select,
                    generate_dataset, threshold_select)
from csidqa.synth import random_ranges_pool

pool_cfg = SynthConfig(antenna_grid=(2, 8), n_samples=60, seed=77)
print("generating a 20-candidate pool ...")
pool = random_ranges_pool(pool_cfg, n_datasets=20)

sibling_index = 7
recipe = json.loads(pool[sibling_index].metadata["ranges"])
reference = generate_dataset(
    dataclasses.replace(pool_cfg, seed=424243),
    PathRanges(path_count=tuple(recipe["path_count"]), delay_ns=tuple(recipe["delay_ns"]),
               aod_deg=tuple(recipe["aod_deg"]), zod_deg=tuple(recipe["zod_deg"])))
print(f"reference reuses the recipe of candidate #{sibling_index}: "
      f"paths {recipe['path_count']}, delays {recipe['delay_ns']} ns")

result = augment_select(reference, pool, k=5, measure=Wasserstein(2.0))
print(f"\nranking (best first): {result.ranking}")
print(f"selected top 5: {result.selected}")
print(f"recipe sibling ranked #{result.ranking.index(sibling_index) + 1}")

print("\naggregate difference per candidate:")
for rank, idx in enumerate(result.ranking, 1):
    marker = "  <-- recipe sibling" if idx == sibling_index else ""
    print(f"  #{rank:2d} candidate {idx:2d}: {result.aggregates[idx]:.4f}{marker}")

print("\nper-feature ranking leaders:")
for feat in (FeatureKind.PDP, FeatureKind.APS, FeatureKind.PDP_SPARSITY,
             FeatureKind.APS_SPARSITY):
    print(f"  {feat.value:>14}: {result.rankings_by_feature[feat][:5]}")

by_cutoff = threshold_select(reference, pool, threshold=0.25, measure=Wasserstein(2.0))
print(f"\nthreshold 0.25 instead of fixed k selects {len(by_cutoff.selected)} candidates: "
      f"{by_cutoff.selected}")
