"""Greedy coordinate search over the task-vector space.

Given an input and a reference, the search walks the decoder's task space one
coordinate step at a time, keeping the best style seen so far. A small budget
(a handful of renders) is usually enough to get close.

Run with:  python3 demos/04_guided_search.py
"""

import numpy as np

from ispkit import (
    SearchConfig,
    apply_pipeline,
    decode,
    greedy_search,
    psnr,
    synth_weights,
)

weights = synth_weights(seed=42, scale=1.0)
rng = np.random.default_rng(1)
img = rng.random((64, 64, 3))

target_t = np.array([0.3, 0.0, 0.0])
reference = apply_pipeline(img, decode(target_t, weights))

cfg = SearchConfig(t_init=[0.0, 0.0, 0.0], step=0.1, max_fails=100)
best_t, best_error, trace = greedy_search(img, reference, weights, cfg)
print(f"Full budget: target t={target_t.tolist()}")
print(f"  found t={np.round(best_t, 6).tolist()}  mse={best_error:.3e}  "
      f"renders={len(trace)}")

print("\nFirst ten evaluations:")
for i, entry in enumerate(trace.entries[:10]):
    mark = "improve" if entry.improved else "fail"
    print(f"  {i:2d}  t={np.round(entry.t, 3).tolist()}  err={entry.error:.3e}  {mark}")

# tiny-budget variant: coarse step, a handful of renders
small = SearchConfig(t_init=[3.0, 3.0, 3.0], step=3.0, max_fails=4)
reference2 = apply_pipeline(img, decode(np.array([6.0, 3.0, 0.0]), weights))
best_t2, best_error2, trace2 = greedy_search(img, reference2, weights, small)
out = apply_pipeline(img, decode(best_t2, weights))
print(f"\nSmall budget: {len(trace2)} renders, best t={best_t2.tolist()}, "
      f"PSNR {psnr(out, reference2):.2f} dB")
