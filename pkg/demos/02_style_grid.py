"""Decode task vectors into rendering styles and sweep a 4x4 style grid.

The decoder maps a low-dimensional task vector to the 19 pipeline parameters;
the zero vector reproduces the default style exactly.

Run with:  python3 demos/02_style_grid.py
"""

from pathlib import Path

import numpy as np

from ispkit import (
    apply_pipeline,
    decode,
    default_params,
    sample_curves,
    save_image,
    synth_weights,
)

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

weights = synth_weights(seed=42, scale=1.0)

# the zero task vector is the identity style
zero = decode(np.zeros(3), weights)
assert np.array_equal(zero.to_vector(), default_params().to_vector())
print("decode([0,0,0]) reproduces the default style exactly.")

rng = np.random.default_rng(0)
img = rng.random((96, 128, 3)) * 0.6 + 0.1

# 4x4 grid varying the first two task dimensions
values = [0.0, 1.0, 2.0, 3.0]
tiles = []
for t1 in values:
    row = []
    for t0 in values:
        params = decode(np.array([t0, t1, 0.0]), weights)
        row.append(apply_pipeline(img, params))
        print(f"t=({t0},{t1},0): dg={params.dg:.3f} wb=({params.wb_r:.3f},{params.wb_b:.3f}) "
              f"gamma={params.gamma:.3f}")
    tiles.append(np.concatenate(row, axis=1))
grid = np.concatenate(tiles, axis=0)
save_image(grid, OUT / "style_grid.png")
print(f"\nWrote {OUT / 'style_grid.png'} ({grid.shape[1]}x{grid.shape[0]})")

# tone/gamma response curves for one decoded style
curves = sample_curves(decode(np.array([2.0, 1.0, 0.0]), weights), 9)
print("\nGray-ramp response for t=(2,1,0):")
for x, gamma_y, tone_y in zip(curves.x, curves.gamma_curve, curves.tone_curve):
    print(f"  x={x:.3f}  gamma={gamma_y:.4f}  tone={tone_y:.4f}")
