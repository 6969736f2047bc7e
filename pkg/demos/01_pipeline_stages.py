"""Walk a synthetic photograph through every stage of the rendering pipeline.

Run with:  python3 demos/01_pipeline_stages.py
Outputs land in demos/output/.
"""

from pathlib import Path

import numpy as np

from ispkit import (
    FLOPS_PER_PIXEL,
    color_correct,
    default_params,
    digital_gain,
    estimate_flops,
    gamma_correct,
    normalize_ccm_rows,
    save_image,
    tone_map,
    white_balance,
)
from ispkit.params import IspParams

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)


def make_scene(h=192, w=256):
    """Horizontal luminance ramp with three saturated color bars."""
    y, x = np.mgrid[0:h, 0:w]
    img = np.repeat((x / (w - 1))[..., None], 3, axis=2) * 0.5
    for i, channel in enumerate((0, 1, 2)):
        band = (y > h * i / 3) & (y <= h * (i + 1) / 3)
        img[band, channel] += 0.35
    return np.clip(img, 0, 1)


def stats(label, img):
    print(f"  {label:<18s} min={img.min():.4f} mean={img.mean():.4f} max={img.max():.4f}")


scene = make_scene()
params = IspParams(
    dg=1.4,
    wb_r=0.9,
    wb_b=1.6,
    ccm=normalize_ccm_rows(
        IspParams(ccm=[[1.15, -0.1, -0.05], [0.05, 0.9, 0.05], [-0.05, 0.15, 0.9]])
    ).ccm,
    offset=[0.01, 0.0, -0.01],
    gamma=1 / 2.2,
    tone_s=3.0,
    tone_p1=2.0,
    tone_p2=3.0,
)

print("Stage-by-stage rendering")
stats("input", scene)
staged = digital_gain(scene, params.dg)
stats("digital gain", staged)
staged = white_balance(staged, params.wb_r, params.wb_b)
stats("white balance", staged)
staged = color_correct(staged, params.ccm, params.offset)
stats("color matrix", staged)
staged = gamma_correct(staged, params.gamma)
stats("gamma", staged)
staged = tone_map(staged, params.tone_s, params.tone_p1, params.tone_p2)
stats("tone curve", staged)
final = np.clip(staged, 0, 1)
stats("clipped output", final)

save_image(scene, OUT / "scene_input.png")
save_image(final, OUT / "scene_rendered.png")
print(f"\nWrote {OUT / 'scene_input.png'} and {OUT / 'scene_rendered.png'}")

print(f"\nDefault style: {default_params().to_json()}")
h, w = scene.shape[:2]
print(f"Cost: {FLOPS_PER_PIXEL} FLOPs/pixel, {estimate_flops(w, h):,} for {w}x{h}")
