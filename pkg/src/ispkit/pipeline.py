"""Five-stage parametric pipeline: gain, white balance, CCM, gamma, tone curve.

Images are ``(H, W, 3)`` float arrays in [0, 1] on entry. Intermediate
stages may leave that range (gain and CCM are unclamped); only the final
pipeline output is clipped back to [0, 1]. Power-law inputs are floored at
``EPSILON`` so negative intermediates stay well defined.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConstraintViolationError, DimensionMismatchError, ParameterDomainError
from .params import IspParams

EPSILON = 1e-8

CCM_ROW_SUM_TOL = 1e-6

# Per-pixel operation count (3 channels), counting mul/add/sub as 1 op,
# pow as 5, max/clamp as 0:
#   gain 3 mul; WB 2 mul; CCM 9 mul + 6 add + 3 add;
#   gamma 3 pow; tone per channel 2 pow + 2 mul + 1 sub.
FLOPS_PER_PIXEL = 3 + 2 + 18 + 3 * 5 + 3 * (2 * 5 + 3)


def _as_image(img) -> np.ndarray:
    arr = np.asarray(img, dtype=float)
    if arr.ndim != 3 or arr.shape[-1] != 3:
        raise DimensionMismatchError(f"expected (H, W, 3) image, got shape {arr.shape}")
    return arr


def _check_positive_finite(name: str, value: float) -> float:
    value = float(value)
    if not np.isfinite(value) or value <= 0:
        raise ParameterDomainError(f"{name} must be finite and > 0, got {value}")
    return value


def digital_gain(img, dg: float) -> np.ndarray:
    """Scale every sample by ``dg``. No clamping."""
    dg = _check_positive_finite("dg", dg)
    return _as_image(img) * dg


def white_balance(img, wb_r: float, wb_b: float) -> np.ndarray:
    """Scale red by ``wb_r`` and blue by ``wb_b``; green is untouched."""
    wb_r = _check_positive_finite("wb_r", wb_r)
    wb_b = _check_positive_finite("wb_b", wb_b)
    out = _as_image(img).copy()
    out[..., 0] *= wb_r
    out[..., 2] *= wb_b
    return out


def color_correct(img, ccm, offset) -> np.ndarray:
    """Per pixel ``out = ccm @ rgb + offset``. Rows of ``ccm`` must sum to 1."""
    ccm = np.asarray(ccm, dtype=float).reshape(3, 3)
    offset = np.asarray(offset, dtype=float).reshape(3)
    row_sums = ccm.sum(axis=1)
    if np.any(np.abs(row_sums - 1.0) > CCM_ROW_SUM_TOL):
        raise ConstraintViolationError(
            f"CCM rows must sum to 1 (within {CCM_ROW_SUM_TOL}); sums are {row_sums}"
        )
    return _as_image(img) @ ccm.T + offset


def gamma_correct(img, gamma: float) -> np.ndarray:
    """Per sample ``max(x, eps) ** gamma``."""
    gamma = _check_positive_finite("gamma", gamma)
    return np.maximum(_as_image(img), EPSILON) ** gamma


def tone_map(img, s: float, p1: float, p2: float) -> np.ndarray:
    """Two-power S-curve ``s * x**p1 - (s - 1) * x**p2`` with the eps floor.

    Passes through (0, 0) and (1, 1) for any parameter values.
    """
    s = float(s)
    if not np.isfinite(s):
        raise ParameterDomainError(f"tone_s must be finite, got {s}")
    p1 = _check_positive_finite("tone_p1", p1)
    p2 = _check_positive_finite("tone_p2", p2)
    x = np.maximum(_as_image(img), EPSILON)
    return s * x**p1 - (s - 1.0) * x**p2


def apply_pipeline(img, params: IspParams) -> np.ndarray:
    """Run all five stages in order and clip the result to [0, 1]."""
    params.validate()
    out = digital_gain(img, params.dg)
    out = white_balance(out, params.wb_r, params.wb_b)
    out = color_correct(out, params.ccm, params.offset)
    out = gamma_correct(out, params.gamma)
    out = tone_map(out, params.tone_s, params.tone_p1, params.tone_p2)
    return np.clip(out, 0.0, 1.0)


def estimate_flops(width: int, height: int) -> int:
    """Total pipeline op count for an image of the given size."""
    if width < 1 or height < 1:
        raise ParameterDomainError(f"dimensions must be positive, got {width}x{height}")
    return FLOPS_PER_PIXEL * int(width) * int(height)


@dataclass(frozen=True)
class CurveSamples:
    """Sampled transfer curves for plotting: shared abscissae in [0, 1]."""

    x: np.ndarray
    gamma_curve: np.ndarray
    tone_curve: np.ndarray
    ccm_r: np.ndarray
    ccm_g: np.ndarray
    ccm_b: np.ndarray


def sample_curves(params: IspParams, n: int) -> CurveSamples:
    """Sample the gamma and tone curves and the per-channel response of a
    neutral gray ramp through WB + CCM, at ``n`` uniform points."""
    if n < 2:
        raise ParameterDomainError(f"need at least 2 samples, got {n}")
    params.validate()
    x = np.linspace(0.0, 1.0, n)
    xm = np.maximum(x, EPSILON)
    gamma_curve = xm**params.gamma
    tone_curve = params.tone_s * xm**params.tone_p1 - (params.tone_s - 1.0) * xm**params.tone_p2
    gray = np.stack([params.wb_r * x, x, params.wb_b * x], axis=0)
    resp = params.ccm @ gray + params.offset[:, None]
    return CurveSamples(
        x=x,
        gamma_curve=gamma_curve,
        tone_curve=tone_curve,
        ccm_r=resp[0],
        ccm_g=resp[1],
        ccm_b=resp[2],
    )
