"""Reference-based image quality measures: MSE, PSNR, SSIM."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import correlate1d

from .errors import DimensionMismatchError

# SSIM constants: 11x11 Gaussian window, sigma 1.5, K1/K2 from Wang et al.,
# dynamic range L = 1 for normalized images.
SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03

# Rec.601 luma weights.
_LUMA = np.array([0.299, 0.587, 0.114])


def _check_pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"image shapes differ: {a.shape} vs {b.shape}")
    return a, b


def mse(a, b) -> float:
    """Mean squared difference over all samples."""
    a, b = _check_pair(a, b)
    return float(np.mean((a - b) ** 2))


def psnr(a, b) -> float:
    """Peak signal-to-noise ratio in dB for [0, 1] images; inf when identical."""
    err = mse(a, b)
    if err == 0.0:
        return float("inf")
    return float(10.0 * np.log10(1.0 / err))


def _gaussian_kernel() -> np.ndarray:
    half = SSIM_WINDOW // 2
    x = np.arange(-half, half + 1, dtype=float)
    k = np.exp(-(x**2) / (2.0 * SSIM_SIGMA**2))
    return k / k.sum()


def _filter_valid(img: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    half = len(kernel) // 2
    out = correlate1d(img, kernel, axis=0, mode="nearest")
    out = correlate1d(out, kernel, axis=1, mode="nearest")
    return out[half:-half, half:-half]


def ssim(a, b) -> float:
    """Mean local SSIM on the luma channel (Gaussian window, valid region)."""
    a, b = _check_pair(a, b)
    if a.ndim == 3:
        a = a @ _LUMA
        b = b @ _LUMA
    if min(a.shape) < SSIM_WINDOW:
        raise DimensionMismatchError(
            f"image {a.shape} smaller than the {SSIM_WINDOW}x{SSIM_WINDOW} SSIM window"
        )
    kernel = _gaussian_kernel()
    c1 = (SSIM_K1) ** 2
    c2 = (SSIM_K2) ** 2
    mu_a = _filter_valid(a, kernel)
    mu_b = _filter_valid(b, kernel)
    var_a = _filter_valid(a * a, kernel) - mu_a**2
    var_b = _filter_valid(b * b, kernel) - mu_b**2
    cov = _filter_valid(a * b, kernel) - mu_a * mu_b
    num = (2 * mu_a * mu_b + c1) * (2 * cov + c2)
    den = (mu_a**2 + mu_b**2 + c1) * (var_a + var_b + c2)
    return float(np.mean(num / den))


@dataclass(frozen=True)
class QualityReport:
    mse: float
    psnr: float
    ssim: float

    def to_dict(self) -> dict:
        return {"mse": self.mse, "psnr": self.psnr, "ssim": self.ssim}


def quality_report(a, b) -> QualityReport:
    return QualityReport(mse=mse(a, b), psnr=psnr(a, b), ssim=ssim(a, b))
