"""Controllable photo retouching built on a 19-parameter pixel pipeline.

A small bias-free MLP decodes a low-dimensional task vector into the
pipeline parameters, a finite-difference fitter recovers parameters from
reference images, and a greedy coordinate search steers the task vector
against a reference. Batch use goes through the CLI (``ispkit``);
interactive use through the HTTP service and web UI.
"""

from .decoder import (
    DecoderWeights,
    count_params,
    decode,
    load_weights,
    save_weights,
    synth_weights,
)
from .errors import (
    ConstraintViolationError,
    DegenerateConstraintError,
    DimensionMismatchError,
    ImageFormatError,
    IspKitError,
    ParameterDomainError,
    WeightsFormatError,
    WeightsValidationError,
)
from .fitter import FitConfig, FitTrace, fit_fixed_params, fit_params, mse_loss, numerical_gradient
from .imgio import decode_image, encode_png, encode_ppm, load_image, save_image
from .metrics import QualityReport, mse, psnr, quality_report, ssim
from .params import IspParams, default_params, normalize_ccm_rows
from .pipeline import (
    EPSILON,
    FLOPS_PER_PIXEL,
    CurveSamples,
    apply_pipeline,
    color_correct,
    digital_gain,
    estimate_flops,
    gamma_correct,
    sample_curves,
    tone_map,
    white_balance,
)
from .search import (
    SearchConfig,
    SearchState,
    SearchTrace,
    best_of_candidates,
    greedy_search,
    search_step,
    search_to_completion,
)

__version__ = "0.1.0"
