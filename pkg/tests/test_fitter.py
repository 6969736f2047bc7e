from dataclasses import replace

import numpy as np
import pytest

from ispkit import (
    DimensionMismatchError,
    FitConfig,
    IspParams,
    ParameterDomainError,
    apply_pipeline,
    default_params,
    fit_fixed_params,
    fit_params,
    mse_loss,
    normalize_ccm_rows,
    numerical_gradient,
    psnr,
)


def rand_img(seed, shape=(64, 64, 3)):
    return np.random.default_rng(seed).random(shape)


def small_cfg(**overrides):
    return FitConfig(**{"max_iters": 200, "grad_stride": 2, **overrides})


class TestMseLoss:
    def test_identical(self):
        img = rand_img(0)
        assert mse_loss(img, img) == 0.0

    def test_offset(self):
        img = rand_img(1) * 0.5
        assert mse_loss(img, img + 0.1) == pytest.approx(0.01, abs=1e-12)

    def test_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            fit_params(rand_img(0), rand_img(0, (32, 32, 3)))


class TestNumericalGradient:
    def test_stationary_point(self):
        grad = numerical_gradient(lambda p: (p.dg - 1.2) ** 2, default_params(), 1e-4)
        assert np.max(np.abs(grad)) < 1e-8

    def test_linear_function(self):
        grad = numerical_gradient(lambda p: p.dg, default_params(), 1e-4)
        expect = np.zeros(19)
        expect[0] = 1.0
        np.testing.assert_allclose(grad, expect, atol=1e-6)

    def test_matches_secant_oracle_on_mse(self):
        # independent secant slope with a different step size
        img = rand_img(2, (4, 4, 3)) * 0.6 + 0.1
        target = replace(default_params(), dg=1.4)
        ref = apply_pipeline(img, target)

        def objective(p: IspParams) -> float:
            # projection inside the objective, as in the fitting loop
            return mse_loss(apply_pipeline(img, normalize_ccm_rows(p)), ref)

        grad = numerical_gradient(objective, default_params(), 1e-4)
        hs = 1e-5
        vec = default_params().to_vector()
        for i in range(19):
            step = np.zeros(19)
            step[i] = hs
            secant = (
                objective(IspParams.from_vector(vec + step))
                - objective(IspParams.from_vector(vec - step))
            ) / (2 * hs)
            denom = max(abs(secant), 1e-6)
            assert abs(grad[i] - secant) / denom < 1e-4

    def test_bad_h(self):
        with pytest.raises(ParameterDomainError):
            numerical_gradient(lambda p: p.dg, default_params(), 0.0)


class TestFitParams:
    def test_reference_at_start_converges_fast(self):
        img = rand_img(3)
        ref = apply_pipeline(img, default_params())
        fitted, trace = fit_params(img, ref, small_cfg(max_iters=50))
        assert trace.final_loss < 1e-10
        assert trace.iterations <= 50

    def test_synthetic_round_trip(self):
        rng = np.random.default_rng(4)
        img = rng.random((64, 64, 3))
        truth = replace(
            default_params(),
            dg=rng.uniform(0.85, 2.17),
            wb_r=rng.uniform(0.73, 1.07),
            wb_b=rng.uniform(0.8, 2.41),
        )
        ref = apply_pipeline(img, truth)
        fitted, _ = fit_params(img, ref, small_cfg())
        assert psnr(apply_pipeline(img, fitted), ref) >= 40

    def test_best_envelope_non_increasing(self):
        img = rand_img(5)
        ref = apply_pipeline(img, replace(default_params(), dg=1.6))
        _, trace = fit_params(img, ref, small_cfg())
        envelope = np.minimum.accumulate(trace.losses)
        assert np.all(np.diff(envelope) <= 0)

    def test_result_satisfies_constraints(self):
        img = rand_img(6)
        ref = apply_pipeline(img, replace(default_params(), wb_b=1.8))
        cfg = small_cfg()
        fitted, _ = fit_params(img, ref, cfg)
        np.testing.assert_allclose(fitted.ccm.sum(axis=1), np.ones(3), atol=1e-12)
        lower, upper = cfg.bounds
        vec = fitted.to_vector()
        non_ccm = np.r_[0:3, 12:19]
        assert np.all(vec[non_ccm] >= lower[non_ccm] - 1e-12)
        assert np.all(vec[non_ccm] <= upper[non_ccm] + 1e-12)

    def test_deterministic(self):
        img = rand_img(7)
        ref = apply_pipeline(img, replace(default_params(), dg=1.5))
        a, _ = fit_params(img, ref, small_cfg())
        b, _ = fit_params(img, ref, small_cfg())
        np.testing.assert_array_equal(a.to_vector(), b.to_vector())

    def test_trace_respects_max_iters(self):
        img = rand_img(8)
        ref = apply_pipeline(img, replace(default_params(), dg=1.8))
        _, trace = fit_params(img, ref, small_cfg(max_iters=5))
        assert 1 <= len(trace.losses) <= 5


class TestFitFixedParams:
    def test_empty_pairs_rejected(self):
        with pytest.raises(ParameterDomainError):
            fit_fixed_params([])

    def test_single_pair_matches_fit_params(self):
        img = rand_img(9)
        ref = apply_pipeline(img, replace(default_params(), dg=1.4))
        a, _ = fit_params(img, ref, small_cfg())
        b, _ = fit_fixed_params([(img, ref)], small_cfg())
        np.testing.assert_array_equal(a.to_vector(), b.to_vector())

    def test_shared_truth_recovered(self):
        truth = replace(default_params(), dg=1.5, wb_b=1.3)
        imgs = [rand_img(10), rand_img(11)]
        pairs = [(im, apply_pipeline(im, truth)) for im in imgs]
        fitted, _ = fit_fixed_params(pairs, small_cfg())
        for im, ref in pairs:
            assert psnr(apply_pipeline(im, fitted), ref) >= 40

    def test_conflicting_truths_cost_more(self):
        truths = [replace(default_params(), dg=0.9), replace(default_params(), dg=2.0)]
        imgs = [rand_img(12), rand_img(13)]
        pairs = [(im, apply_pipeline(im, t)) for im, t in zip(imgs, truths)]
        individual = [fit_params(im, ref, small_cfg())[1].final_loss for im, ref in pairs]
        _, joint_trace = fit_fixed_params(pairs, small_cfg())
        assert joint_trace.final_loss > max(individual)
