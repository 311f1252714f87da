"""Tests for error rates, the contamination algebra, and the risk form."""

import math

import numpy as np
import pytest
from scipy import integrate, stats

from contamtest import (
    BayesConfig,
    ContaminationParams,
    ErrorPair,
    Exponential,
    FamilyError,
    Gaussian,
    RegionKind,
    Tabulated,
    ThresholdRule,
    bayes_risk,
    contaminate,
    contaminated_error_rates,
    decision_region,
    decontaminate,
    decontaminate_raw,
    decontaminated_rate_partials,
    gamma_from_lambda,
    lambda_from_gamma,
    pair_ratio_range,
    pure_error_rates,
    q_function,
    risk_coeffs,
    risk_gradient,
    threshold_rule_rates,
)
from support import random_lambda, random_pair


class TestQFunction:
    def test_symmetry_point(self):
        assert q_function(0.0) == 0.5

    def test_limits(self):
        assert q_function(math.inf) == 0.0
        assert q_function(-math.inf) == 1.0

    def test_reference_value(self):
        # complementary-error-function oracle
        assert q_function(1.0) == pytest.approx(0.15865525393145707, abs=1e-15)

    def test_matches_scipy_tail(self, rng):
        ys = rng.uniform(-8, 8, size=500)
        ours = np.array([q_function(float(y)) for y in ys])
        np.testing.assert_allclose(ours, stats.norm.sf(ys), atol=1e-12)


class TestDecisionRegion:
    def test_gaussian_reference_roots(self):
        # quadratic-formula oracle on 3 y^2 + 0.4 y - (0.04 + 8 ln 2) = 0
        region = decision_region(Gaussian(0, 1), Gaussian(0.2, 2), 1.0)
        assert region.kind is RegionKind.H1_OUTSIDE_INTERVAL
        assert region.y_minus == pytest.approx(-1.4327450902101193, abs=1e-12)
        assert region.y_plus == pytest.approx(1.299411756876786, abs=1e-12)

    def test_gaussian_tiny_gamma_accepts_everywhere(self):
        region = decision_region(Gaussian(0, 1), Gaussian(0.2, 2), 1e-6)
        assert region.kind is RegionKind.ALL_H1

    def test_gaussian_equal_spread_single_threshold(self):
        # equal stddev collapses the quadratic to one linear boundary
        region = decision_region(Gaussian(0, 1), Gaussian(1, 1), 1.0)
        assert region.kind is RegionKind.H1_ABOVE
        assert region.y_star == pytest.approx(0.5, abs=1e-12)

    def test_gaussian_wider_null_flips_interval(self):
        region = decision_region(Gaussian(0.2, 2), Gaussian(0, 1), 1.0)
        assert region.kind is RegionKind.H1_INSIDE_INTERVAL

    def test_exponential_reference_threshold(self):
        region = decision_region(Exponential(1), Exponential(2), 1.0)
        assert region.kind is RegionKind.H1_BELOW
        assert region.y_star == pytest.approx(math.log(2.0), abs=1e-15)

    def test_exponential_large_gamma_rejects_everywhere(self):
        region = decision_region(Exponential(1), Exponential(2), 2.5)
        assert region.kind is RegionKind.ALL_H0

    def test_tabulated_unsupported(self):
        t = Tabulated(grid=[0.0, 1.0], density_values=[1.0, 1.0])
        with pytest.raises(FamilyError):
            decision_region(t, t, 1.0)


class TestPureErrorRates:
    def test_exponential_reference(self, bayes):
        region = decision_region(Exponential(1), Exponential(2), 1.0)
        rates = pure_error_rates(Exponential(1), Exponential(2), region)
        assert rates.r0 == pytest.approx(0.5, abs=1e-12)
        assert rates.r1 == pytest.approx(0.25, abs=1e-12)
        assert bayes_risk(rates, bayes) == pytest.approx(0.375, abs=1e-12)

    def test_all_h0_region(self):
        region = decision_region(Exponential(1), Exponential(2), 10.0)
        rates = pure_error_rates(Exponential(1), Exponential(2), region)
        assert (rates.r0, rates.r1) == (0.0, 1.0)

    def test_gaussian_reference_rates(self, bayes):
        # quadrature oracle values for the boundary at gamma = 1
        region = decision_region(Gaussian(0, 1), Gaussian(0.2, 2), 1.0)
        rates = pure_error_rates(Gaussian(0, 1), Gaussian(0.2, 2), region)
        assert rates.r0 == pytest.approx(0.17286667879981646, abs=1e-12)
        assert rates.r1 == pytest.approx(0.501595890740542, abs=1e-12)
        assert bayes_risk(rates, bayes) == pytest.approx(0.3372, abs=1e-3)

    def test_closed_form_matches_quadrature(self, rng):
        for _ in range(50):
            pair = random_pair(rng)
            p0, p1 = pair.p0, pair.p1
            lo, hi = pair.common_support()
            gamma = random_lambda(rng, (0.2, 5.0))
            region = decision_region(p0, p1, gamma)
            rates = pure_error_rates(p0, p1, region)
            lo_int = max(lo, -60.0)
            hi_int = min(hi, 60.0)
            prob0 = sum(
                integrate.quad(lambda y: float(p0.pdf(y)), max(a, lo_int), min(b, hi_int))[0]
                for a, b in region.h1_intervals()
                if min(b, hi_int) > max(a, lo_int)
            )
            prob1 = sum(
                integrate.quad(lambda y: float(p1.pdf(y)), max(a, lo_int), min(b, hi_int))[0]
                for a, b in region.h1_intervals()
                if min(b, hi_int) > max(a, lo_int)
            )
            assert rates.r0 == pytest.approx(prob0, abs=1e-6)
            assert rates.r1 == pytest.approx(1.0 - prob1, abs=1e-6)


class TestThresholdTransform:
    def test_identity_without_contamination(self):
        params = ContaminationParams(0.0, 0.0)
        assert gamma_from_lambda(1.7, params) == pytest.approx(1.7, abs=1e-15)
        assert lambda_from_gamma(0.3, params) == pytest.approx(0.3, abs=1e-15)

    def test_round_trip(self, ref_params):
        lam = lambda_from_gamma(1.0, ref_params)
        assert lam == pytest.approx(1.0, abs=1e-12)
        assert gamma_from_lambda(lam, ref_params) == pytest.approx(1.0, abs=1e-10)

    def test_round_trip_randomized(self, rng):
        for _ in range(200):
            pi0 = rng.uniform(0.0, 0.5)
            pi1 = rng.uniform(0.0, 0.95 - pi0)
            params = ContaminationParams(float(pi0), float(pi1))
            gamma = float(rng.uniform(0.05, 20.0))
            back = gamma_from_lambda(lambda_from_gamma(gamma, params), params)
            assert back == pytest.approx(gamma, rel=1e-10)

    def test_monotone_increasing(self, ref_params):
        gammas = np.linspace(0.05, 10.0, 100)
        lams = [lambda_from_gamma(float(g), ref_params) for g in gammas]
        assert all(b > a for a, b in zip(lams, lams[1:]))


class TestContaminatedErrorRates:
    def test_reduces_to_pure_without_contamination(self):
        pair = contaminate(Exponential(1), Exponential(2), ContaminationParams(0.0, 0.0))
        rates = contaminated_error_rates(pair, ThresholdRule(1.0))
        assert rates.r0 == pytest.approx(0.5, abs=1e-12)
        assert rates.r1 == pytest.approx(0.25, abs=1e-12)

    def test_below_range_is_always_alternative(self, exp_pair):
        rng_pair = pair_ratio_range(exp_pair)
        rates = contaminated_error_rates(exp_pair, ThresholdRule(rng_pair[0] * 0.5), rng_pair)
        assert (rates.r0, rates.r1) == (1.0, 0.0)
        assert rates.flag == "lambda-at-or-below-range"

    def test_above_range_is_always_null(self, exp_pair):
        rng_pair = pair_ratio_range(exp_pair)
        rates = contaminated_error_rates(exp_pair, ThresholdRule(rng_pair[1] * 2.0), rng_pair)
        assert (rates.r0, rates.r1) == (0.0, 1.0)
        assert rates.flag == "lambda-at-or-above-range"

    def test_exponential_reference_rates(self, exp_pair):
        # lambda = 1 maps back to a unit pure threshold; pushing (0.5, 0.25)
        # through the mixture gives 0.55 and 0.325 by hand
        rates = contaminated_error_rates(exp_pair, ThresholdRule(1.0))
        assert rates.r0 == pytest.approx(0.55, abs=1e-12)
        assert rates.r1 == pytest.approx(0.325, abs=1e-12)

    def test_matches_direct_mixture_integration(self, rng):
        for _ in range(50):
            pair = random_pair(rng)
            lam = random_lambda(rng, pair_ratio_range(pair))
            rates = contaminated_error_rates(pair, ThresholdRule(lam))
            gamma = gamma_from_lambda(lam, pair.params)
            region = decision_region(pair.p0, pair.p1, gamma)
            lo, hi = pair.common_support()
            lo_int, hi_int = max(lo, -60.0), min(hi, 60.0)
            prob0 = sum(
                integrate.quad(
                    lambda y: float(pair.p0_tilde.pdf(y)), max(a, lo_int), min(b, hi_int)
                )[0]
                for a, b in region.h1_intervals()
                if min(b, hi_int) > max(a, lo_int)
            )
            prob1 = sum(
                integrate.quad(
                    lambda y: float(pair.p1_tilde.pdf(y)), max(a, lo_int), min(b, hi_int)
                )[0]
                for a, b in region.h1_intervals()
                if min(b, hi_int) > max(a, lo_int)
            )
            assert rates.r0 == pytest.approx(prob0, abs=1e-6)
            assert rates.r1 == pytest.approx(1.0 - prob1, abs=1e-6)

    def test_roc_monotonicity_and_guessing_bound(self, gauss_pair):
        lo, hi = pair_ratio_range(gauss_pair)
        lams = np.geomspace(lo * 1.001, hi * 0.999, 200)
        rates = [contaminated_error_rates(gauss_pair, ThresholdRule(float(l))) for l in lams]
        r0 = [r.r0 for r in rates]
        r1 = [r.r1 for r in rates]
        assert all(b <= a + 1e-12 for a, b in zip(r0, r0[1:]))
        assert all(b >= a - 1e-12 for a, b in zip(r1, r1[1:]))
        assert all(a.r0 + a.r1 <= 1.0 + 1e-12 for a in rates)


class TestDecontaminate:
    def test_identity_without_contamination(self):
        rates = ErrorPair(0.3, 0.2)
        out = decontaminate(rates, ContaminationParams(0.0, 0.0))
        assert (out.r0, out.r1) == (0.3, 0.2)

    def test_round_trip_randomized(self, rng):
        # push pure rates through the mixture, then invert
        for _ in range(300):
            pi0 = rng.uniform(0.0, 0.6)
            pi1 = rng.uniform(0.0, 0.95 - pi0)
            params = ContaminationParams(float(pi0), float(pi1))
            r0, r1 = rng.uniform(0, 1), rng.uniform(0, 1)
            tilde = ErrorPair(
                (1 - params.pi0) * r0 + params.pi0 * (1 - r1),
                (1 - params.pi1) * r1 + params.pi1 * (1 - r0),
            )
            back = decontaminate(tilde, params)
            assert abs(back.r0 - r0) < 1e-12
            assert abs(back.r1 - r1) < 1e-12
            assert back.flag is None

    def test_clamps_and_flags_inconsistent_proportions(self):
        out = decontaminate(ErrorPair(0.0, 0.0), ContaminationParams(0.4, 0.3))
        assert out.flag == "clamped"
        assert 0.0 <= out.r0 <= 1.0 and 0.0 <= out.r1 <= 1.0

    def test_gaussian_reference_risk_recovery(self, gauss_pair, bayes):
        # decontaminating the contaminated rates at the optimal threshold with
        # the true proportions recovers the clean-model risk
        rates = contaminated_error_rates(gauss_pair, ThresholdRule(1.0))
        clean = decontaminate(rates, gauss_pair.params)
        assert bayes_risk(clean, bayes) == pytest.approx(0.3372, abs=1e-3)


class TestBayesRisk:
    def test_zero_rates(self, bayes):
        assert bayes_risk(ErrorPair(0.0, 0.0), bayes) == 0.0

    def test_unit_rates(self, bayes):
        assert bayes_risk(ErrorPair(1.0, 1.0), bayes) == 1.0

    def test_hand_value(self, bayes):
        assert bayes_risk(ErrorPair(0.5, 0.25), bayes) == pytest.approx(0.375, abs=1e-15)

    def test_weights(self):
        config = BayesConfig(q0=0.25, c01=2.0, c10=4.0)
        assert bayes_risk(ErrorPair(1.0, 0.0), config) == pytest.approx(0.5)
        assert bayes_risk(ErrorPair(0.0, 1.0), config) == pytest.approx(3.0)


class TestRiskCoeffs:
    def test_origin_gives_constant_term(self, bayes):
        rates = ErrorPair(0.3, 0.2)
        coeffs = risk_coeffs(rates, bayes)
        assert coeffs.evaluate(0.0, 0.0) == pytest.approx(bayes_risk(rates, bayes), abs=1e-15)

    def test_identity_on_grid(self, rng):
        # the linear-fractional form must equal the decontaminate-then-weigh
        # computation everywhere
        config = BayesConfig(q0=0.35, c01=1.5, c10=0.8)
        for _ in range(5):
            tilde = ErrorPair(float(rng.uniform(0, 1)), float(rng.uniform(0, 1)))
            coeffs = risk_coeffs(tilde, config)
            for pi0 in np.linspace(0.0, 0.45, 20):
                for pi1 in np.linspace(0.0, 0.45, 20):
                    params = ContaminationParams(float(pi0), float(pi1))
                    r0, r1 = decontaminate_raw(tilde, params)
                    direct = config.weight0 * r0 + config.weight1 * r1
                    assert abs(coeffs.evaluate(pi0, pi1) - direct) < 1e-12

    def test_degenerate_rule_constant_in_proportions(self, bayes):
        # rates summing to one zero out the gradient
        coeffs = risk_coeffs(ErrorPair(0.6, 0.4), bayes)
        values = [coeffs.evaluate(p0, p1) for p0, p1 in [(0, 0), (0.3, 0.1), (0.1, 0.5)]]
        assert max(values) - min(values) < 1e-12

    def test_gaussian_reference_minimax_value(self, gauss_pair, bayes):
        rates = contaminated_error_rates(gauss_pair, ThresholdRule(1.0))
        coeffs = risk_coeffs(rates, bayes)
        assert coeffs.evaluate(0.1619, 0.1334) == pytest.approx(0.3845, abs=1e-3)


class TestRiskGradient:
    def test_partials_match_central_differences(self, rng):
        config = BayesConfig(q0=0.4, c01=1.2, c10=0.9)
        for _ in range(100):
            tilde = ErrorPair(float(rng.uniform(0, 0.6)), float(rng.uniform(0, 0.4)))
            pi0 = float(rng.uniform(0.02, 0.5))
            pi1 = float(rng.uniform(0.02, 0.72 - pi0))
            params = ContaminationParams(pi0, pi1)
            (d00, d01), (d10, d11) = decontaminated_rate_partials(tilde, params)
            h = 1e-6

            def raw(p0, p1, index):
                return decontaminate_raw(tilde, ContaminationParams(p0, p1))[index]

            numeric = {
                (0, 0): (raw(pi0 + h, pi1, 0) - raw(pi0 - h, pi1, 0)) / (2 * h),
                (0, 1): (raw(pi0, pi1 + h, 0) - raw(pi0, pi1 - h, 0)) / (2 * h),
                (1, 0): (raw(pi0 + h, pi1, 1) - raw(pi0 - h, pi1, 1)) / (2 * h),
                (1, 1): (raw(pi0, pi1 + h, 1) - raw(pi0, pi1 - h, 1)) / (2 * h),
            }
            for analytic, key in ((d00, (0, 0)), (d01, (0, 1)), (d10, (1, 0)), (d11, (1, 1))):
                tol = 1e-8 * max(1.0, abs(analytic))
                assert abs(analytic - numeric[key]) <= tol
            if tilde.r0 + tilde.r1 <= 1.0:
                assert max(d00, d01, d10, d11) <= 1e-10
                g = risk_gradient(tilde, params, config)
                assert max(g) <= 1e-10


class TestTabulatedRates:
    def _tabulated_mixtures(self):
        xs = np.linspace(0.0, 25.0, 4001)
        v0 = 0.8 * np.exp(-xs) + 0.2 * 2 * np.exp(-2 * xs)
        v1 = 0.7 * 2 * np.exp(-2 * xs) + 0.3 * np.exp(-xs)
        v0 /= np.trapezoid(v0, xs)
        v1 /= np.trapezoid(v1, xs)
        return Tabulated(xs, v0), Tabulated(xs, v1)

    def test_matches_closed_form(self, exp_pair):
        t0, t1 = self._tabulated_mixtures()
        for lam in (0.6, 1.0, 1.3):
            numeric = threshold_rule_rates(t0, t1, lam)
            exact = contaminated_error_rates(exp_pair, ThresholdRule(lam))
            assert numeric.r0 == pytest.approx(exact.r0, abs=2e-4)
            assert numeric.r1 == pytest.approx(exact.r1, abs=2e-4)

    def test_extreme_thresholds(self):
        t0, t1 = self._tabulated_mixtures()
        low = threshold_rule_rates(t0, t1, 1e-9)
        assert low.r0 == pytest.approx(1.0, abs=1e-9)
        assert low.r1 == pytest.approx(0.0, abs=1e-9)
        high = threshold_rule_rates(t0, t1, 1e9)
        assert high.r0 == pytest.approx(0.0, abs=1e-9)
        assert high.r1 == pytest.approx(1.0, abs=1e-9)

    def test_interpolant_integral_is_exact(self):
        # splitting cells at the decision boundary must reproduce the plain
        # trapezoid total when the rule accepts everywhere
        t0, t1 = self._tabulated_mixtures()
        rates = threshold_rule_rates(t0, t1, 1e-12)
        total0 = np.trapezoid(t0.density_values, t0.grid)
        assert rates.r0 == pytest.approx(min(total0, 1.0), abs=1e-12)
