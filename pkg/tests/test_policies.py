import math

import numpy as np
import pytest

from minimax_bai.diffusion import ExperimentState
from minimax_bai.policies import (
    AdaptivePlugIn,
    EqualSplit,
    FixedFraction,
    PolicySpec,
    TwoPointPrior,
    TwoStage,
    bayes_decision,
    bayes_threshold_c,
    constant_fraction,
    indifference_prior,
    neyman_gamma,
    policy_from_name,
    threshold_decision,
)

LN_ONE_THIRD = -1.0986122886681098


def state(x1, x0, t=1.0, q1=0.5, q0=0.5):
    return ExperimentState(t=t, x1=x1, x0=x0, q1=q1, q0=q0)


class TestNeymanGamma:
    @pytest.mark.parametrize("s1,s0,expected", [
        (1.0, 1.0, 0.5),
        (2.0, 1.0, 2.0 / 3.0),
        (1.0, 3.0, 0.25),
    ])
    def test_examples(self, s1, s0, expected):
        assert neyman_gamma(s1, s0) == pytest.approx(expected, abs=1e-15)

    def test_fractions_sum_to_one(self):
        for s1, s0 in [(1.0, 1.0), (2.0, 1.0), (0.3, 5.1), (1e-3, 7.0)]:
            assert neyman_gamma(s1, s0) + neyman_gamma(s0, s1) == pytest.approx(1.0, abs=1e-15)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            neyman_gamma(0.0, 1.0)
        with pytest.raises(ValueError):
            neyman_gamma(1.0, -1.0)


class TestThresholdDecision:
    def test_examples(self):
        assert threshold_decision(state(1.0, 0.0), 1.0, 1.0, 0.0) == 1
        assert threshold_decision(state(0.0, 1.0), 1.0, 1.0, 0.0) == 0
        # exact tie resolves to arm 1 (weak inequality)
        assert threshold_decision(state(0.0, 0.0), 1.0, 1.0, 0.0) == 1

    def test_scale_invariance(self):
        gen = np.random.default_rng(2)
        for _ in range(200):
            x1, x0 = gen.normal(size=2)
            s1, s0 = gen.uniform(0.2, 3.0, size=2)
            c = gen.uniform(-1.0, 1.0)
            k = gen.uniform(0.1, 10.0)
            base = threshold_decision(state(x1, x0), s1, s0, c)
            scaled = threshold_decision(state(k * x1, k * x0), k * s1, k * s0, c)
            assert base == scaled


class TestBayesDecision:
    def test_log_phi_ln2_symmetric_prior(self):
        prior = TwoPointPrior((1.0, -1.0), (-1.0, 1.0), 0.5)
        # threshold is ln(1) = 0
        assert bayes_decision(math.log(2.0), prior) == 1

    def test_tie_goes_to_arm_one(self):
        prior = TwoPointPrior((1.0, -1.0), (-1.0, 1.0), 0.5)
        assert bayes_decision(0.0, prior) == 1

    def test_asymmetric_prior_mass(self):
        prior = TwoPointPrior((1.0, -1.0), (-1.0, 1.0), 0.75)
        # threshold ln(1/3) < 0, so log_phi = 0 still picks arm 1
        assert bayes_decision(0.0, prior) == 1
        assert bayes_decision(LN_ONE_THIRD - 0.01, prior) == 0


class TestBayesThresholdC:
    def test_examples(self):
        assert bayes_threshold_c(1.5, 0.5) == 0.0
        assert bayes_threshold_c(1.0, 0.75) == pytest.approx(LN_ONE_THIRD, abs=1e-12)
        assert bayes_threshold_c(2.0, 0.25) == pytest.approx(math.log(3.0) / 2.0, abs=1e-12)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            bayes_threshold_c(1.0, 0.0)
        with pytest.raises(ValueError):
            bayes_threshold_c(1.0, 1.0)
        with pytest.raises(ValueError):
            bayes_threshold_c(0.0, 0.5)


class TestSpecs:
    def test_fixed_fraction_bounds(self):
        with pytest.raises(ValueError):
            FixedFraction(-0.1)
        with pytest.raises(ValueError):
            FixedFraction(1.1)
        assert FixedFraction(0.0).gamma == 0.0

    def test_two_stage_rho(self):
        with pytest.raises(ValueError):
            TwoStage(0.0)
        with pytest.raises(ValueError):
            TwoStage(1.0)

    def test_adaptive_batch(self):
        with pytest.raises(ValueError):
            AdaptivePlugIn(0)

    def test_constant_fraction(self):
        assert constant_fraction(FixedFraction(0.3)) == 0.3
        assert constant_fraction(EqualSplit()) == 0.5
        assert constant_fraction(TwoStage(0.5)) is None
        assert constant_fraction(AdaptivePlugIn(10)) is None

    def test_prior_invariants(self):
        with pytest.raises(ValueError):
            TwoPointPrior((1.0, 2.0), (-1.0, 1.0), 0.5)
        with pytest.raises(ValueError):
            TwoPointPrior((1.0, -1.0), (1.0, -1.0), 0.5)
        with pytest.raises(ValueError):
            TwoPointPrior((1.0, -1.0), (-1.0, 1.0), 0.0)

    def test_indifference_prior_points(self):
        prior = indifference_prior(2.0, 3.0, 1.0, m1=0.5)
        assert prior.state1 == (3.0, -1.0)
        assert prior.state0 == (-3.0, 1.0)
        with pytest.raises(ValueError):
            indifference_prior(0.0, 1.0, 1.0)


class TestBayesThresholdCoincidence:
    def test_bayes_rule_equals_threshold_rule_under_indifference(self):
        # with the indifference prior and m1 = 1/2 the posterior rule and the
        # zero-threshold rule decide identically on every state
        from minimax_bai.diffusion import log_likelihood_ratio

        gen = np.random.default_rng(9)
        for _ in range(300):
            s1, s0 = gen.uniform(0.3, 2.5, size=2)
            delta = gen.uniform(0.2, 3.0)
            prior = indifference_prior(delta, s1, s0, m1=0.5)
            st = state(x1=gen.normal(), x0=gen.normal(),
                       q1=gen.uniform(), q0=gen.uniform())
            log_phi = log_likelihood_ratio(st, prior, s1, s0)
            assert bayes_decision(log_phi, prior) == threshold_decision(st, s1, s0, 0.0)


class TestPolicyFromName:
    def test_known_names(self):
        assert policy_from_name("neyman", 2.0, 1.0).sampling == FixedFraction(2.0 / 3.0)
        assert policy_from_name("equal", 1.0, 1.0).sampling == EqualSplit()
        assert policy_from_name("two-stage", 1.0, 1.0, rho=0.6).sampling == TwoStage(0.6)
        assert policy_from_name("adaptive-neyman", 1.0, 1.0, batch=50).sampling == AdaptivePlugIn(50)
        assert policy_from_name("fixed:0.3", 1.0, 1.0).sampling == FixedFraction(0.3)

    def test_bad_names(self):
        with pytest.raises(ValueError):
            policy_from_name("frobnicate", 1.0, 1.0)
        with pytest.raises(ValueError):
            policy_from_name("fixed:x", 1.0, 1.0)

    def test_threshold_passthrough(self):
        assert policy_from_name("neyman", 1.0, 1.0, threshold_c=0.2).threshold_c == 0.2
        assert PolicySpec(EqualSplit()).threshold_c == 0.0
