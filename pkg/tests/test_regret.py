import numpy as np
import pytest

from minimax_bai.core import v_star
from minimax_bai.diffusion import Environment
from minimax_bai.policies import AdaptivePlugIn, FixedFraction, PolicySpec
from minimax_bai.regret import (
    max_regret_at_neyman,
    regret_closed_form,
    regret_monte_carlo,
)

PHI_MINUS_HALF = 0.3085375387259869
ETA_STAR_11 = 1.5035830493871289
V_STAR_11 = 0.3399424149598073
V_STAR_21 = 0.5099136224397110


class TestClosedForm:
    def test_neyman_unit_example(self):
        env = Environment(1.0, 0.0, 1.0, 1.0)
        assert regret_closed_form(0.5, 0.0, env) == pytest.approx(PHI_MINUS_HALF, abs=1e-12)

    def test_zero_gap(self):
        env = Environment(0.7, 0.7, 1.0, 1.0)
        assert regret_closed_form(0.3, 0.1, env) == 0.0

    def test_mirror_example(self):
        env = Environment(0.0, 1.0, 1.0, 1.0)
        assert regret_closed_form(0.5, 0.0, env) == pytest.approx(PHI_MINUS_HALF, abs=1e-12)

    def test_scale_equivariance(self):
        gen = np.random.default_rng(8)
        for _ in range(20):
            gamma = gen.uniform(0.1, 0.9)
            c = gen.uniform(-1.0, 1.0)
            mu1, mu0 = gen.normal(size=2)
            s1, s0 = gen.uniform(0.3, 2.0, size=2)
            k = gen.uniform(0.2, 5.0)
            base = regret_closed_form(gamma, c, Environment(mu1, mu0, s1, s0))
            scaled = regret_closed_form(gamma, c, Environment(k * mu1, k * mu0, k * s1, k * s0))
            assert scaled == pytest.approx(k * base, rel=1e-12, abs=1e-300)


class TestMonteCarlo:
    def test_matches_closed_form_at_neyman(self):
        env = Environment(1.0, 0.0, 1.0, 1.0)
        policy = PolicySpec(FixedFraction(0.5))
        est = regret_monte_carlo(policy, env, 100_000, master_seed=31)
        assert abs(est.mean - PHI_MINUS_HALF) <= 3.0 * est.std_error

    def test_zero_gap_exact_zero(self):
        env = Environment(0.4, 0.4, 1.0, 2.0)
        est = regret_monte_carlo(PolicySpec(FixedFraction(0.5)), env, 5000, master_seed=1)
        assert est.mean == 0.0 and est.std_error == 0.0

    def test_deterministic(self):
        env = Environment(0.5, -0.2, 1.0, 1.5)
        policy = PolicySpec(FixedFraction(0.4), threshold_c=0.1)
        a = regret_monte_carlo(policy, env, 20_000, master_seed=17)
        b = regret_monte_carlo(policy, env, 20_000, master_seed=17)
        assert a == b

    def test_thread_invariance(self):
        env = Environment(0.5, -0.2, 1.0, 1.5)
        policy = PolicySpec(FixedFraction(0.4))
        a = regret_monte_carlo(policy, env, 20_000, master_seed=17, threads=1)
        b = regret_monte_carlo(policy, env, 20_000, master_seed=17, threads=4)
        assert a == b

    def test_adaptive_policy_uses_path_simulator(self):
        env = Environment(1.0, 0.0, 1.0, 1.0)
        policy = PolicySpec(AdaptivePlugIn(20))
        est = regret_monte_carlo(policy, env, 4000, master_seed=3, steps=100)
        # adaptive plug-in is near-Neyman here, so regret is near Phi(-0.5)
        assert abs(est.mean - PHI_MINUS_HALF) <= 5.0 * est.std_error

    def test_closed_form_agreement_random_tuples(self):
        gen = np.random.default_rng(1234)
        for _ in range(20):
            gamma = gen.uniform(0.2, 0.8)
            c = gen.uniform(-0.5, 0.5)
            mid = gen.uniform(-1.0, 1.0)
            gap = gen.uniform(0.2, 1.5) * (1 if gen.random() < 0.5 else -1)
            s1, s0 = gen.uniform(0.5, 2.0, size=2)
            env = Environment(mid + gap / 2.0, mid - gap / 2.0, s1, s0)
            expected = regret_closed_form(gamma, c, env)
            est = regret_monte_carlo(PolicySpec(FixedFraction(gamma), c), env,
                                     10_000, master_seed=int(gen.integers(2 ** 32)))
            assert abs(est.mean - expected) <= 3.0 * est.std_error

    def test_low_replication_flag(self):
        env = Environment(1.0, 0.0, 1.0, 1.0)
        est = regret_monte_carlo(PolicySpec(FixedFraction(0.5)), env, 500, master_seed=0)
        assert est.low_replications
        est = regret_monte_carlo(PolicySpec(FixedFraction(0.5)), env, 2000, master_seed=0)
        assert not est.low_replications

    def test_replications_validated(self):
        env = Environment(1.0, 0.0, 1.0, 1.0)
        with pytest.raises(ValueError):
            regret_monte_carlo(PolicySpec(FixedFraction(0.5)), env, 1, master_seed=0)


class TestMaxRegretAtNeyman:
    def test_symmetric_unit_case(self):
        res = max_regret_at_neyman(0.0, 1.0, 1.0)
        assert res.value == pytest.approx(V_STAR_11, abs=1e-8)
        assert res.argmax_delta == pytest.approx(ETA_STAR_11, abs=1e-6)
        assert res.side == "plus"

    def test_matches_v_star(self):
        for s1, s0 in [(1.0, 1.0), (2.0, 1.0), (0.3, 0.7), (1.0, 5.0)]:
            res = max_regret_at_neyman(0.0, s1, s0)
            assert abs(res.value - v_star(s1, s0)) <= 1e-8

    def test_nonzero_threshold_strictly_worse(self):
        base = max_regret_at_neyman(0.0, 1.0, 1.0).value
        assert max_regret_at_neyman(0.5, 1.0, 1.0).value > base

    def test_scaled_case(self):
        res = max_regret_at_neyman(0.0, 2.0, 1.0)
        assert res.value == pytest.approx(V_STAR_21, abs=1e-8)
        assert res.argmax_delta == pytest.approx(3.0 * 0.7517915246935644, abs=1e-6)

    def test_zero_threshold_minimizes_over_grid(self):
        values = {c: max_regret_at_neyman(c, 1.0, 1.0).value
                  for c in (-1.0, -0.5, 0.0, 0.5, 1.0)}
        assert min(values, key=values.get) == 0.0

    def test_side_tracks_sign_of_threshold(self):
        assert max_regret_at_neyman(0.4, 1.0, 1.0).side == "plus"
        assert max_regret_at_neyman(-0.4, 1.0, 1.0).side == "minus"

    def test_domain_error(self):
        with pytest.raises(ValueError):
            max_regret_at_neyman(0.0, 0.0, 1.0)
