import numpy as np
import pytest

from minimax_bai.core import solve_delta_star, v_star
from minimax_bai.game import (
    agent_best_response,
    bayes_regret_closed_form,
    deviation_measure,
    divergence_probe,
    nature_best_response,
    solve_equilibrium,
)
from minimax_bai.policies import (
    TwoPointPrior,
    indifference_prior,
    neyman_gamma,
)

DELTA_STAR = 0.7517915246935644
V_STAR_11 = 0.3399424149598073
LN_ONE_THIRD = -1.0986122886681098


class TestDeviationMeasure:
    def test_zero_exactly_at_neyman_symmetric(self):
        assert deviation_measure(0.5, 1.0, 1.0) == 0.0

    def test_sign(self):
        assert deviation_measure(0.6, 1.0, 1.0) > 0.0
        assert deviation_measure(0.4, 1.0, 1.0) < 0.0


class TestNatureBestResponse:
    def test_bounded_at_neyman(self):
        res = nature_best_response(0.5, 0.0, 1.0, 1.0)
        assert res.side == "theta1"
        assert res.gap == pytest.approx(2.0 * DELTA_STAR, abs=1e-6)
        assert res.value == pytest.approx(V_STAR_11, abs=1e-8)

    def test_branches_tie_at_zero_threshold(self):
        res = nature_best_response(0.5, 0.0, 1.0, 1.0)
        v1, v0 = res.branch_values
        assert v1 == v0

    def test_unbounded_off_neyman(self):
        res = nature_best_response(0.6, 0.0, 1.0, 1.0)
        assert res.side == "unbounded"
        assert res.probe is not None
        assert list(res.probe) == sorted(res.probe)
        assert res.value == res.probe[-1]


class TestDivergenceProbe:
    @pytest.mark.parametrize("gamma", [0.2, 0.4, 0.6, 0.8])
    def test_strictly_increasing_and_exceeds_value(self, gamma):
        seq = divergence_probe(gamma, 0.0, 1.0, 1.0, levels=5)
        assert all(b > a for a, b in zip(seq, seq[1:]))
        assert seq[-1] > 2.0 * V_STAR_11

    def test_rejected_at_neyman(self):
        with pytest.raises(ValueError):
            divergence_probe(0.5, 0.0, 1.0, 1.0, levels=5)
        # the float Neyman fraction for unequal scales is also detected
        with pytest.raises(ValueError):
            divergence_probe(neyman_gamma(2.0, 1.0), 0.0, 2.0, 1.0, levels=5)

    def test_levels_validated(self):
        with pytest.raises(ValueError):
            divergence_probe(0.6, 0.0, 1.0, 1.0, levels=0)

    def test_bounded_construction_at_neyman_fraction(self):
        # evaluated at the Neyman fraction, the same construction stays below
        # the worst-case value (so the probe would certify nothing there)
        from minimax_bai.diffusion import Environment
        from minimax_bai.regret import max_regret_at_neyman, regret_closed_form

        cap = max_regret_at_neyman(0.0, 1.0, 1.0).value
        for k in range(1, 6):
            env = Environment(-10.0 * k, -10.0 * k - k, 1.0, 1.0)
            assert regret_closed_form(0.5, 0.0, env) <= cap + 1e-12


class TestAgentBestResponse:
    def test_flat_in_gamma_under_indifference(self):
        delta = 2.0 * solve_delta_star().delta_star
        prior = indifference_prior(delta, 1.0, 1.0, m1=0.5)
        res = agent_best_response(prior, 1.0, 1.0, gamma_grid=(0.3, 0.5, 0.7),
                                  c_grid=tuple(np.linspace(-1, 1, 21)),
                                  replications=2000, seed=0)
        assert res.flatness <= 1e-10
        assert res.c_opt == 0.0
        assert res.c_grid_argmin == 0.0
        for mc, se, cf in zip(res.bayes_regret_mc, res.bayes_regret_mc_se,
                              res.bayes_regret):
            assert abs(mc - cf) <= 4.0 * se

    def test_c_opt_for_asymmetric_mass(self):
        prior = indifference_prior(1.0, 1.0, 1.0, m1=0.75)
        res = agent_best_response(prior, 1.0, 1.0, gamma_grid=(0.5,),
                                  c_grid=(-1.5, -1.0986, 0.0, 1.0),
                                  replications=1000, seed=0)
        assert res.c_opt == pytest.approx(LN_ONE_THIRD, abs=1e-12)
        assert res.c_grid_argmin == pytest.approx(-1.0986, abs=1e-12)

    def test_non_indifference_prior_rejected(self):
        prior = TwoPointPrior((1.0, -0.4), (-1.0, 0.4), 0.5)
        with pytest.raises(ValueError):
            agent_best_response(prior, 1.0, 2.0, gamma_grid=(0.5,), c_grid=(0.0,),
                                replications=100, seed=0)

    def test_empty_grid_rejected(self):
        prior = indifference_prior(1.0, 1.0, 1.0)
        with pytest.raises(ValueError):
            agent_best_response(prior, 1.0, 1.0, gamma_grid=(), c_grid=(0.0,),
                                replications=100, seed=0)


class TestSolveEquilibrium:
    @pytest.mark.parametrize("s1,s0", [(1.0, 1.0), (2.0, 1.0), (1.0, 5.0), (0.3, 0.7)])
    def test_recovers_closed_forms(self, s1, s0):
        sol = solve_equilibrium(s1, s0, tolerance=1e-8)
        assert abs(sol.gamma_star - neyman_gamma(s1, s0)) <= 1e-6
        assert abs(sol.c_star) <= 1e-6
        assert abs(sol.delta_prior_star - 2.0 * solve_delta_star(1e-9).delta_star) <= 1e-6
        assert abs(sol.v_star - v_star(s1, s0)) <= 1e-8
        assert sol.exploitability <= 1e-8

    def test_least_favorable_prior_shape(self):
        sol = solve_equilibrium(2.0, 1.0)
        a1, b1 = sol.lfp.state1
        a0, b0 = sol.lfp.state0
        assert a1 == pytest.approx(2.0 * sol.delta_prior_star / 2.0, rel=1e-12)
        assert b1 == pytest.approx(-1.0 * sol.delta_prior_star / 2.0, rel=1e-12)
        assert (a0, b0) == (-a1, -b1)
        assert sol.lfp.m1 == 0.5
        assert sol.eta_star == pytest.approx(3.0 * DELTA_STAR, abs=1e-6)

    def test_residuals_small(self):
        sol = solve_equilibrium(1.0, 1.0)
        assert sol.residuals["boundedness"] <= 1e-8
        assert sol.residuals["first_order"] <= 1e-6
        assert sol.residuals["branch_asymmetry"] <= 1e-9

    def test_nash_agent_side(self):
        sol = solve_equilibrium(1.0, 1.0)
        values = [bayes_regret_closed_form(sol.lfp, g, 0.0, 1.0, 1.0)
                  for g in np.linspace(0.05, 0.95, 19)]
        assert max(values) - min(values) <= 1e-10
        by_c = {c: bayes_regret_closed_form(sol.lfp, 0.5, c, 1.0, 1.0)
                for c in np.linspace(-1.0, 1.0, 21)}
        assert min(by_c, key=by_c.get) == 0.0

    def test_nash_nature_side(self):
        from minimax_bai.regret import max_regret_at_neyman

        sol = solve_equilibrium(1.0, 1.0)
        res = max_regret_at_neyman(sol.c_star, 1.0, 1.0)
        assert res.argmax_delta == pytest.approx(sol.eta_star, abs=1e-6)
        assert res.value == pytest.approx(sol.v_star, abs=1e-10)

    def test_monotone_deviation_penalty(self):
        sol = solve_equilibrium(1.0, 1.0)
        for offset in (-0.1, -0.05, 0.05, 0.1):
            seq = divergence_probe(sol.gamma_star + offset, sol.c_star, 1.0, 1.0, 5)
            assert all(b > a for a, b in zip(seq, seq[1:]))
            assert seq[-1] > sol.v_star

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            solve_equilibrium(0.0, 1.0)
        with pytest.raises(ValueError):
            solve_equilibrium(1.0, 1.0, tolerance=0.0)
