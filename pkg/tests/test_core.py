import math

import numpy as np
import pytest

from minimax_bai.core import (
    equilibrium_constants,
    golden_section_max,
    solve_delta_star,
    std_normal_cdf,
    std_normal_pdf,
    v_star,
)

from _oracles import normal_cdf_oracle

# Frozen via the independent series/continued-fraction oracle (and mpmath).
DELTA_STAR = 0.7517915246935644
G_STAR = 0.1699712074799037
V_STAR_11 = 0.3399424149598073
V_STAR_21 = 0.5099136224397110


class TestStdNormalCdf:
    def test_zero_is_exactly_half(self):
        assert std_normal_cdf(0.0) == 0.5

    def test_frozen_examples(self):
        assert std_normal_cdf(-0.5) == pytest.approx(0.308538, abs=1e-6)
        assert std_normal_cdf(1.959964) == pytest.approx(0.975000, abs=1e-6)

    def test_absolute_error_vs_oracle(self):
        xs = np.concatenate([
            np.linspace(-8.0, 8.0, 4001),
            np.linspace(-37.0, -8.0, 200),
            np.linspace(8.0, 37.0, 200),
        ])
        worst = max(abs(std_normal_cdf(float(x)) - normal_cdf_oracle(float(x)))
                    for x in xs)
        assert worst <= 1e-12

    def test_oracle_seam_consistency(self):
        # The oracle switches method at |x| = 7; both must agree around there.
        from _oracles import _series_factor, _upper_tail, normal_pdf
        for x in (6.5, 7.0, 7.5):
            series_val = 0.5 + normal_pdf(x) * _series_factor(x)
            cf_val = 1.0 - _upper_tail(x)
            assert abs(series_val - cf_val) <= 1e-14

    def test_symmetry(self):
        xs = np.linspace(-12.0, 12.0, 2001)
        for x in xs:
            assert abs(std_normal_cdf(float(x)) + std_normal_cdf(float(-x)) - 1.0) <= 1e-14

    def test_monotone(self):
        xs = np.linspace(-10.0, 10.0, 5001)
        vals = std_normal_cdf(xs)
        assert np.all(np.diff(vals) >= 0.0)

    def test_scalar_and_array_agree(self):
        xs = np.linspace(-9.0, 9.0, 301)
        arr = std_normal_cdf(xs)
        for x, v in zip(xs, arr):
            assert std_normal_cdf(float(x)) == pytest.approx(v, abs=2e-16)

    def test_nonfinite_rejected(self):
        for bad in (math.nan, math.inf, -math.inf):
            with pytest.raises(ValueError):
                std_normal_cdf(bad)
        with pytest.raises(ValueError):
            std_normal_cdf(np.array([0.0, math.nan]))

    def test_array_shape_preserved(self):
        x = np.zeros((3, 2))
        assert std_normal_cdf(x).shape == (3, 2)


class TestDeltaStar:
    def test_value_and_objective(self):
        sol = solve_delta_star(1e-9)
        assert sol.delta_star == pytest.approx(DELTA_STAR, abs=1e-6)
        assert sol.objective_value == pytest.approx(G_STAR, abs=1e-8)

    def test_first_order_condition(self):
        sol = solve_delta_star(1e-9)
        residual = std_normal_cdf(-sol.delta_star) - sol.delta_star * std_normal_pdf(sol.delta_star)
        assert abs(residual) <= 1e-8

    def test_g_zero_at_origin(self):
        assert 0.0 * std_normal_cdf(0.0) == 0.0

    def test_local_maximality(self):
        sol = solve_delta_star(1e-9)

        def g(d):
            return d * std_normal_cdf(-d)

        assert g(sol.delta_star) > g(sol.delta_star + 0.01)
        assert g(sol.delta_star) > g(sol.delta_star - 0.01)

    def test_grid_max_within_one_step(self):
        grid = np.linspace(0.0, 5.0, 10_000)
        vals = grid * std_normal_cdf(-grid)
        best = grid[np.argmax(vals)]
        step = grid[1] - grid[0]
        assert abs(best - solve_delta_star(1e-9).delta_star) <= step

    def test_bad_tolerance(self):
        with pytest.raises(ValueError):
            solve_delta_star(0.0)


class TestVStar:
    def test_values(self):
        assert v_star(1.0, 1.0) == pytest.approx(V_STAR_11, abs=1e-6)
        assert v_star(2.0, 1.0) == pytest.approx(V_STAR_21, abs=1e-6)

    def test_homogeneous_degree_one(self):
        assert v_star(2.0 * 1.0, 2.0 * 1.0) == pytest.approx(2.0 * v_star(1.0, 1.0), rel=1e-14)
        assert v_star(2.0 * 0.7, 2.0 * 1.3) == pytest.approx(2.0 * v_star(0.7, 1.3), rel=1e-14)

    def test_symmetric(self):
        assert v_star(2.0, 1.0) == v_star(1.0, 2.0)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            v_star(0.0, 1.0)
        with pytest.raises(ValueError):
            v_star(1.0, -2.0)


class TestEquilibriumConstants:
    def test_exact_derived_fields(self):
        for s1, s0 in [(1.0, 1.0), (2.0, 1.0), (0.3, 0.7)]:
            ec = equilibrium_constants(s1, s0)
            assert ec.delta_prior == 2.0 * ec.delta_star
            assert ec.eta_star == (s1 + s0) * ec.delta_star
            assert ec.v_star == (s1 + s0) * ec.objective_value
            assert ec.sigma1 == s1 and ec.sigma0 == s0

    def test_against_frozen(self):
        ec = equilibrium_constants(1.0, 1.0)
        assert ec.delta_prior == pytest.approx(2 * DELTA_STAR, abs=2e-6)
        assert ec.v_star == pytest.approx(V_STAR_11, abs=1e-8)


def test_golden_section_max_quadratic():
    # value comparisons cannot localize a smooth peak beyond ~sqrt(eps)
    x, fx = golden_section_max(lambda t: -(t - 1.3) ** 2 + 2.0, -5.0, 5.0, 1e-10)
    assert x == pytest.approx(1.3, abs=1e-7)
    assert fx == pytest.approx(2.0, abs=1e-12)


def test_golden_section_max_kinked():
    # a kink is localized to the requested tolerance
    x, fx = golden_section_max(lambda t: -abs(t - 0.25), -1.0, 1.0, 1e-10)
    assert x == pytest.approx(0.25, abs=1e-9)
    assert fx == pytest.approx(0.0, abs=1e-9)
