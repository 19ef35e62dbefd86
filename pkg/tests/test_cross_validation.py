"""Cross-checks against scipy where it is installed.

These are belt-and-braces comparisons with a second independent
implementation; the package itself never imports scipy, and the suite stays
green without it.
"""

import numpy as np
import pytest

scipy_special = pytest.importorskip("scipy.special")
scipy_stats = pytest.importorskip("scipy.stats")

from minimax_bai.core import solve_delta_star, std_normal_cdf
from minimax_bai.diffusion import Environment, exact_terminal_samples
from minimax_bai.ks import ks_critical_value, ks_one_sample, ks_two_sample


def test_cdf_matches_scipy_ndtr():
    xs = np.concatenate([np.linspace(-37.0, 37.0, 20_001),
                         np.linspace(-1e-3, 1e-3, 101)])
    ours = std_normal_cdf(xs)
    theirs = scipy_special.ndtr(xs)
    assert np.max(np.abs(ours - theirs)) <= 1e-14


def test_delta_star_matches_scipy_brentq():
    from scipy.optimize import brentq

    root = brentq(lambda d: scipy_special.ndtr(-d)
                  - d * np.exp(-0.5 * d * d) / np.sqrt(2 * np.pi),
                  0.1, 3.0, xtol=1e-12)
    assert solve_delta_star(1e-10).delta_star == pytest.approx(root, abs=1e-8)


def test_two_sample_ks_statistic_matches_scipy():
    gen = np.random.default_rng(3)
    a = gen.normal(size=400)
    b = gen.normal(0.2, 1.1, size=300)
    ours = ks_two_sample(a, b, alpha=0.01).statistic
    theirs = scipy_stats.ks_2samp(a, b, method="asymp").statistic
    assert ours == pytest.approx(theirs, abs=1e-12)


def test_one_sample_ks_statistic_matches_scipy():
    gen = np.random.default_rng(4)
    x = gen.normal(size=500)
    ours = ks_one_sample(x, lambda t: std_normal_cdf(t), alpha=0.01).statistic
    theirs = scipy_stats.kstest(x, "norm").statistic
    assert ours == pytest.approx(theirs, abs=1e-12)


def test_ks_critical_value_consistent_with_kstwobign():
    # the asymptotic critical value is the kstwobign quantile scaled by 1/sqrt(n)
    for alpha in (0.01, 0.05):
        c = scipy_stats.kstwobign.ppf(1.0 - alpha)
        assert ks_critical_value(alpha, 10_000) == pytest.approx(
            c / np.sqrt(10_000), rel=5e-4)


def test_exact_sampler_law_vs_scipy_normal():
    env = Environment(mu1=0.8, mu0=-0.3, sigma1=1.4, sigma0=0.7)
    batch = exact_terminal_samples(env, 0.3, 20_000, master_seed=8)
    res = scipy_stats.kstest(batch.x1, "norm",
                             args=(0.8 * 0.3, 1.4 * np.sqrt(0.3)))
    assert res.pvalue > 0.01
    res = scipy_stats.kstest(batch.x0, "norm",
                             args=(-0.3 * 0.7, 0.7 * np.sqrt(0.7)))
    assert res.pvalue > 0.01
