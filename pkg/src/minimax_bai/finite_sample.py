"""Discrete n-period experiments under local mean perturbations.

Arm ``a`` pays out with mean ``h_a / sqrt(n)``: Gaussian with a fixed base
standard deviation, or Bernoulli around base rate 1/2 (so the base standard
deviation is 1/2; outcomes are centered by subtracting 1/2 before summing so
the threshold rule applies unchanged).  Reported regret is scaled by
``sqrt(n)``, which in these units equals ``max(h1-h0, 0) - (h1-h0)*decision``
per replication.

Allocation is deterministic: a fixed-fraction rule samples arm 1 in period
``i`` whenever the running count satisfies ``q1/i < gamma``.  The same
rounding drives the two-stage rule (after its equal-split pilot pins the
plug-in fraction) and the adaptive rule (which re-targets every ``batch``
observations).

Draw-order contract: every period consumes exactly one standard normal (or
uniform) per replication, whichever arm is sampled, so runs with the same
master seed are paired draw-for-draw across policies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .policies import (
    AdaptivePlugIn,
    PolicySpec,
    TwoStage,
    constant_fraction,
)
from .regret import LOW_REPLICATION_THRESHOLD, RegretEstimate
from .rng import combine_mean_se, derive_seed, map_blocks

__all__ = [
    "LocalEnvironment",
    "TrialConfig",
    "CurvePoint",
    "CurveResult",
    "estimate_sigmas",
    "run_trial",
    "two_stage_trial",
    "scaled_regret_curve",
]

_FAMILIES = ("gaussian", "bernoulli")


@dataclass(frozen=True)
class LocalEnvironment:
    """Local parameters of the two arms: arm-``a`` mean is ``h_a/sqrt(n)``."""

    family: str
    h1: float
    h0: float
    base_sigma1: float = 1.0
    base_sigma0: float = 1.0

    def __post_init__(self) -> None:
        if self.family not in _FAMILIES:
            raise ValueError(f"family must be one of {_FAMILIES}, got {self.family!r}")
        if self.family == "gaussian" and not (self.base_sigma1 > 0.0
                                              and self.base_sigma0 > 0.0):
            raise ValueError("gaussian base standard deviations must be positive")

    def sigmas(self) -> tuple[float, float]:
        """Arm standard deviations at the reference parameter."""
        if self.family == "bernoulli":
            return 0.5, 0.5
        return self.base_sigma1, self.base_sigma0


@dataclass(frozen=True)
class TrialConfig:
    """Budget, policy, and Monte Carlo settings for one experiment design."""

    n: int
    policy: PolicySpec
    replications: int
    master_seed: int = 0

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"budget n must be >= 2, got {self.n!r}")
        if self.replications < 2:
            raise ValueError("replications must be >= 2")


def estimate_sigmas(pilot_outcomes_arm1, pilot_outcomes_arm0) -> tuple[float, float]:
    """Sample standard deviations (ddof=1) of the two pilot outcome sequences.

    A length-1 sequence yields 0, which downstream triggers the equal-split
    fallback.  Empty sequences are a usage error.
    """
    a1 = np.asarray(pilot_outcomes_arm1, dtype=float)
    a0 = np.asarray(pilot_outcomes_arm0, dtype=float)
    if a1.size == 0 or a0.size == 0:
        raise ValueError("pilot outcome sequences must be nonempty")
    s1 = float(np.std(a1, ddof=1)) if a1.size > 1 else 0.0
    s0 = float(np.std(a0, ddof=1)) if a0.size > 1 else 0.0
    return s1, s0


def _pilot_length(n: int, rho: float) -> int:
    if n ** rho < 4.0:
        raise ValueError(
            f"two-stage pilot too small: n**rho = {n ** rho:.3g} < 4 "
            f"(n={n}, rho={rho})")
    return min(int(math.ceil(n ** rho)), n)


class _VarianceTracker:
    """Running per-arm count/sum/sum-of-squares for plug-in estimates."""

    def __init__(self, count: int):
        self.k1 = np.zeros(count)
        self.k0 = np.zeros(count)
        self.t1 = np.zeros(count)
        self.t0 = np.zeros(count)
        self.s1 = np.zeros(count)
        self.s0 = np.zeros(count)

    def add(self, mask1: np.ndarray, y: np.ndarray) -> None:
        y1 = np.where(mask1, y, 0.0)
        y0 = np.where(mask1, 0.0, y)
        self.k1 += mask1
        self.k0 += ~mask1
        self.t1 += y1
        self.t0 += y0
        self.s1 += y1 * y1
        self.s0 += y0 * y0

    def sigma_hats(self) -> tuple[np.ndarray, np.ndarray]:
        return (_sample_sd(self.k1, self.t1, self.s1),
                _sample_sd(self.k0, self.t0, self.s0))


def _sample_sd(k: np.ndarray, t: np.ndarray, s: np.ndarray) -> np.ndarray:
    denom = np.maximum(k - 1.0, 1.0)
    var = np.maximum(0.0, (s - t * t / np.maximum(k, 1.0)) / denom)
    return np.where(k >= 2, np.sqrt(var), 0.0)


def _trial_block(env: LocalEnvironment, n: int, policy: PolicySpec,
                 gen: np.random.Generator, count: int) -> tuple[float, float, int]:
    """Simulate ``count`` replications; return (sum, sumsq, count) of the
    per-replication scaled regret."""
    sigma1, sigma0 = env.sigmas()
    rule = policy.sampling
    gaussian = env.family == "gaussian"
    sqrt_n = math.sqrt(n)
    mu1 = env.h1 / sqrt_n
    mu0 = env.h0 / sqrt_n

    if gaussian:
        draw = gen.standard_normal
    else:
        p1 = 0.5 + mu1
        p0 = 0.5 + mu0
        draw = gen.random

    fixed_gamma = constant_fraction(rule)
    pilot_end = None
    batch = None
    if isinstance(rule, TwoStage):
        pilot_end = _pilot_length(n, rule.rho)
    elif isinstance(rule, AdaptivePlugIn):
        batch = rule.batch

    gamma_t: np.ndarray | float
    gamma_t = fixed_gamma if fixed_gamma is not None else 0.5
    tracker = None if fixed_gamma is not None else _VarianceTracker(count)

    # Per-replication decision sigmas; the two-stage rule replaces them with
    # its pilot estimates, everything else uses the known values.
    dec_sigma1: np.ndarray | float = sigma1
    dec_sigma0: np.ndarray | float = sigma0

    q1 = np.zeros(count) if fixed_gamma is None else 0
    t1 = np.zeros(count)
    t0 = np.zeros(count)

    for i in range(1, n + 1):
        if pilot_end is not None and i == pilot_end + 1:
            s1_hat, s0_hat = tracker.sigma_hats()
            ok = (s1_hat > 0.0) & (s0_hat > 0.0)
            total = np.where(ok, s1_hat + s0_hat, 1.0)
            gamma_t = np.where(ok, s1_hat / total, 0.5)
            dec_sigma1 = np.where(ok, s1_hat, 1.0)
            dec_sigma0 = np.where(ok, s0_hat, 1.0)
        elif batch is not None and i > batch and (i - 1) % batch == 0:
            s1_hat, s0_hat = tracker.sigma_hats()
            ok = (s1_hat > 0.0) & (s0_hat > 0.0)
            total = np.where(ok, s1_hat + s0_hat, 1.0)
            gamma_t = np.where(ok, s1_hat / total, 0.5)

        mask1 = q1 / i < gamma_t
        z = draw(count)
        if gaussian:
            y = np.where(mask1, mu1 + sigma1 * z, mu0 + sigma0 * z)
        else:
            y = np.where(z < np.where(mask1, p1, p0), 0.5, -0.5)
        t1 += np.where(mask1, y, 0.0)
        t0 += np.where(mask1, 0.0, y)
        q1 = q1 + mask1
        if tracker is not None:
            tracker.add(mask1, y)

    x1 = t1 / sqrt_n
    x0 = t0 / sqrt_n
    decide = x1 / dec_sigma1 - x0 / dec_sigma0 >= policy.threshold_c
    gap = env.h1 - env.h0
    values = max(gap, 0.0) - gap * decide
    return float(values.sum()), float((values * values).sum()), int(count)


def run_trial(env: LocalEnvironment, config: TrialConfig,
              threads: int = 1) -> RegretEstimate:
    """Monte Carlo estimate of the sqrt(n)-scaled regret of a trial design."""
    _validate_bernoulli_range(env, config.n)
    if isinstance(config.policy.sampling, TwoStage):
        _pilot_length(config.n, config.policy.sampling.rho)
    parts = map_blocks(
        config.replications, config.master_seed,
        lambda gen, index, count: _trial_block(env, config.n, config.policy,
                                               gen, count),
        threads=threads)
    mean, se, count = combine_mean_se(parts)
    return RegretEstimate(mean=mean, std_error=se, replications=count,
                          low_replications=count < LOW_REPLICATION_THRESHOLD)


def two_stage_trial(env: LocalEnvironment, n: int, rho: float,
                    replications: int, master_seed: int = 0,
                    threshold_c: float = 0.0, threads: int = 1) -> RegretEstimate:
    """Two-stage procedure: equal-split pilot of ``ceil(n**rho)`` periods,
    plug-in Neyman allocation afterwards, implementation rule using the pilot
    standard deviation estimates."""
    config = TrialConfig(n=n, policy=PolicySpec(TwoStage(rho), threshold_c),
                         replications=replications, master_seed=master_seed)
    return run_trial(env, config, threads=threads)


def _validate_bernoulli_range(env: LocalEnvironment, n: int) -> None:
    if env.family != "bernoulli":
        return
    sqrt_n = math.sqrt(n)
    for h in (env.h1, env.h0):
        if abs(h) / sqrt_n > 0.5:
            raise ValueError(
                f"bernoulli success probability out of range: |h|/sqrt(n) = "
                f"{abs(h) / sqrt_n:.3g} > 1/2 (h={h}, n={n})")


@dataclass(frozen=True)
class CurvePoint:
    """One (budget, gap) cell of a scaled-regret table."""

    n: int
    gap: float
    h1: float
    h0: float
    estimate: RegretEstimate


@dataclass(frozen=True)
class CurveResult:
    """Scaled-regret table over (n, gap) plus the per-n grid supremum."""

    points: tuple[CurvePoint, ...]
    sup_by_n: dict[int, float]


def scaled_regret_curve(family: str, policy: PolicySpec, gap_grid, n_grid,
                        replications: int, master_seed: int = 0,
                        base_sigma1: float = 1.0, base_sigma0: float = 1.0,
                        threads: int = 1) -> CurveResult:
    """Scaled regret over the Cartesian (n, gap) grid.

    Gaps are mapped to local parameters ``(h1, h0) = (gap, 0)``: one arm sits
    at the reference and the other is displaced by the gap, so allocation
    imbalances show up in the grid supremum (a symmetric split would hide
    them).  Each cell gets its own seed derived from ``(master_seed, i_n,
    i_gap)``.
    """
    gaps = [float(g) for g in gap_grid]
    ns = [int(n) for n in n_grid]
    if not gaps or not ns:
        raise ValueError("gap_grid and n_grid must be nonempty")
    points = []
    sup_by_n: dict[int, float] = {}
    for i_n, n in enumerate(ns):
        best = -math.inf
        for i_gap, gap in enumerate(gaps):
            env = LocalEnvironment(family=family, h1=gap, h0=0.0,
                                   base_sigma1=base_sigma1,
                                   base_sigma0=base_sigma0)
            config = TrialConfig(n=n, policy=policy, replications=replications,
                                 master_seed=derive_seed(master_seed, i_n, i_gap))
            est = run_trial(env, config, threads=threads)
            points.append(CurvePoint(n=n, gap=gap, h1=gap, h0=0.0, estimate=est))
            best = max(best, est.mean)
        sup_by_n[n] = best
    return CurveResult(points=tuple(points), sup_by_n=sup_by_n)
