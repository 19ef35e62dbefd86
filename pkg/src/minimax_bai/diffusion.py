"""Continuous-time experiment simulator and the likelihood-ratio machinery.

The state ``(x1, x0, q1, q0)`` evolves on ``t in [0, 1]``: per Euler step of
size ``h = 1/steps``, with ``p`` the current arm-1 sampling fraction,

    x1 += mu1*p*h + sigma1*sqrt(p*h)*Z1
    x0 += mu0*(1-p)*h + sigma0*sqrt((1-p)*h)*Z0
    q1 += p*h;  q0 += (1-p)*h

with independent standard normal draws ``Z1, Z0``.  Both arms receive a
scaled Gaussian increment each step because the model itself is fractional;
no binary arm choice is simulated.  For state-measurable sampling rules this
reproduces the continuous-time law exactly at the grid times.

Draw-order contract: each step consumes ``standard_normal((2, ...))`` with
row 0 feeding arm 1 and row 1 feeding arm 0.  Draws are consumed even when a
fraction is 0, so streams stay aligned across policies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .policies import (
    AdaptivePlugIn,
    EqualSplit,
    FixedFraction,
    PolicySpec,
    TwoPointPrior,
    TwoStage,
    constant_fraction,
)
from .rng import child_generator, map_blocks

__all__ = [
    "Environment",
    "ExperimentState",
    "PathConfig",
    "TerminalBatch",
    "simulate_path",
    "simulate_paths",
    "exact_terminal_sample",
    "exact_terminal_samples",
    "log_likelihood_ratio",
    "posterior_belief",
]


@dataclass(frozen=True)
class Environment:
    """True mean rewards and standard deviations of the two arms."""

    mu1: float
    mu0: float
    sigma1: float
    sigma0: float

    def __post_init__(self) -> None:
        if not (self.sigma1 > 0.0 and self.sigma0 > 0.0):
            raise ValueError("standard deviations must be positive, got "
                             f"sigma1={self.sigma1!r}, sigma0={self.sigma0!r}")


@dataclass(frozen=True)
class ExperimentState:
    """Cumulative outcomes and sampling times at time ``t``."""

    t: float
    x1: float
    x0: float
    q1: float
    q0: float


@dataclass(frozen=True)
class PathConfig:
    """Euler grid size and seed for one simulated path."""

    steps: int = 1000
    seed: int = 0

    def __post_init__(self) -> None:
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps!r}")


@dataclass(frozen=True)
class TerminalBatch:
    """Vector of terminal states, one entry per simulated path."""

    x1: np.ndarray
    x0: np.ndarray
    q1: np.ndarray
    q0: np.ndarray


class _FractionDriver:
    """Per-step arm-1 sampling fraction for a batch of paths.

    Adaptive rules observe the state only at grid times.  The plug-in rule
    estimates each arm's volatility from the realized quadratic variation of
    its outcome process (sum of squared increments over sampling time) and
    re-targets ``sig1_hat/(sig1_hat+sig0_hat)`` every ``batch`` steps; until
    both estimates are positive it falls back to the equal split.
    """

    def __init__(self, policy: PolicySpec, n: int):
        rule = policy.sampling
        if isinstance(rule, TwoStage):
            raise ValueError("two-stage sampling is a discrete-budget rule; "
                             "the continuous-time simulator does not support it")
        self._gamma = constant_fraction(rule)
        self._batch = rule.batch if isinstance(rule, AdaptivePlugIn) else None
        self._n = n
        self._p = np.full(n, 0.5 if self._gamma is None else self._gamma)
        self._ssq1 = np.zeros(n)
        self._ssq0 = np.zeros(n)

    def fraction(self, step: int) -> np.ndarray:
        if self._batch is not None and step > 0 and step % self._batch == 0:
            self._retarget()
        return self._p

    def observe(self, dx1: np.ndarray, dx0: np.ndarray) -> None:
        if self._batch is not None:
            self._ssq1 += dx1 * dx1
            self._ssq0 += dx0 * dx0

    def _retarget(self) -> None:
        # q1+q0 telescopes to the elapsed time regardless of the path, so the
        # realized sampling times are reconstructed from the fractions seen so
        # far; they are tracked by the caller and passed in via closure-free
        # state below.
        q1, q0 = self._q1, self._q0
        with np.errstate(divide="ignore", invalid="ignore"):
            s1 = np.sqrt(np.where(q1 > 0.0, self._ssq1 / np.where(q1 > 0.0, q1, 1.0), 0.0))
            s0 = np.sqrt(np.where(q0 > 0.0, self._ssq0 / np.where(q0 > 0.0, q0, 1.0), 0.0))
        ok = (s1 > 0.0) & (s0 > 0.0)
        total = np.where(ok, s1 + s0, 1.0)
        self._p = np.where(ok, s1 / total, 0.5)

    def set_sampling_times(self, q1: np.ndarray, q0: np.ndarray) -> None:
        self._q1, self._q0 = q1, q0


def _simulate_block(env: Environment, policy: PolicySpec, steps: int,
                    gen: np.random.Generator, count: int) -> TerminalBatch:
    h = 1.0 / steps
    x1 = np.zeros(count)
    x0 = np.zeros(count)
    q1 = np.zeros(count)
    q0 = np.zeros(count)
    driver = _FractionDriver(policy, count)
    for step in range(steps):
        driver.set_sampling_times(q1, q0)
        p = driver.fraction(step)
        z = gen.standard_normal((2, count))
        dx1 = env.mu1 * p * h + env.sigma1 * np.sqrt(p * h) * z[0]
        dx0 = env.mu0 * (1.0 - p) * h + env.sigma0 * np.sqrt((1.0 - p) * h) * z[1]
        x1 += dx1
        x0 += dx0
        q1 += p * h
        q0 += (1.0 - p) * h
        driver.observe(dx1, dx0)
    return TerminalBatch(x1=x1, x0=x0, q1=q1, q0=q0)


def simulate_path(env: Environment, policy: PolicySpec,
                  config: PathConfig) -> ExperimentState:
    """One terminal state from the Euler scheme; bit-for-bit reproducible."""
    gen = child_generator(config.seed)
    batch = _simulate_block(env, policy, config.steps, gen, 1)
    return ExperimentState(t=1.0, x1=float(batch.x1[0]), x0=float(batch.x0[0]),
                           q1=float(batch.q1[0]), q0=float(batch.q0[0]))


def simulate_paths(env: Environment, policy: PolicySpec, n_paths: int,
                   steps: int = 1000, master_seed: int = 0,
                   threads: int = 1) -> TerminalBatch:
    """Terminal states of ``n_paths`` independent paths (block-seeded)."""
    if n_paths < 1:
        raise ValueError("n_paths must be >= 1")
    parts = map_blocks(
        n_paths, master_seed,
        lambda gen, index, count: _simulate_block(env, policy, steps, gen, count),
        threads=threads)
    return TerminalBatch(
        x1=np.concatenate([p.x1 for p in parts]),
        x0=np.concatenate([p.x0 for p in parts]),
        q1=np.concatenate([p.q1 for p in parts]),
        q0=np.concatenate([p.q0 for p in parts]),
    )


def _exact_block(env: Environment, gamma: float,
                 gen: np.random.Generator, count: int) -> TerminalBatch:
    z = gen.standard_normal((2, count))
    x1 = env.mu1 * gamma + env.sigma1 * math.sqrt(gamma) * z[0]
    x0 = env.mu0 * (1.0 - gamma) + env.sigma0 * math.sqrt(1.0 - gamma) * z[1]
    return TerminalBatch(x1=x1, x0=x0,
                         q1=np.full(count, gamma), q0=np.full(count, 1.0 - gamma))


def exact_terminal_sample(env: Environment, gamma: float,
                          seed: int = 0) -> ExperimentState:
    """One exact draw of the terminal state under a constant fraction.

    Valid only for constant sampling fractions, where the terminal law is
    ``x_a ~ Normal(mu_a * p_a, sigma_a^2 * p_a)`` with independent arms.
    """
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must be in [0, 1], got {gamma!r}")
    gen = child_generator(seed)
    batch = _exact_block(env, gamma, gen, 1)
    return ExperimentState(t=1.0, x1=float(batch.x1[0]), x0=float(batch.x0[0]),
                           q1=gamma, q0=1.0 - gamma)


def exact_terminal_samples(env: Environment, gamma: float, n: int,
                           master_seed: int = 0, threads: int = 1) -> TerminalBatch:
    """Vector of exact terminal draws under a constant fraction."""
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must be in [0, 1], got {gamma!r}")
    if n < 1:
        raise ValueError("n must be >= 1")
    parts = map_blocks(
        n, master_seed,
        lambda gen, index, count: _exact_block(env, gamma, gen, count),
        threads=threads)
    return TerminalBatch(
        x1=np.concatenate([p.x1 for p in parts]),
        x0=np.concatenate([p.x0 for p in parts]),
        q1=np.concatenate([p.q1 for p in parts]),
        q0=np.concatenate([p.q0 for p in parts]),
    )


def log_likelihood_ratio(state, prior: TwoPointPrior,
                         sigma1: float, sigma0: float):
    """Log likelihood ratio of state 1 vs state 0 given the observed state.

    ``state`` may be a single ``ExperimentState`` or a ``TerminalBatch``;
    the return type matches (float or ndarray).
    """
    a1, b1 = prior.state1
    a0, b0 = prior.state0
    out = ((a1 - a0) / sigma1 ** 2 * state.x1
           + (b1 - b0) / sigma0 ** 2 * state.x0
           - (a1 ** 2 - a0 ** 2) / (2.0 * sigma1 ** 2) * state.q1
           - (b1 ** 2 - b0 ** 2) / (2.0 * sigma0 ** 2) * state.q0)
    return out


def posterior_belief(log_phi, m1: float):
    """Posterior probability of state 1 given ``log_phi`` and prior mass ``m1``.

    Computed as a logistic in ``log_phi + logit(m1)``; stable for ``|log_phi|``
    up to 700 and beyond (no ``exp`` of a large positive argument).
    """
    if not 0.0 < m1 < 1.0:
        raise ValueError(f"m1 must be in (0, 1), got {m1!r}")
    z = np.atleast_1d(np.asarray(log_phi, dtype=float)) + math.log(m1 / (1.0 - m1))
    out = np.empty_like(z)
    pos = z >= 0.0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    if np.ndim(log_phi) == 0:
        return float(out[0])
    return out.reshape(np.shape(log_phi))
