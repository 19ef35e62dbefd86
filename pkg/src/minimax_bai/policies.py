"""Sampling rules, implementation rules, and two-point priors.

A policy is a sampling rule (how experimentation effort is split between the
arms) plus a threshold ``c`` for the terminal implementation decision
``pick arm 1 iff x1/sigma1 - x0/sigma0 >= c``.  Ties at exact equality go to
arm 1 everywhere; the event has probability zero under the continuous model
but shows up in discrete tests, and determinism matters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

__all__ = [
    "FixedFraction",
    "EqualSplit",
    "TwoStage",
    "AdaptivePlugIn",
    "SamplingRule",
    "PolicySpec",
    "TwoPointPrior",
    "indifference_prior",
    "neyman_gamma",
    "threshold_decision",
    "bayes_decision",
    "bayes_threshold_c",
    "constant_fraction",
    "policy_from_name",
]


@dataclass(frozen=True)
class FixedFraction:
    """Sample arm 1 a constant fraction ``gamma`` of the time."""

    gamma: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must be in [0, 1], got {self.gamma!r}")


@dataclass(frozen=True)
class EqualSplit:
    """FixedFraction(0.5), kept as a named variant for reporting clarity."""

    @property
    def gamma(self) -> float:
        return 0.5


@dataclass(frozen=True)
class TwoStage:
    """Equal-split pilot of ``ceil(n**rho)`` periods, then plug-in Neyman.

    Only meaningful for discrete budgets; the continuous-time simulator
    rejects it.
    """

    rho: float

    def __post_init__(self) -> None:
        if not 0.0 < self.rho < 1.0:
            raise ValueError(f"rho must be in (0, 1), got {self.rho!r}")


@dataclass(frozen=True)
class AdaptivePlugIn:
    """Re-estimate arm standard deviations every ``batch`` observations and
    re-target the Neyman fraction.  Not part of the optimal design; included
    to test empirically that adaptation buys nothing here."""

    batch: int

    def __post_init__(self) -> None:
        if self.batch < 1:
            raise ValueError(f"batch must be a positive integer, got {self.batch!r}")


SamplingRule = Union[FixedFraction, EqualSplit, TwoStage, AdaptivePlugIn]


@dataclass(frozen=True)
class PolicySpec:
    """A sampling rule plus the implementation threshold ``c``."""

    sampling: SamplingRule
    threshold_c: float = 0.0


def constant_fraction(rule: SamplingRule) -> float | None:
    """The constant sampling fraction of ``rule``, or ``None`` if adaptive."""
    if isinstance(rule, (FixedFraction, EqualSplit)):
        return rule.gamma
    return None


@dataclass(frozen=True)
class TwoPointPrior:
    """Nature's two-point prior: mean pair ``state1`` with probability ``m1``,
    mean pair ``state0`` otherwise.  Arm 1 is best under state 1 and arm 0 is
    best under state 0."""

    state1: tuple[float, float]
    state0: tuple[float, float]
    m1: float

    def __post_init__(self) -> None:
        a1, b1 = self.state1
        a0, b0 = self.state0
        if not a1 > b1:
            raise ValueError(f"state1 must have a1 > b1, got {self.state1!r}")
        if not b0 > a0:
            raise ValueError(f"state0 must have b0 > a0, got {self.state0!r}")
        if not 0.0 < self.m1 < 1.0:
            raise ValueError(f"m1 must be in (0, 1), got {self.m1!r}")


def indifference_prior(delta: float, sigma1: float, sigma0: float,
                       m1: float = 0.5) -> TwoPointPrior:
    """Two-point prior under which every sampling rule is equally informative.

    Support points are ``(sigma1*delta/2, -sigma0*delta/2)`` and the mirror
    image; the likelihood-ratio process then depends on the data only through
    ``x1/sigma1 - x0/sigma0``, regardless of the sampling rule.
    """
    if not delta > 0.0:
        raise ValueError(f"delta must be positive, got {delta!r}")
    return TwoPointPrior(
        state1=(sigma1 * delta / 2.0, -sigma0 * delta / 2.0),
        state0=(-sigma1 * delta / 2.0, sigma0 * delta / 2.0),
        m1=m1,
    )


def neyman_gamma(sigma1: float, sigma0: float) -> float:
    """Neyman allocation: sample arm 1 a fraction ``sigma1/(sigma1+sigma0)``."""
    if not (sigma1 > 0.0 and sigma0 > 0.0):
        raise ValueError("standard deviations must be positive, got "
                         f"sigma1={sigma1!r}, sigma0={sigma0!r}")
    return sigma1 / (sigma1 + sigma0)


def threshold_decision(state, sigma1: float, sigma0: float, c: float) -> int:
    """Terminal decision: arm 1 iff ``x1/sigma1 - x0/sigma0 >= c``.

    ``state`` is any object with ``x1``/``x0`` attributes (a terminal
    experiment state).  The weak inequality sends exact ties to arm 1.
    """
    return int(state.x1 / sigma1 - state.x0 / sigma0 >= c)


def bayes_decision(log_phi: float, prior: TwoPointPrior) -> int:
    """Posterior-expected-welfare decision given the log likelihood ratio.

    Picks arm 1 iff ``log_phi >= ln[(b0-a0)(1-m1) / ((a1-b1) m1)]``.
    """
    a1, b1 = prior.state1
    a0, b0 = prior.state0
    threshold = math.log((b0 - a0) * (1.0 - prior.m1) / ((a1 - b1) * prior.m1))
    return int(log_phi >= threshold)


def bayes_threshold_c(delta: float, m1: float) -> float:
    """The threshold ``c = ln((1-m1)/m1) / delta`` induced by prior mass ``m1``."""
    if not delta > 0.0:
        raise ValueError(f"delta must be positive, got {delta!r}")
    if not 0.0 < m1 < 1.0:
        raise ValueError(f"m1 must be in (0, 1), got {m1!r}")
    return math.log((1.0 - m1) / m1) / delta


def policy_from_name(name: str, sigma1: float, sigma0: float,
                     rho: float = 0.5, batch: int = 100,
                     threshold_c: float = 0.0) -> PolicySpec:
    """Resolve a CLI policy name into a PolicySpec.

    Recognized names: ``neyman``, ``equal``, ``two-stage``,
    ``adaptive-neyman``, ``fixed:<gamma>``.
    """
    if name == "neyman":
        return PolicySpec(FixedFraction(neyman_gamma(sigma1, sigma0)), threshold_c)
    if name == "equal":
        return PolicySpec(EqualSplit(), threshold_c)
    if name == "two-stage":
        return PolicySpec(TwoStage(rho), threshold_c)
    if name == "adaptive-neyman":
        return PolicySpec(AdaptivePlugIn(batch), threshold_c)
    if name.startswith("fixed:"):
        try:
            gamma = float(name.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad fixed policy {name!r}; expected fixed:<gamma>")
        return PolicySpec(FixedFraction(gamma), threshold_c)
    raise ValueError(
        f"unknown policy {name!r}; expected one of neyman, equal, two-stage, "
        "adaptive-neyman, fixed:<gamma>")
