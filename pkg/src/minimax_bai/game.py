"""The statistician-vs-nature game: best responses and equilibrium recovery.

Nature picks a two-point prior over mean pairs; the agent picks a sampling
fraction ``gamma`` and an implementation threshold ``c``.  Any sampling
imbalance ``gamma/sigma1 != (1-gamma)/sigma0`` lets nature drive regret to
infinity by pushing both means far negative on the side where the imbalance
hurts, so the solver pins ``gamma`` by bisecting that boundedness condition,
then picks ``c`` to minimize worst-case regret, and certifies the result by
measuring the best unilateral deviation either player can find on a grid.

"Unbounded" is always certified constructively: a strictly increasing probe
sequence passing the equilibrium value, never an evaluation at infinity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .core import golden_section_max, std_normal_cdf, std_normal_pdf
from .diffusion import Environment
from .policies import (
    FixedFraction,
    PolicySpec,
    TwoPointPrior,
    bayes_threshold_c,
    indifference_prior,
)
from .regret import (
    _branch_max,
    max_regret_at_neyman,
    regret_closed_form,
    regret_monte_carlo,
)
from .rng import derive_seed

__all__ = [
    "NatureResponse",
    "AgentResponse",
    "EquilibriumSolution",
    "deviation_measure",
    "nature_best_response",
    "divergence_probe",
    "agent_best_response",
    "solve_equilibrium",
]

# Location magnitude of the probe construction, in units of the gap: the best
# arm's mean is placed at -PROBE_SCALE * gap.  Any value with |mean| >> gap
# works; fixed for reproducibility.
PROBE_SCALE = 10.0


def deviation_measure(gamma: float, sigma1: float, sigma0: float) -> float:
    """Imbalance ``gamma/sigma1 - (1-gamma)/sigma0``; zero iff Neyman."""
    return gamma / sigma1 - (1.0 - gamma) / sigma0


@dataclass(frozen=True)
class NatureResponse:
    """Nature's best response to ``(gamma, c)``.

    ``side`` is ``"theta1"``/``"theta0"`` for the bounded branches or
    ``"unbounded"`` when the sampling fraction deviates from Neyman, in which
    case ``value`` is the final (finite) probe value and ``probe`` holds the
    whole diverging sequence.
    """

    gap: float
    value: float
    side: str
    branch_values: tuple[float, float] | None = None
    probe: tuple[float, ...] | None = None


def divergence_probe(gamma: float, c: float, sigma1: float, sigma0: float,
                     levels: int) -> list[float]:
    """Regret along nature's location-shift construction at a deviating gamma.

    Level ``k`` uses gap ``k`` with the best arm's mean at ``-PROBE_SCALE*k``
    on the side where the imbalance hurts.  Requires a strict deviation from
    the Neyman fraction; at Neyman the construction is bounded by design.
    """
    if levels < 1:
        raise ValueError("levels must be >= 1")
    d = deviation_measure(gamma, sigma1, sigma0)
    if abs(d) <= 1e-12 * (1.0 / sigma1 + 1.0 / sigma0):
        raise ValueError("divergence_probe requires a strict deviation from "
                         "the Neyman fraction; the sequence would be bounded")
    values = []
    for k in range(1, levels + 1):
        best = -PROBE_SCALE * k
        worse = best - k
        if d > 0.0:
            env = Environment(mu1=best, mu0=worse, sigma1=sigma1, sigma0=sigma0)
        else:
            env = Environment(mu1=worse, mu0=best, sigma1=sigma1, sigma0=sigma0)
        values.append(regret_closed_form(gamma, c, env))
    return values


def nature_best_response(gamma: float, c: float, sigma1: float, sigma0: float,
                         tolerance: float = 1e-9, levels: int = 5) -> NatureResponse:
    """Nature's best response to the policy ``(gamma, c)``.

    At the Neyman fraction (within ``tolerance`` on the imbalance) the
    response is the optimal gap and the attained regret; otherwise the
    supremum is infinite and a finite diverging probe is reported instead.
    """
    if not (sigma1 > 0.0 and sigma0 > 0.0):
        raise ValueError("standard deviations must be positive")
    d = deviation_measure(gamma, sigma1, sigma0)
    if abs(d) > tolerance * (1.0 / sigma1 + 1.0 / sigma0):
        probe = divergence_probe(gamma, c, sigma1, sigma0, levels)
        return NatureResponse(gap=float(levels), value=probe[-1],
                              side="unbounded", probe=tuple(probe))
    s = sigma1 + sigma0
    arg1, val1 = _branch_max(c, s, tolerance=1e-9)
    arg0, val0 = _branch_max(-c, s, tolerance=1e-9)
    if val1 >= val0:
        gap, value, side = arg1, val1, "theta1"
    else:
        gap, value, side = arg0, val0, "theta0"
    return NatureResponse(gap=gap, value=value, side=side,
                          branch_values=(val1, val0))


@dataclass(frozen=True)
class AgentResponse:
    """Agent's best response to an indifference prior.

    The closed-form Bayes regret table is flat in gamma (that is the point of
    the indifference prior); ``flatness`` is its max-min spread.  The Monte
    Carlo columns re-estimate the same table from simulation.
    """

    gammas: tuple[float, ...]
    bayes_regret: tuple[float, ...]
    bayes_regret_mc: tuple[float, ...]
    bayes_regret_mc_se: tuple[float, ...]
    flatness: float
    c_opt: float
    c_grid_argmin: float


def _indifference_delta(prior: TwoPointPrior, sigma1: float, sigma0: float) -> float:
    """The scale ``delta`` of an indifference prior, or raise if not one."""
    a1, b1 = prior.state1
    a0, b0 = prior.state0
    delta = 2.0 * a1 / sigma1
    expected = ((sigma1 * delta / 2.0, -sigma0 * delta / 2.0),
                (-sigma1 * delta / 2.0, sigma0 * delta / 2.0))
    scale = max(abs(a1), abs(b1), abs(a0), abs(b0), 1e-300)
    actual = (prior.state1, prior.state0)
    for (ea, eb), (xa, xb) in zip(expected, actual):
        if abs(ea - xa) > 1e-9 * scale or abs(eb - xb) > 1e-9 * scale:
            raise ValueError(
                "agent_best_response requires an indifference prior with "
                "support points (s1*D/2, -s0*D/2), (-s1*D/2, s0*D/2); "
                f"got {prior!r}")
    if not delta > 0.0:
        raise ValueError(f"indifference prior must have positive scale, got {delta!r}")
    return delta


def _prior_environments(prior: TwoPointPrior, sigma1: float,
                        sigma0: float) -> tuple[Environment, Environment]:
    return (Environment(prior.state1[0], prior.state1[1], sigma1, sigma0),
            Environment(prior.state0[0], prior.state0[1], sigma1, sigma0))


def bayes_regret_closed_form(prior: TwoPointPrior, gamma: float, c: float,
                             sigma1: float, sigma0: float) -> float:
    """Prior-weighted closed-form regret of ``(gamma, c)``."""
    env1, env0 = _prior_environments(prior, sigma1, sigma0)
    return (prior.m1 * regret_closed_form(gamma, c, env1)
            + (1.0 - prior.m1) * regret_closed_form(gamma, c, env0))


def agent_best_response(prior: TwoPointPrior, sigma1: float, sigma0: float,
                        gamma_grid: Sequence[float], c_grid: Sequence[float],
                        replications: int, seed: int = 0,
                        threads: int = 1) -> AgentResponse:
    """Agent's best response against an indifference prior.

    Reports the Bayes regret for every gamma in ``gamma_grid`` at the
    Bayes-optimal threshold (closed form plus a Monte Carlo check), the
    flatness of that table, and the optimal threshold both exactly
    (``c_opt``) and as the best point of ``c_grid``.
    """
    if len(gamma_grid) == 0 or len(c_grid) == 0:
        raise ValueError("gamma_grid and c_grid must be nonempty")
    delta = _indifference_delta(prior, sigma1, sigma0)
    c_opt = bayes_threshold_c(delta, prior.m1)

    closed = [bayes_regret_closed_form(prior, g, c_opt, sigma1, sigma0)
              for g in gamma_grid]
    flatness = max(closed) - min(closed)

    env1, env0 = _prior_environments(prior, sigma1, sigma0)
    mc_means = []
    mc_ses = []
    for i, g in enumerate(gamma_grid):
        policy = PolicySpec(FixedFraction(g), threshold_c=c_opt)
        est1 = regret_monte_carlo(policy, env1, replications,
                                  master_seed=derive_seed(seed, i, 1),
                                  threads=threads)
        est0 = regret_monte_carlo(policy, env0, replications,
                                  master_seed=derive_seed(seed, i, 0),
                                  threads=threads)
        mc_means.append(prior.m1 * est1.mean + (1.0 - prior.m1) * est0.mean)
        mc_ses.append((prior.m1 ** 2 * est1.std_error ** 2
                       + (1.0 - prior.m1) ** 2 * est0.std_error ** 2) ** 0.5)

    mid_gamma = gamma_grid[len(gamma_grid) // 2]
    by_c = [bayes_regret_closed_form(prior, mid_gamma, c, sigma1, sigma0)
            for c in c_grid]
    c_grid_argmin = c_grid[int(np.argmin(by_c))]

    return AgentResponse(
        gammas=tuple(float(g) for g in gamma_grid),
        bayes_regret=tuple(closed),
        bayes_regret_mc=tuple(mc_means),
        bayes_regret_mc_se=tuple(mc_ses),
        flatness=flatness,
        c_opt=c_opt,
        c_grid_argmin=float(c_grid_argmin),
    )


@dataclass(frozen=True)
class EquilibriumSolution:
    """Equilibrium of the game, with verification residuals.

    ``exploitability`` is the largest benefit either player gains from a
    unilateral deviation on the verification grid (0 at an exact equilibrium).
    """

    gamma_star: float
    c_star: float
    eta_star: float
    delta_prior_star: float
    v_star: float
    lfp: TwoPointPrior
    exploitability: float
    residuals: Mapping[str, float] = field(default_factory=dict)


def _exploitability(gamma: float, c: float, value: float, lfp: TwoPointPrior,
                    sigma1: float, sigma0: float) -> float:
    s = sigma1 + sigma0
    # Nature's side: under (gamma*, c*) regret depends on nature's choice only
    # through the gap, so a gap grid spans its whole strategy space.
    deltas = np.linspace(4.0 * s / 201, 4.0 * s, 201)
    nature_best = -np.inf
    for delta in deltas:
        env1 = Environment(sigma1 * delta / s, -sigma0 * delta / s, sigma1, sigma0)
        env0 = Environment(-sigma1 * delta / s, sigma0 * delta / s, sigma1, sigma0)
        val = max(regret_closed_form(gamma, c, env1),
                  regret_closed_form(gamma, c, env0))
        nature_best = max(nature_best, val)
    benefit_nature = max(0.0, nature_best - value)

    lo = max(1e-6, gamma - 0.1)
    hi = min(1.0 - 1e-6, gamma + 0.1)
    agent_best = np.inf
    for g in np.linspace(lo, hi, 21):
        for cc in np.linspace(-1.0, 1.0, 21):
            agent_best = min(agent_best,
                             bayes_regret_closed_form(lfp, g, cc, sigma1, sigma0))
    benefit_agent = max(0.0, value - agent_best)
    return max(benefit_nature, benefit_agent)


def solve_equilibrium(sigma1: float, sigma0: float,
                      tolerance: float = 1e-8) -> EquilibriumSolution:
    """Recover the equilibrium of the game numerically.

    The sampling fraction is found by bisecting the boundedness condition
    ``gamma/sigma1 = (1-gamma)/sigma0`` (the unique gamma where nature's
    response stays finite), the threshold by a 1-D minimization of worst-case
    regret, and the prior scale from nature's optimal gap.  The closed forms
    ``sigma1/(sigma1+sigma0)`` etc. are never used internally; they are what
    the acceptance checks compare against.
    """
    if not (sigma1 > 0.0 and sigma0 > 0.0):
        raise ValueError("standard deviations must be positive")
    if not tolerance > 0.0:
        raise ValueError("tolerance must be positive")

    gamma_tol = min(tolerance, 1e-8)
    lo, hi = 0.0, 1.0
    gamma = None
    while hi - lo > gamma_tol:
        mid = 0.5 * (lo + hi)
        d = deviation_measure(mid, sigma1, sigma0)
        if d == 0.0:
            gamma = mid  # exact root of the boundedness condition
            break
        if d < 0.0:
            lo = mid
        else:
            hi = mid
    if gamma is None:
        gamma = 0.5 * (lo + hi)

    c_tol = min(tolerance, 1e-8) / 10.0
    c, _ = golden_section_max(
        lambda cc: -max_regret_at_neyman(cc, sigma1, sigma0).value,
        -1.0, 1.0, c_tol)

    response = max_regret_at_neyman(c, sigma1, sigma0)
    s = sigma1 + sigma0
    eta = response.argmax_delta
    delta_prior = 2.0 * eta / s
    value = response.value
    lfp = indifference_prior(delta_prior, sigma1, sigma0, m1=0.5)

    exploitability = _exploitability(gamma, c, value, lfp, sigma1, sigma0)
    if exploitability > tolerance:
        raise RuntimeError(
            f"equilibrium verification failed: exploitability {exploitability:g} "
            f"exceeds tolerance {tolerance:g}")

    half = delta_prior / 2.0
    residuals = {
        "boundedness": abs(deviation_measure(gamma, sigma1, sigma0)),
        "first_order": abs(std_normal_cdf(-half) - half * std_normal_pdf(half)),
        "branch_asymmetry": abs(_branch_max(c, s)[1] - _branch_max(-c, s)[1]),
    }
    return EquilibriumSolution(
        gamma_star=gamma,
        c_star=c,
        eta_star=eta,
        delta_prior_star=delta_prior,
        v_star=value,
        lfp=lfp,
        exploitability=exploitability,
        residuals=residuals,
    )
