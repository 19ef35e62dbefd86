"""Two-arm best-arm identification under minimax regret.

Simulators for the continuous-time experiment model, closed-form and Monte
Carlo regret evaluation, a numerical solver for the statistician-vs-nature
game, finite-budget experiments, and a CLI with an acceptance suite.
"""

__version__ = "0.1.0"

from .core import (
    EquilibriumConstants,
    equilibrium_constants,
    solve_delta_star,
    std_normal_cdf,
    std_normal_pdf,
    v_star,
)
from .policies import (
    AdaptivePlugIn,
    EqualSplit,
    FixedFraction,
    PolicySpec,
    TwoPointPrior,
    TwoStage,
    bayes_decision,
    bayes_threshold_c,
    indifference_prior,
    neyman_gamma,
    policy_from_name,
    threshold_decision,
)
from .diffusion import (
    Environment,
    ExperimentState,
    PathConfig,
    exact_terminal_sample,
    exact_terminal_samples,
    log_likelihood_ratio,
    posterior_belief,
    simulate_path,
    simulate_paths,
)
from .regret import (
    RegretEstimate,
    max_regret_at_neyman,
    regret_closed_form,
    regret_monte_carlo,
)
from .game import (
    EquilibriumSolution,
    agent_best_response,
    divergence_probe,
    nature_best_response,
    solve_equilibrium,
)
from .finite_sample import (
    LocalEnvironment,
    TrialConfig,
    estimate_sigmas,
    run_trial,
    scaled_regret_curve,
    two_stage_trial,
)

__all__ = [
    "__version__",
    "EquilibriumConstants",
    "equilibrium_constants",
    "solve_delta_star",
    "std_normal_cdf",
    "std_normal_pdf",
    "v_star",
    "AdaptivePlugIn",
    "EqualSplit",
    "FixedFraction",
    "PolicySpec",
    "TwoPointPrior",
    "TwoStage",
    "bayes_decision",
    "bayes_threshold_c",
    "indifference_prior",
    "neyman_gamma",
    "policy_from_name",
    "threshold_decision",
    "Environment",
    "ExperimentState",
    "PathConfig",
    "exact_terminal_sample",
    "exact_terminal_samples",
    "log_likelihood_ratio",
    "posterior_belief",
    "simulate_path",
    "simulate_paths",
    "RegretEstimate",
    "max_regret_at_neyman",
    "regret_closed_form",
    "regret_monte_carlo",
    "EquilibriumSolution",
    "agent_best_response",
    "divergence_probe",
    "nature_best_response",
    "solve_equilibrium",
    "LocalEnvironment",
    "TrialConfig",
    "estimate_sigmas",
    "run_trial",
    "scaled_regret_curve",
    "two_stage_trial",
]
