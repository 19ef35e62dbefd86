"""Command-line interface: solve, regret, sweep, simulate, verify.

Output contract:
* JSON results go to stdout as a single object that carries the run manifest
  fields (command, parameters, master_seed, artifact_version, timestamp).
* CSV results go to stdout with the manifest embedded as a leading ``#``
  comment line, then a header row, then data rows; floats use 12 significant
  digits.
* Identical argv (seed included) produces byte-identical output at any
  ``--threads`` setting.  To keep that guarantee the manifest timestamp is
  not wall-clock time: it honors ``SOURCE_DATE_EPOCH`` when set and otherwise
  falls back to the fixed release timestamp of this artifact version.

Exit codes: 0 success, 1 domain/runtime error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from datetime import datetime, timezone

from . import __version__
from .diffusion import Environment
from .finite_sample import scaled_regret_curve
from .game import solve_equilibrium
from .policies import FixedFraction, PolicySpec, policy_from_name
from .regret import regret_closed_form, regret_monte_carlo

__all__ = ["dispatch", "main"]

RELEASE_TIMESTAMP = "2026-08-08T00:00:00+00:00"

_POLICY_NAMES = ("neyman", "equal", "two-stage", "adaptive-neyman")


def _timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is not None:
        return datetime.fromtimestamp(int(epoch), tz=timezone.utc).isoformat()
    return RELEASE_TIMESTAMP


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _json_ready(obj):
    """Round floats to 12 significant digits for stable JSON output."""
    if isinstance(obj, float):
        return float(_fmt(obj))
    if isinstance(obj, dict):
        return {k: _json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_ready(v) for v in obj]
    return obj


def _manifest(command: str, parameters: dict, master_seed: int) -> dict:
    return {
        "command": command,
        "parameters": _json_ready(parameters),
        "master_seed": master_seed,
        "artifact_version": __version__,
        "timestamp": _timestamp(),
    }


def _emit_json(payload: dict) -> None:
    sys.stdout.write(json.dumps(_json_ready(payload), indent=2) + "\n")


def _emit_csv(manifest: dict, header: list[str], rows) -> None:
    out = sys.stdout
    out.write("# manifest=" + json.dumps(_json_ready(manifest)) + "\n")
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(row) + "\n")


def _grid(text: str) -> list[float]:
    """Parse ``a:b:step`` (inclusive) or a comma-separated value list."""
    try:
        if ":" in text:
            a, b, step = (float(tok) for tok in text.split(":"))
            if step <= 0.0 or b < a:
                raise ValueError
            count = int(math.floor((b - a) / step + 1e-9)) + 1
            return [a + i * step for i in range(count)]
        return [float(tok) for tok in text.split(",") if tok != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"bad grid {text!r}; expected a:b:step or v1,v2,...")


def _int_grid(text: str) -> list[int]:
    vals = _grid(text)
    out = [int(round(v)) for v in vals]
    if any(abs(v - i) > 1e-9 for v, i in zip(vals, out)):
        raise argparse.ArgumentTypeError(f"grid {text!r} must contain integers")
    return out


def _policy_name(text: str) -> str:
    if text in _POLICY_NAMES or text.startswith("fixed:"):
        if text.startswith("fixed:"):
            try:
                gamma = float(text.split(":", 1)[1])
            except ValueError:
                raise argparse.ArgumentTypeError(f"bad policy {text!r}")
            if not 0.0 <= gamma <= 1.0:
                raise argparse.ArgumentTypeError("fixed:<gamma> needs gamma in [0, 1]")
        return text
    raise argparse.ArgumentTypeError(
        f"unknown policy {text!r}; choose from {', '.join(_POLICY_NAMES)}, fixed:<gamma>")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="minimax-bai",
        description="Two-arm best-arm identification under minimax regret: "
                    "equilibrium solver, regret evaluation, and simulation.")
    parser.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="worker pool size (results are identical at any value)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve the minimax game")
    p.add_argument("--sigma1", type=float, required=True)
    p.add_argument("--sigma0", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-8)

    p = sub.add_parser("regret", help="closed-form (and optional Monte Carlo) regret")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--mu1", type=float, required=True)
    p.add_argument("--mu0", type=float, required=True)
    p.add_argument("--sigma1", type=float, required=True)
    p.add_argument("--sigma0", type=float, required=True)
    p.add_argument("--mc-reps", type=int, default=0,
                   help="Monte Carlo replications (0 = closed form only)")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("sweep", help="nature's best-response surface as CSV")
    p.add_argument("--sigma1", type=float, required=True)
    p.add_argument("--sigma0", type=float, required=True)
    p.add_argument("--gamma-grid", type=_grid, required=True)
    p.add_argument("--c-grid", type=_grid, required=True)
    p.add_argument("--delta-grid", type=_grid, required=True)

    p = sub.add_parser("simulate", help="finite-budget scaled regret as CSV")
    p.add_argument("--family", choices=("gaussian", "bernoulli"), required=True)
    p.add_argument("--policy", type=_policy_name, required=True)
    p.add_argument("--n-grid", type=_int_grid, required=True)
    p.add_argument("--gap-grid", type=_grid, required=True)
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rho", type=float, default=0.5,
                   help="two-stage pilot exponent")
    p.add_argument("--batch", type=int, default=100,
                   help="adaptive re-estimation cadence in observations")
    p.add_argument("--sigma1", type=float, default=1.0,
                   help="gaussian base standard deviation of arm 1")
    p.add_argument("--sigma0", type=float, default=1.0,
                   help="gaussian base standard deviation of arm 0")

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--fast", action="store_true",
                   help="reduced replication counts, doubled tolerances")

    return parser


def _cmd_solve(args) -> int:
    solution = solve_equilibrium(args.sigma1, args.sigma0, tolerance=args.tol)
    payload = _manifest("solve", {"sigma1": args.sigma1, "sigma0": args.sigma0,
                                  "tol": args.tol}, master_seed=0)
    payload.update({
        "gamma_star": solution.gamma_star,
        "c_star": solution.c_star,
        "eta_star": solution.eta_star,
        "delta_prior_star": solution.delta_prior_star,
        "v_star": solution.v_star,
        "lfp": {
            "state1": list(solution.lfp.state1),
            "state0": list(solution.lfp.state0),
            "m1": solution.lfp.m1,
        },
        "exploitability": solution.exploitability,
        "residuals": dict(solution.residuals),
    })
    _emit_json(payload)
    return 0


def _cmd_regret(args) -> int:
    env = Environment(args.mu1, args.mu0, args.sigma1, args.sigma0)
    closed = regret_closed_form(args.gamma, args.c, env)
    monte_carlo = None
    if args.mc_reps > 0:
        policy = PolicySpec(FixedFraction(args.gamma), threshold_c=args.c)
        est = regret_monte_carlo(policy, env, args.mc_reps,
                                 master_seed=args.seed, threads=args.threads)
        monte_carlo = {
            "mean": est.mean,
            "std_error": est.std_error,
            "replications": est.replications,
            "low_replications": est.low_replications,
        }
    payload = _manifest("regret", {
        "gamma": args.gamma, "c": args.c, "mu1": args.mu1, "mu0": args.mu0,
        "sigma1": args.sigma1, "sigma0": args.sigma0, "mc_reps": args.mc_reps,
    }, master_seed=args.seed)
    payload.update({"closed_form": closed, "monte_carlo": monte_carlo})
    _emit_json(payload)
    return 0


def _cmd_sweep(args) -> int:
    if not (args.sigma1 > 0.0 and args.sigma0 > 0.0):
        raise ValueError("standard deviations must be positive")
    s = args.sigma1 + args.sigma0
    rows = []
    for gamma in args.gamma_grid:
        for c in args.c_grid:
            for delta in args.delta_grid:
                # canonical two-point strategy with gap delta
                env1 = Environment(args.sigma1 * delta / s, -args.sigma0 * delta / s,
                                   args.sigma1, args.sigma0)
                env0 = Environment(-args.sigma1 * delta / s, args.sigma0 * delta / s,
                                   args.sigma1, args.sigma0)
                r1 = regret_closed_form(gamma, c, env1)
                r0 = regret_closed_form(gamma, c, env0)
                side, regret = ("theta1", r1) if r1 >= r0 else ("theta0", r0)
                rows.append([_fmt(gamma), _fmt(c), _fmt(delta), side, _fmt(regret)])
    manifest = _manifest("sweep", {
        "sigma1": args.sigma1, "sigma0": args.sigma0,
        "gamma_grid": args.gamma_grid, "c_grid": args.c_grid,
        "delta_grid": args.delta_grid,
    }, master_seed=0)
    _emit_csv(manifest, ["gamma", "c", "delta", "side", "regret"], rows)
    return 0


def _cmd_simulate(args) -> int:
    if args.family == "bernoulli":
        rule_sigma1, rule_sigma0 = 0.5, 0.5
    else:
        rule_sigma1, rule_sigma0 = args.sigma1, args.sigma0
    policy = policy_from_name(args.policy, rule_sigma1, rule_sigma0,
                              rho=args.rho, batch=args.batch)
    result = scaled_regret_curve(
        args.family, policy, gap_grid=args.gap_grid, n_grid=args.n_grid,
        replications=args.reps, master_seed=args.seed,
        base_sigma1=args.sigma1, base_sigma0=args.sigma0, threads=args.threads)
    rows = []
    for point in result.points:
        rows.append([
            args.family, args.policy, str(point.n), _fmt(point.gap),
            _fmt(point.h1), _fmt(point.h0), _fmt(point.estimate.mean),
            _fmt(point.estimate.std_error), str(point.estimate.replications),
            str(args.seed),
        ])
    manifest = _manifest("simulate", {
        "family": args.family, "policy": args.policy, "n_grid": args.n_grid,
        "gap_grid": args.gap_grid, "reps": args.reps, "rho": args.rho,
        "batch": args.batch, "sigma1": args.sigma1, "sigma0": args.sigma0,
    }, master_seed=args.seed)
    _emit_csv(manifest,
              ["family", "policy", "n", "gap", "h1", "h0", "scaled_regret",
               "std_error", "replications", "seed"],
              rows)
    return 0


def _cmd_verify(args) -> int:
    from .acceptance import format_table, run_acceptance

    results = run_acceptance(fast=args.fast)
    sys.stdout.write(format_table(results) + "\n")
    return 0 if all(r.passed for r in results) else 1


def dispatch(argv) -> int:
    """Run one CLI invocation; returns the process exit code."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "solve": _cmd_solve,
        "regret": _cmd_regret,
        "sweep": _cmd_sweep,
        "simulate": _cmd_simulate,
        "verify": _cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except (ValueError, RuntimeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


def main(argv=None) -> int:
    return dispatch(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
