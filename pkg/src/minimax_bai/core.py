"""Normal special functions and the 1-D optimizations behind the design constants.

Everything downstream (closed-form regret, the game solver, the acceptance
checks) reduces to the standard normal CDF and to two scalar optimization
problems:

* ``delta_star``: the maximizer of ``g(d) = d * Phi(-d)`` over ``d > 0``,
  equivalently the root of the first-order condition ``Phi(-d) = d * phi(d)``.
* the worst-case gap ``eta_star = (sigma1 + sigma0) * delta_star`` and the
  minimax regret value ``v_star = (sigma1 + sigma0) * g(delta_star)``.

The CDF is implemented from scratch (rather than taken from a library) because
its accuracy bounds every regret figure this package reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "std_normal_cdf",
    "std_normal_pdf",
    "DeltaStarSolution",
    "EquilibriumConstants",
    "solve_delta_star",
    "equilibrium_constants",
    "v_star",
    "golden_section_max",
]

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)

# Rational Chebyshev coefficients for erf/erfc, W. J. Cody, Math. Comp. 23
# (1969), as used in the classic CALERF/ERFC netlib routine.  Three regimes:
#   |z| <= 0.46875          erf(z)  = z * R1(z^2)
#   0.46875 < |z| <= 4      erfc(z) = exp(-z^2) * R2(z)
#   |z| > 4                 erfc(z) = exp(-z^2)/z * (1/sqrt(pi) - R3(1/z^2)/z^2)
# Max relative error ~1e-16 in each regime; validated against an independent
# series/continued-fraction oracle in the test suite.
_A = (3.16112374387056560e00, 1.13864154151050156e02,
      3.77485237685302021e02, 3.20937758913846947e03)
_A4 = 1.85777706184603153e-1
_B = (2.36012909523441209e01, 2.44024637934444173e02,
      1.28261652607737228e03, 2.84423683343917062e03)
_C = (5.64188496988670089e-1, 8.88314979438837594e00,
      6.61191906371416295e01, 2.98635138197400131e02,
      8.81952221241769090e02, 1.71204761263407058e03,
      2.05107837782607147e03, 1.23033935479799725e03)
_C8 = 2.15311535474403846e-8
_D = (1.57449261107098347e01, 1.17693950891312499e02,
      5.37181101862009858e02, 1.62138957456669019e03,
      3.29079923573345963e03, 4.36261909014324716e03,
      3.43936767414372164e03, 1.23033935480374942e03)
_P = (3.05326634961232344e-1, 3.60344899949804439e-1,
      1.25781726111229246e-1, 1.60837851487422766e-2,
      6.58749161529837803e-4)
_P5 = 1.63153871373020978e-2
_Q = (2.56852019228982242e00, 1.87295284992346047e00,
      5.27905102951428412e-1, 6.05183413124413191e-2,
      2.33520497626869185e-3)
_INV_SQRT_PI = 5.6418958354775628695e-1


def _erfc(z: np.ndarray) -> np.ndarray:
    """Complementary error function on a float array (Cody 1969)."""
    y = np.abs(z)
    out = np.empty_like(y)

    small = y <= 0.46875
    if small.any():
        ys = y[small]
        ysq = ys * ys
        xnum = _A4 * ysq
        xden = ysq
        for a, b in zip(_A[:3], _B[:3]):
            xnum = (xnum + a) * ysq
            xden = (xden + b) * ysq
        erf = ys * (xnum + _A[3]) / (xden + _B[3])
        out[small] = 1.0 - erf

    mid = (y > 0.46875) & (y <= 4.0)
    if mid.any():
        ym = y[mid]
        xnum = _C8 * ym
        xden = ym
        for c, d in zip(_C[:7], _D[:7]):
            xnum = (xnum + c) * ym
            xden = (xden + d) * ym
        res = (xnum + _C[7]) / (xden + _D[7])
        out[mid] = _exp_nxx(ym) * res

    big = y > 4.0
    if big.any():
        yb = y[big]
        ysq = 1.0 / (yb * yb)
        xnum = _P5 * ysq
        xden = ysq
        for p, q in zip(_P[:4], _Q[:4]):
            xnum = (xnum + p) * ysq
            xden = (xden + q) * ysq
        res = ysq * (xnum + _P[4]) / (xden + _Q[4])
        res = (_INV_SQRT_PI - res) / yb
        out[big] = _exp_nxx(yb) * res

    neg = z < 0.0
    out[neg] = 2.0 - out[neg]
    return out


def _exp_nxx(y: np.ndarray) -> np.ndarray:
    # exp(-y*y) with the argument split at a 1/16 grid so the squared term is
    # exact in double precision (the standard CALERF trick).
    y16 = np.floor(y * 16.0) / 16.0
    dely = (y - y16) * (y + y16)
    return np.exp(-y16 * y16) * np.exp(-dely)


def _erfc_scalar(z: float) -> float:
    """Scalar erfc, same Cody regimes as the array path."""
    y = abs(z)
    if y <= 0.46875:
        ysq = y * y
        xnum = _A4 * ysq
        xden = ysq
        for a, b in zip(_A[:3], _B[:3]):
            xnum = (xnum + a) * ysq
            xden = (xden + b) * ysq
        return 1.0 - z * (xnum + _A[3]) / (xden + _B[3])
    if y <= 4.0:
        xnum = _C8 * y
        xden = y
        for cc, dd in zip(_C[:7], _D[:7]):
            xnum = (xnum + cc) * y
            xden = (xden + dd) * y
        result = (xnum + _C[7]) / (xden + _D[7])
    else:
        ysq = 1.0 / (y * y)
        xnum = _P5 * ysq
        xden = ysq
        for p, q in zip(_P[:4], _Q[:4]):
            xnum = (xnum + p) * ysq
            xden = (xden + q) * ysq
        result = ysq * (xnum + _P[4]) / (xden + _Q[4])
        result = (_INV_SQRT_PI - result) / y
    y16 = math.floor(y * 16.0) / 16.0
    dely = (y - y16) * (y + y16)
    result = math.exp(-y16 * y16) * math.exp(-dely) * result
    if z < 0.0:
        result = 2.0 - result
    return result


def std_normal_cdf(x):
    """Standard normal CDF ``Phi(x)``.

    Accepts a scalar or an ndarray; returns the same shape.  ``Phi(x) +
    Phi(-x) == 1`` holds exactly by construction.  Non-finite input raises
    ``ValueError``.
    """
    if np.ndim(x) == 0:
        xf = float(x)
        if not math.isfinite(xf):
            raise ValueError("std_normal_cdf requires finite input")
        return 0.5 * _erfc_scalar(-xf / _SQRT2)
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("std_normal_cdf requires finite input")
    out = 0.5 * _erfc(np.atleast_1d(-arr / _SQRT2))
    return out.reshape(arr.shape)


def std_normal_pdf(x):
    """Standard normal density ``phi(x)``."""
    arr = np.asarray(x, dtype=float)
    out = _INV_SQRT_2PI * np.exp(-0.5 * arr * arr)
    if arr.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class DeltaStarSolution:
    """Maximizer of ``g(d) = d * Phi(-d)`` and the attained value."""

    delta_star: float
    objective_value: float


@dataclass(frozen=True)
class EquilibriumConstants:
    """The design constants for a given pair of arm standard deviations.

    All derived fields are exact functions of ``delta_star``:
    ``delta_prior = 2 * delta_star``, ``eta_star = (sigma1 + sigma0) *
    delta_star``, ``v_star = (sigma1 + sigma0) * objective_value``.
    """

    delta_star: float
    objective_value: float
    delta_prior: float
    eta_star: float
    v_star: float
    sigma1: float
    sigma0: float


# Search bracket for delta_star.  g(d) = d*Phi(-d) satisfies
# g(5) < 5*Phi(-5) < 1.5e-6 < g(1), so the maximizer is interior to [0, 5].
_DELTA_BRACKET = (0.0, 5.0)


def solve_delta_star(tolerance: float = 1e-9) -> DeltaStarSolution:
    """Maximize ``g(d) = d * Phi(-d)`` by bisecting its derivative.

    The first-order condition is ``Phi(-d) - d*phi(d) = 0``; the left side is
    positive at 0, negative at 5, and crosses zero once, so plain bisection
    to ``tolerance`` suffices.
    """
    if not tolerance > 0.0:
        raise ValueError("tolerance must be positive")
    lo, hi = _DELTA_BRACKET

    def slope(d: float) -> float:
        return std_normal_cdf(-d) - d * std_normal_pdf(d)

    while hi - lo > tolerance:
        mid = 0.5 * (lo + hi)
        if slope(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    d = 0.5 * (lo + hi)
    return DeltaStarSolution(delta_star=d, objective_value=d * std_normal_cdf(-d))


def equilibrium_constants(sigma1: float, sigma0: float,
                          tolerance: float = 1e-9) -> EquilibriumConstants:
    """All design constants for arm standard deviations ``(sigma1, sigma0)``.

    Constants are computed on the spot and carried in the returned value
    object; there is no hidden global cache.
    """
    _require_positive_sigmas(sigma1, sigma0)
    frag = solve_delta_star(tolerance)
    s = sigma1 + sigma0
    return EquilibriumConstants(
        delta_star=frag.delta_star,
        objective_value=frag.objective_value,
        delta_prior=2.0 * frag.delta_star,
        eta_star=s * frag.delta_star,
        v_star=s * frag.objective_value,
        sigma1=sigma1,
        sigma0=sigma0,
    )


def v_star(sigma1: float, sigma0: float) -> float:
    """Minimax regret value ``(sigma1 + sigma0) * max_d d*Phi(-d)``."""
    _require_positive_sigmas(sigma1, sigma0)
    frag = solve_delta_star()
    return (sigma1 + sigma0) * frag.objective_value


def _require_positive_sigmas(sigma1: float, sigma0: float) -> None:
    if not (sigma1 > 0.0 and sigma0 > 0.0):
        raise ValueError("standard deviations must be positive, got "
                         f"sigma1={sigma1!r}, sigma0={sigma0!r}")


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(f, lo: float, hi: float, tolerance: float = 1e-9):
    """Maximize a unimodal scalar function on ``[lo, hi]``.

    Returns ``(argmax, max_value)`` with the argmax located to within
    ``tolerance``.
    """
    a, b = float(lo), float(hi)
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tolerance:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
    x = 0.5 * (a + b)
    return x, f(x)
