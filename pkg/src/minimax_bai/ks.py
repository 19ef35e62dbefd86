"""Kolmogorov-Smirnov distances and asymptotic critical values.

Used by the acceptance suite to check that the log likelihood-ratio process
has the same terminal distribution under every sampling rule (and matches its
Gaussian law).  Sample sizes there are 10^4, where the asymptotic critical
value ``c(alpha) = sqrt(-ln(alpha/2)/2)`` is accurate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "KSResult",
    "ks_two_sample",
    "ks_one_sample",
    "ks_critical_value",
]


@dataclass(frozen=True)
class KSResult:
    statistic: float
    critical_value: float
    reject: bool


def ks_critical_value(alpha: float, n: int, m: int | None = None) -> float:
    """Asymptotic KS critical value; two-sample when ``m`` is given."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha!r}")
    c = math.sqrt(-0.5 * math.log(alpha / 2.0))
    if m is None:
        return c / math.sqrt(n)
    return c * math.sqrt((n + m) / (n * m))


def ks_two_sample(a, b, alpha: float = 0.01) -> KSResult:
    """Two-sample KS test at level ``alpha``."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    if a.size == 0 or b.size == 0:
        raise ValueError("samples must be nonempty")
    pooled = np.concatenate([a, b])
    cdf_a = np.searchsorted(a, pooled, side="right") / a.size
    cdf_b = np.searchsorted(b, pooled, side="right") / b.size
    stat = float(np.max(np.abs(cdf_a - cdf_b)))
    crit = ks_critical_value(alpha, a.size, b.size)
    return KSResult(statistic=stat, critical_value=crit, reject=stat > crit)


def ks_one_sample(x, cdf: Callable[[np.ndarray], np.ndarray],
                  alpha: float = 0.01) -> KSResult:
    """One-sample KS test of ``x`` against the continuous CDF ``cdf``."""
    x = np.sort(np.asarray(x, dtype=float))
    if x.size == 0:
        raise ValueError("sample must be nonempty")
    n = x.size
    f = np.asarray(cdf(x), dtype=float)
    grid = np.arange(1, n + 1) / n
    stat = float(max(np.max(grid - f), np.max(f - (grid - 1.0 / n))))
    crit = ks_critical_value(alpha, n)
    return KSResult(statistic=stat, critical_value=crit, reject=stat > crit)
