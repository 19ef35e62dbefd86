"""Plot kinds: map a CLI CSV onto a line chart.

Three figure kinds, one per documented CSV schema:

* ``br-surface``     sweep CSV: nature's regret against the gap, one curve
                     per threshold value.
* ``gamma-flatness`` sweep CSV: regret against the sampling fraction, one
                     curve per (threshold, gap) cell; flat curves are the
                     point of the figure.
* ``convergence``    simulate CSV: scaled regret against the budget (log
                     axis), one curve per gap, with an optional reference
                     line for the limit value.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .csvio import SchemaError, as_float, read_table, require_columns, require_rows
from .svg import Series, line_chart

KINDS = ("br-surface", "gamma-flatness", "convergence")

_SWEEP_COLUMNS = ("gamma", "c", "delta", "side", "regret")
_SIMULATE_COLUMNS = ("family", "policy", "n", "gap", "h1", "h0",
                     "scaled_regret", "std_error", "replications", "seed")


@dataclass(frozen=True)
class PlotJob:
    input_csv_path: Path
    kind: str
    output_path: Path
    reference_value: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")


def render(job: PlotJob) -> Path:
    """Render the job's figure; returns the written path."""
    header, rows = read_table(Path(job.input_csv_path))
    if job.kind == "br-surface":
        svg = _br_surface(header, rows, job.reference_value)
    elif job.kind == "gamma-flatness":
        svg = _gamma_flatness(header, rows, job.reference_value)
    else:
        svg = _convergence(header, rows, job.reference_value)
    out = Path(job.output_path)
    out.write_text(svg)
    return out


def _first_wins(pairs):
    seen = {}
    for key, value in pairs:
        seen.setdefault(key, value)
    return seen


def _br_surface(header, rows, ref) -> str:
    require_columns(header, _SWEEP_COLUMNS, "br-surface")
    require_rows(rows, "br-surface")
    by_c: dict[float, dict[float, float]] = {}
    for row in rows:
        c = as_float(row, "c")
        delta = as_float(row, "delta")
        regret = as_float(row, "regret")
        by_c.setdefault(c, {}).setdefault(delta, regret)
    series = []
    for c in sorted(by_c):
        cells = by_c[c]
        deltas = sorted(cells)
        series.append(Series(label=f"c = {c:g}",
                             xs=tuple(deltas),
                             ys=tuple(cells[d] for d in deltas)))
    return line_chart(series, title="Worst-case regret against the gap",
                      xlabel="delta", ylabel="regret", ref=ref)


def _gamma_flatness(header, rows, ref) -> str:
    require_columns(header, _SWEEP_COLUMNS, "gamma-flatness")
    require_rows(rows, "gamma-flatness")
    by_cell: dict[tuple[float, float], dict[float, float]] = {}
    for row in rows:
        key = (as_float(row, "c"), as_float(row, "delta"))
        gamma = as_float(row, "gamma")
        by_cell.setdefault(key, {}).setdefault(gamma, as_float(row, "regret"))
    series = []
    for c, delta in sorted(by_cell):
        cells = by_cell[(c, delta)]
        gammas = sorted(cells)
        series.append(Series(label=f"c = {c:g}, delta = {delta:g}",
                             xs=tuple(gammas),
                             ys=tuple(cells[g] for g in gammas)))
    return line_chart(series, title="Prior-weighted regret is flat in the split",
                      xlabel="gamma", ylabel="regret", ref=ref)


def _convergence(header, rows, ref) -> str:
    require_columns(header, _SIMULATE_COLUMNS, "convergence")
    require_rows(rows, "convergence")
    by_gap: dict[float, dict[float, float]] = {}
    for row in rows:
        gap = as_float(row, "gap")
        n = as_float(row, "n")
        if n <= 0:
            raise SchemaError(f"column 'n' must be positive, got {row['n']!r}")
        by_gap.setdefault(gap, {}).setdefault(n, as_float(row, "scaled_regret"))
    series = []
    for gap in sorted(by_gap):
        cells = by_gap[gap]
        ns = sorted(cells)
        series.append(Series(label=f"gap = {gap:g}",
                             xs=tuple(ns),
                             ys=tuple(cells[n] for n in ns)))
    return line_chart(series, title="Scaled regret against the budget",
                      xlabel="n", ylabel="scaled regret", ref=ref, logx=True)
