"""Deterministic SVG figures rendered from minimax-bai CSV output.

The plotter never recomputes statistics; it is a pure view of the CLI's
files.  Output is plain SVG text built with fixed styling and no timestamps,
so rendering the same CSV twice produces byte-identical files.
"""

__version__ = "0.1.0"

from .render import KINDS, PlotJob, SchemaError, render

__all__ = ["KINDS", "PlotJob", "SchemaError", "render", "__version__"]
