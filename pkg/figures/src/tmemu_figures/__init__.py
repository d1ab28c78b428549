"""Figure rendering for tmemu experiment CSV outputs."""

from .render import FigureError, FigureSpec, boxplot_stats, median, render

__version__ = "0.1.0"
