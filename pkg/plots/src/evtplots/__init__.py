"""Batch figure rendering for evtmodes run directories.

Reads the run manifest and the CSV/JSON artifacts it lists, and renders
the standard figure set as deterministic PNG files. Rendering never
computes statistics: every plotted number exists verbatim in the
artifacts.
"""

from .render import FIGURE_KINDS, FigureSpec, discover, render

__version__ = "0.1.0"
