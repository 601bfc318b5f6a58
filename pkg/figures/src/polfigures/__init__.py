"""Batch plotting for pulsepol CSV outputs."""

from .render import KINDS, FigureError, FigureSpec, render

__version__ = "0.1.0"
