"""Figure renderer for p-value meta-distribution CSV tables.

A pure consumer of the table file contract: each figure id expects a
fixed column schema, renders deterministically (fixed canvas, no
timestamps), and fails hard on schema mismatches.
"""

__version__ = "0.1.0"

from .render import FigureSpec, RenderResult, SchemaError, render

__all__ = ["FigureSpec", "RenderResult", "SchemaError", "render", "__version__"]
