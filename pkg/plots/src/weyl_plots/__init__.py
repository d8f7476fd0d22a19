"""Static comparison figures for elastic-weyl counting tables."""

from .render import FigureSpec, SchemaError, render

__all__ = ["FigureSpec", "SchemaError", "render"]
