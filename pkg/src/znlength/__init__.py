"""Z^n-valued hyperbolic length functions on finitely generated groups."""

__version__ = "0.1.0"
