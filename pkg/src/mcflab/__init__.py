"""mcflab: a numerical laboratory for mean curvature flow."""

__version__ = "0.1.0"
