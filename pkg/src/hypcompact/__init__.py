"""Differentiable compactifications of the isometric SO0(n,1) action on the ball."""

__version__ = "0.1.0"
