"""Trigonometric KZ connections from classical r-matrices of Lie superbialgebras."""

__version__ = "0.1.0"
