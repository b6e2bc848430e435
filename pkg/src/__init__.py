"""Ternary Grassmann engine: the Z3-graded algebra G_3, its Hilbert scale and Grassmann-valued processes."""

__version__ = "0.1.0"
