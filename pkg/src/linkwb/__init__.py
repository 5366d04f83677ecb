"""Linkage workbench: linkage of modules over graded quotient rings."""

__version__ = "0.1.0"
