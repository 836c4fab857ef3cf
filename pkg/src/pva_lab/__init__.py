"""Exact symbolic toolkit for two-component Poisson vertex algebras in two space dimensions."""

__version__ = "0.1.0"
