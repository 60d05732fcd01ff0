"""Exact computational algebra for graded block algebras and their
diagonal algebras, with machine-checked equivalence certificates."""

from .field import GF, FiniteField

__all__ = ["GF", "FiniteField"]

__version__ = "0.1.0"
