"""Exact Jordan decompositions in Lie algebras and dual Lie algebras of
classical groups over small finite fields."""

__version__ = "0.1.0"
