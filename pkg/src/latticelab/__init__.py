"""Finite lattices, polynomial clones and order-polynomial completeness."""

__version__ = "0.1.0"
