"""Exact computations with admissible pairs, carpets and carpet subgroups of Chevalley groups."""

__version__ = "0.1.0"
