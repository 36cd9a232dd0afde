"""Exact models of the finite linearly reductive subgroups of SL2, their
invariant rings, McKay graphs and the twisted rational double point equations."""

__version__ = "0.1.0"
