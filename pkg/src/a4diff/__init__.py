"""Exact decomposition of holomorphic differentials for Klein-four and A4
covers of the projective line in characteristic 2."""

__version__ = "0.1.0"
