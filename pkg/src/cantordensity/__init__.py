"""Exact measure and density computations on Cantor space.

The package computes with certified rational bounds throughout: clopen
sets carry exact measures, tree-built compact sets carry interval
oracles, and the density behavior of a point in a set is classified
from finite, certified information only.
"""

__version__ = "0.1.0"
