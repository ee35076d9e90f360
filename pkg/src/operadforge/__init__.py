"""Exact computations with operads over categories of decorated graphs.

The package builds free operads on generator collections indexed by graphs
(or by surjections of finite ordinals), forms quadratic presentations and
their duals, runs the cobar construction with explicit signs, and certifies
Koszulity of the terminal operads by computing rational homology exactly.
"""

__version__ = "0.1.0"
