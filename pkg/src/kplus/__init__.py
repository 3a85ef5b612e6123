"""Toolkit for the bimodal logic of transitive closure and its justification counterpart.

Subpackages: formula syntax, finite Kripke semantics, the cyclic-proof
decision engine, proof annotation, the justification Hilbert kernel, and the
realization pipeline.
"""

__version__ = "0.1.0"
