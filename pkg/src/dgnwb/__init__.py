"""Exact machinery for modular character correspondences over finite fields.

Submodules build on each other roughly in this order: groups, fields,
matrices, reps, brauer, galgebra, triples, bijection, fixtures, cli.
"""

__version__ = "0.1.0"
