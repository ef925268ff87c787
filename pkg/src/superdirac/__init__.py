"""Exact rational Dirac-operator computations for Lie superalgebras of type
A(m|n) with real form su(p,q|n)."""

__version__ = "0.1.0"
