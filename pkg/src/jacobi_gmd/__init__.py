"""Exact Gauss-Manin connection, modular vector fields and Jacobi-form q-expansions
for elliptic curves with two marked points."""

__version__ = "0.1.0"
