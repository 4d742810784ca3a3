"""Nilpotent groups and Lie algebras from Hessian determinantal representations
of elliptic curves over finite fields: construction, automorphism-group orders
with brute-force certification, isomorphism testing, and prime scans."""

__version__ = "0.1.0"
