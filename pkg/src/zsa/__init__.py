"""Numerical toolkit for the zeros of Riemann-zeta partial sums.

Locates complex zeros of the partial sums zeta_n(z) = sum_{k<=n} k^(-z),
their mirrored sums G_n(z) = zeta_n(-z) and pruned sums G_n^*(z), traces
the level curves |G_n^*(z)| = p^x0, and computes the real-part projection
intervals and critical-strip bounds of these families.
"""

from zsa.gdpoly import (
    GeneralizedDirichletPoly,
    last_prime_leq,
    m_star,
    make_g,
    make_g_star,
    make_partial_sum,
    squared_modulus_expansion,
)
from zsa.zerofinder import ComplexZero, Rectangle, find_zeros, winding_number

__version__ = "0.1.0"

__all__ = [
    "GeneralizedDirichletPoly",
    "ComplexZero",
    "Rectangle",
    "find_zeros",
    "winding_number",
    "last_prime_leq",
    "m_star",
    "make_g",
    "make_g_star",
    "make_partial_sum",
    "squared_modulus_expansion",
]
