"""Exact commutative algebra: Groebner bases, Zariski covers and Cech cohomology."""
