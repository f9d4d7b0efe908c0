"""Exact desk-scale arithmetic of divisors, Brauer classes, symbol families,
class sets and quadratic descent over Q, F_p(t), Q(t) and Q(sqrt(d))."""

__version__ = "0.1.0"
