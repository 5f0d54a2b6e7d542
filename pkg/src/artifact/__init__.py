"""Solvable factors of classical groups with a nonsingular-point or
elliptic-quadric stabilizer: finite fields, GammaL_1 subgroups, linearized
polynomial modules, polar-space actions and factorization deciders.
"""

__version__ = "0.1.0"
