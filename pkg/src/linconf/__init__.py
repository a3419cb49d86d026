"""Exact Hilbert functions of generic configurations of linear subspaces.

The engine computes, over a large prime field (or exactly over the
rationals), the number of independent conditions that a union of linear
spaces, points, jet points, degenerate conics, and sundials imposes on the
degree-d forms of projective n-space.
"""

from .linalg import (
    DEFAULT_PRIME,
    ExactMatrix,
    GF_DEFAULT,
    LinalgError,
    MixedModeError,
    PrimeField,
    QQ,
    Rationals,
    RowReducer,
    ShapeError,
)

__version__ = "0.1.0"
