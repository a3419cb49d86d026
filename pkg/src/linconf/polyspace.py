"""Degree-d monomial spaces and the condition rows built from them.

The canonical monomial order everywhere is graded lex with x0 > x1 > ...;
within one total degree the exponent vectors are enumerated in descending
lex order, so x0^d comes first and xn^d last.  Serialized reports assume
this order.

Three row factories cover every component kind downstream:

* `restriction_matrix`  -- substitute a linear parametrization into every
  degree-d monomial; the kernel of the resulting map is the degree-d slice
  of the subspace's ideal.
* `evaluation_row`      -- vanishing at a single point.
* `directional_derivative_row` -- first-order vanishing at a point in one
  direction (the building block of jet points).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .linalg import ExactMatrix, Field, GF_DEFAULT, PrimeField


class PolyspaceError(ValueError):
    """Base class for monomial-space usage errors."""


class DegenerateParametrization(PolyspaceError):
    """A parametrization matrix without full column rank was supplied."""


class ZeroPoint(PolyspaceError):
    """The zero vector is not a projective point."""


class UnsupportedDegree(PolyspaceError):
    """The requested degree is outside the operation's domain."""


def monomial_count(nvars: int, degree: int) -> int:
    """Number of degree-`degree` monomials in `nvars` variables."""
    if nvars < 1:
        raise PolyspaceError(f"need at least one variable, got {nvars}")
    if degree < 0:
        raise PolyspaceError(f"degree must be nonnegative, got {degree}")
    return math.comb(nvars - 1 + degree, degree)


def _gen_exponents(nvars: int, degree: int):
    if nvars == 1:
        yield (degree,)
        return
    for lead in range(degree, -1, -1):
        for rest in _gen_exponents(nvars - 1, degree - lead):
            yield (lead,) + rest


class MonomialBasis:
    """Ordered exponent vectors of one total degree in a fixed variable count."""

    __slots__ = ("nvars", "degree", "exponents", "_index")

    def __init__(self, nvars: int, degree: int):
        self.nvars = nvars
        self.degree = degree
        self.exponents = tuple(_gen_exponents(nvars, degree))
        self._index = {e: i for i, e in enumerate(self.exponents)}

    def index_of(self, exponent: tuple[int, ...]) -> int:
        return self._index[exponent]

    def __len__(self) -> int:
        return len(self.exponents)

    def __repr__(self):
        return f"MonomialBasis(nvars={self.nvars}, degree={self.degree})"


@lru_cache(maxsize=None)
def monomial_basis(nvars: int, degree: int) -> MonomialBasis:
    if nvars < 1 or degree < 0:
        raise PolyspaceError(f"invalid basis parameters ({nvars}, {degree})")
    return MonomialBasis(nvars, degree)


@dataclass(frozen=True)
class DensePoly:
    """Homogeneous polynomial as a dense coefficient vector over a basis."""

    basis: MonomialBasis
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != len(self.basis):
            raise PolyspaceError("coefficient vector does not match the basis size")


@lru_cache(maxsize=None)
def _raise_index(nvars: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """For each variable j: index map basis(degree) -> basis(degree + 1)
    under multiplication by that variable."""
    src = monomial_basis(nvars, degree)
    dst = monomial_basis(nvars, degree + 1)
    tables = []
    for j in range(nvars):
        table = []
        for expo in src.exponents:
            lifted = list(expo)
            lifted[j] += 1
            table.append(dst.index_of(tuple(lifted)))
        tables.append(tuple(table))
    return tuple(tables)


def _first_support(expo: tuple[int, ...]) -> int:
    for i, e in enumerate(expo):
        if e:
            return i
    raise PolyspaceError("zero exponent vector has no support")


def substitution_matrix(forms: Sequence[Sequence], degree: int, field: Field = GF_DEFAULT) -> ExactMatrix:
    """Expand every degree-d monomial in the given linear forms.

    `forms` are t linear forms over k target variables (each a length-k
    coefficient vector).  Row i is the expansion, in the k-variable degree-d
    basis, of the i-th monomial of the t-variable degree-d basis evaluated
    at the forms.  Shape: C(t-1+d, d) x C(k-1+d, d).
    """
    if not forms:
        raise PolyspaceError("need at least one form")
    nforms = [[field.normalize(x) for x in f] for f in forms]
    t = len(nforms)
    k = len(nforms[0])
    if any(len(f) != k for f in nforms):
        raise PolyspaceError("forms have inconsistent lengths")
    prime = isinstance(field, PrimeField)
    p = field.p if prime else 0
    zero = 0 if prime else Fraction(0)
    support = [[(j, c) for j, c in enumerate(f) if c] for f in nforms]

    layer = [[field.normalize(1)]]
    for deg in range(1, degree + 1):
        src_basis = monomial_basis(t, deg - 1)
        cur_basis = monomial_basis(t, deg)
        raise_tab = _raise_index(k, deg - 1)
        width = monomial_count(k, deg)
        cur: list[list] = [None] * len(cur_basis)
        for idx, expo in enumerate(cur_basis.exponents):
            i = _first_support(expo)
            lowered = list(expo)
            lowered[i] -= 1
            prev = layer[src_basis.index_of(tuple(lowered))]
            out = [zero] * width
            if prime:
                for s, cval in enumerate(prev):
                    if cval:
                        for j, fj in support[i]:
                            d_idx = raise_tab[j][s]
                            out[d_idx] = (out[d_idx] + cval * fj) % p
            else:
                for s, cval in enumerate(prev):
                    if cval:
                        for j, fj in support[i]:
                            d_idx = raise_tab[j][s]
                            out[d_idx] = out[d_idx] + cval * fj
            cur[idx] = out
        layer = cur
    return ExactMatrix(layer, field, ncols=monomial_count(k, degree))


def restriction_matrix(param: Sequence[Sequence], degree: int, field: Field = GF_DEFAULT) -> ExactMatrix:
    """Matrix of "substitute the parametrization" on degree-d forms.

    `param` is the (n+1) x (m+1) parametrization of an m-dimensional linear
    subspace of P^n; the returned C(m+d,d) x C(n+d,d) matrix sends an
    ambient degree-d form to its restriction, expanded in the subspace's
    own coordinates.  Its kernel dimension is dim (I_subspace)_d.
    """
    mat = ExactMatrix(param, field)
    if mat.ncols > mat.nrows or mat.rank() != mat.ncols:
        raise DegenerateParametrization(
            f"parametrization {mat.nrows}x{mat.ncols} does not have full column rank"
        )
    return substitution_matrix(mat.rows(), degree, field).transpose()


def _value_layers(coords: Sequence, degree: int, field: Field) -> list[list]:
    """Monomial values coords^alpha for every degree 0..degree."""
    vals = [field.normalize(x) for x in coords]
    if not any(vals):
        raise ZeroPoint("all coordinates vanish")
    nvars = len(vals)
    prime = isinstance(field, PrimeField)
    p = field.p if prime else 0
    layers = [[field.normalize(1)]]
    for deg in range(1, degree + 1):
        src_basis = monomial_basis(nvars, deg - 1)
        cur_basis = monomial_basis(nvars, deg)
        prev = layers[-1]
        cur = []
        for expo in cur_basis.exponents:
            i = _first_support(expo)
            lowered = list(expo)
            lowered[i] -= 1
            v = prev[src_basis.index_of(tuple(lowered))] * vals[i]
            cur.append(v % p if prime else v)
        layers.append(cur)
    return layers


def evaluation_row(coords: Sequence, degree: int, field: Field = GF_DEFAULT) -> tuple:
    """Row of all degree-d monomials evaluated at the point."""
    return tuple(_value_layers(coords, degree, field)[degree])


def directional_derivative_row(point: Sequence, direction: Sequence, degree: int, field: Field = GF_DEFAULT) -> tuple:
    """Row of the degree-d monomials' derivatives along `direction` at `point`.

    Entry for exponent alpha is sum_i alpha_i * direction_i * point^(alpha - e_i);
    with direction = point this is degree * evaluation_row(point) (Euler).
    """
    if degree < 1:
        raise UnsupportedDegree("directional derivatives need degree >= 1")
    q = [field.normalize(x) for x in direction]
    if not any(q):
        raise ZeroPoint("zero direction vector")
    layers = _value_layers(point, degree - 1, field)
    prev_basis = monomial_basis(len(q), degree - 1)
    prev = layers[degree - 1]
    prime = isinstance(field, PrimeField)
    p = field.p if prime else 0
    row = []
    for expo in monomial_basis(len(q), degree).exponents:
        acc = 0 if prime else Fraction(0)
        for i, e in enumerate(expo):
            if e and q[i]:
                lowered = list(expo)
                lowered[i] -= 1
                term = e * q[i] * prev[prev_basis.index_of(tuple(lowered))]
                acc = (acc + term) % p if prime else acc + term
        row.append(acc)
    return tuple(row)
