"""Exact projective linear algebra: points, subspaces, generic sampling.

"Generic" is realized by uniform random coordinates drawn from a seeded
stream.  Any rank computed from such a sample is a lower bound for the
true generic rank (special positions can only lose conditions), and at the
default modulus a drop is improbable; the postulation layer additionally
takes the maximum over independent trials and flags disagreement.

Samplers are explicit values.  `split(label)` derives an independent
deterministic child stream, so grid sweeps can give every cell its own
sampler regardless of execution order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dfield
from functools import cached_property
from hashlib import blake2b
from typing import Iterable, Sequence, Union

from .linalg import ExactMatrix, Field, GF_DEFAULT, PrimeField

DEFAULT_SEED = 1729

# Rational-mode coordinates stay small so Bareiss minors stay manageable.
_RATIONAL_COORD_RANGE = 1 << 16


class GeometryError(ValueError):
    """Base class for projective-geometry usage errors."""


class AmbientMismatch(GeometryError):
    """Objects from different ambient projective spaces were combined."""


class ImproperIntersection(GeometryError):
    """The object is contained in the hyperplane; the section is improper."""


class EmptyIntersection(GeometryError):
    """A point off the hyperplane has empty hyperplane section."""


class NotContained(GeometryError):
    """Reparametrization requested for an object not inside the hyperplane."""


class ProjPoint:
    """Point of P^n, canonicalized so its first nonzero coordinate is 1."""

    __slots__ = ("coords", "field")

    def __init__(self, coords: Sequence, field: Field = GF_DEFAULT):
        vals = [field.normalize(x) for x in coords]
        lead = next((v for v in vals if v), None)
        if lead is None:
            raise GeometryError("the zero vector is not a projective point")
        inv = field.inv(lead)
        self.coords = tuple(field.mul(inv, v) for v in vals)
        self.field = field

    @property
    def ambient_dim(self) -> int:
        return len(self.coords) - 1

    def __eq__(self, other):
        return (
            isinstance(other, ProjPoint)
            and self.field == other.field
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((self.field, self.coords))

    def __repr__(self):
        return f"ProjPoint({list(self.coords)})"


class Subspace:
    """Linear subvariety of P^n given by a full-column-rank parametrization.

    `param` has n+1 rows and m+1 columns; the columns span the affine cone.
    Two subspaces are equal iff their column spans coincide (compared via
    the reduced column echelon form).
    """

    __slots__ = ("param", "field", "__dict__")

    def __init__(self, param: Sequence[Sequence], field: Field = GF_DEFAULT):
        mat = ExactMatrix(param, field)
        if mat.nrows == 0 or mat.ncols == 0:
            raise GeometryError("empty parametrization")
        if mat.ncols > mat.nrows or mat.rank() != mat.ncols:
            raise GeometryError(
                f"parametrization {mat.nrows}x{mat.ncols} is rank-deficient"
            )
        self.param = tuple(tuple(row) for row in mat.rows())
        self.field = field

    @property
    def ambient_dim(self) -> int:
        return len(self.param) - 1

    @property
    def dim(self) -> int:
        return len(self.param[0]) - 1

    @cached_property
    def matrix(self) -> ExactMatrix:
        return ExactMatrix(self.param, self.field)

    @cached_property
    def canonical(self) -> tuple:
        """Reduced column echelon form of the parametrization."""
        rows, _ = self.matrix.transpose().rref()
        keep = [r for r in rows if any(r)]
        return tuple(zip(*keep))

    def columns(self) -> list[tuple]:
        return [tuple(row[j] for row in self.param) for j in range(self.dim + 1)]

    def point(self) -> ProjPoint:
        if self.dim != 0:
            raise GeometryError("only 0-dimensional subspaces convert to points")
        return ProjPoint(self.columns()[0], self.field)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.field == other.field
            and self.ambient_dim == other.ambient_dim
            and self.canonical == other.canonical
        )

    def __hash__(self):
        return hash((self.field, self.ambient_dim, self.canonical))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


LinearObject = Union[Subspace, ProjPoint]


class GenericSampler:
    """Deterministic source of generic field elements.

    The same (seed, field) always produces the same draw stream;
    `split(*labels)` derives an independent child sampler from the seed and
    the labels alone, never advancing the parent's stream.
    """

    __slots__ = ("seed", "field", "_rng")

    def __init__(self, seed: int = DEFAULT_SEED, field: Field = GF_DEFAULT):
        self.seed = int(seed)
        self.field = field
        self._rng = None

    def split(self, *labels) -> "GenericSampler":
        key = ":".join([str(self.seed), *map(str, labels)]).encode()
        child = int.from_bytes(blake2b(key, digest_size=8).digest(), "big")
        return GenericSampler(child, self.field)

    def _random(self) -> random.Random:
        if self._rng is None:
            self._rng = random.Random(self.seed)
        return self._rng

    def element(self) -> int:
        rng = self._random()
        if isinstance(self.field, PrimeField):
            return rng.randrange(self.field.p)
        return rng.randrange(_RATIONAL_COORD_RANGE)

    def vector(self, k: int) -> tuple[int, ...]:
        return tuple(self.element() for _ in range(k))

    def nonzero_vector(self, k: int) -> tuple[int, ...]:
        while True:
            v = self.vector(k)
            if any(v):
                return v

    def matrix(self, nrows: int, ncols: int) -> list[tuple[int, ...]]:
        return [self.vector(ncols) for _ in range(nrows)]

    def __repr__(self):
        return f"GenericSampler(seed={self.seed}, field={self.field!r})"


def _check_ambient(a, b):
    if a.ambient_dim != b.ambient_dim:
        raise AmbientMismatch(
            f"ambient dimensions differ: {a.ambient_dim} vs {b.ambient_dim}"
        )


def random_point(sampler: GenericSampler, n: int) -> ProjPoint:
    return ProjPoint(sampler.nonzero_vector(n + 1), sampler.field)


def random_subspace(sampler: GenericSampler, n: int, m: int) -> Subspace:
    """Uniformly sampled m-dimensional subspace of P^n (resampled to full rank)."""
    if not 0 <= m <= n:
        raise GeometryError(f"dimension {m} out of range for P^{n}")
    while True:
        cand = sampler.matrix(n + 1, m + 1)
        if ExactMatrix(cand, sampler.field).rank() == m + 1:
            return Subspace(cand, sampler.field)


def random_point_on(sampler: GenericSampler, space: Subspace) -> ProjPoint:
    coeffs = sampler.nonzero_vector(space.dim + 1)
    col = (space.matrix @ ExactMatrix([[c] for c in coeffs], space.field)).rows()
    return ProjPoint([r[0] for r in col], space.field)


def random_subspace_in(sampler: GenericSampler, space: Subspace, m: int) -> Subspace:
    """Generic m-dimensional subspace inside `space` (a specialization draw)."""
    if not 0 <= m <= space.dim:
        raise GeometryError(f"dimension {m} does not fit inside dim {space.dim}")
    while True:
        coeffs = sampler.matrix(space.dim + 1, m + 1)
        cand = (space.matrix @ ExactMatrix(coeffs, space.field)).rows()
        if ExactMatrix(cand, space.field).rank() == m + 1:
            return Subspace(cand, space.field)


def random_line_through(
    sampler: GenericSampler,
    point: ProjPoint,
    *,
    inside: Subspace | None = None,
    avoid: Subspace | None = None,
) -> Subspace:
    """Generic line through `point`, optionally inside one subspace and not
    contained in another (guaranteed by keeping the second spanning point
    off `avoid`)."""
    n = point.ambient_dim
    while True:
        if inside is not None:
            other = random_point_on(sampler, inside)
        else:
            other = random_point(sampler, n)
        if avoid is not None and contains(avoid, other):
            continue
        cand = [[pc, oc] for pc, oc in zip(point.coords, other.coords)]
        if ExactMatrix(cand, point.field).rank() == 2:
            return Subspace(cand, point.field)


def contains(space: Subspace, point: ProjPoint) -> bool:
    _check_ambient(space, point)
    return space.matrix.solve(point.coords) is not None


def contains_sub(space: Subspace, other: Subspace) -> bool:
    _check_ambient(space, other)
    return space.matrix.solve_multi(other.columns()) is not None


def span(objects: Sequence[LinearObject]) -> Subspace:
    """Smallest subspace containing every input point/subspace."""
    if not objects:
        raise GeometryError("span of an empty collection")
    first = objects[0]
    field = first.field
    cols: list[tuple] = []
    for obj in objects:
        _check_ambient(first, obj)
        if isinstance(obj, ProjPoint):
            cols.append(obj.coords)
        else:
            cols.extend(obj.columns())
    rows, _ = ExactMatrix(cols, field).rref()
    basis = [r for r in rows if any(r)]
    return Subspace(list(zip(*basis)), field)


def hyperplane_normal(hyp: Subspace) -> tuple:
    """The linear functional (up to scale) vanishing on the hyperplane."""
    if hyp.dim != hyp.ambient_dim - 1:
        raise GeometryError("normal vector requested for a non-hyperplane")
    kernel = hyp.matrix.transpose().kernel_basis()
    return kernel[0]


def intersect_hyperplane(space: Subspace, hyp: Subspace) -> Subspace:
    """The section of `space` by a hyperplane not containing it."""
    _check_ambient(space, hyp)
    if contains_sub(hyp, space):
        raise ImproperIntersection("the subspace lies inside the hyperplane")
    if space.dim == 0:
        raise EmptyIntersection("point off the hyperplane")
    normal = hyperplane_normal(hyp)
    f = space.field
    row = []
    for j in range(space.dim + 1):
        acc = f.normalize(0)
        for i in range(space.ambient_dim + 1):
            acc = f.add(acc, f.mul(normal[i], space.param[i][j]))
        row.append(acc)
    kernel = ExactMatrix([row], f).kernel_basis()
    coeffs = ExactMatrix([[vec[i] for vec in kernel] for i in range(space.dim + 1)], f)
    return Subspace((space.matrix @ coeffs).rows(), f)


def in_hyperplane_coords(obj: LinearObject, hyp: Subspace) -> LinearObject:
    """Rewrite an object contained in `hyp` in the hyperplane's own coordinates.

    Factoring param = hyp.param * param' makes restriction matrices computed
    through the factorization compose with the hyperplane's own restriction.
    """
    _check_ambient(obj, hyp)
    if isinstance(obj, ProjPoint):
        sol = hyp.matrix.solve(obj.coords)
        if sol is None:
            raise NotContained("point does not lie on the hyperplane")
        return ProjPoint(sol, obj.field)
    cols = hyp.matrix.solve_multi(obj.columns())
    if cols is None:
        raise NotContained("subspace does not lie inside the hyperplane")
    param = [[col[i] for col in cols] for i in range(hyp.dim + 1)]
    return Subspace(param, obj.field)
