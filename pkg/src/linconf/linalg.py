"""Exact dense linear algebra over a prime field or the rationals.

Every dimension this package reports is the exact rank of some conditions
matrix, so nothing here is allowed to round.  Two scalar modes exist:

* prime mode -- entries live in F_p, stored in int64 numpy arrays.  The
  default modulus 2**31 - 1 keeps a*b below 2**62 for reduced a, b, so
  vectorized elimination never leaves int64.
* rational mode -- exact `fractions.Fraction` entries; rank is computed by
  fraction-free (Bareiss) elimination on denominator-cleared integer rows,
  which bounds coefficient growth by minors of the input.

Matrices are value-semantic: rank/kernel/solve never mutate their input.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

import numpy as np

DEFAULT_PRIME = 2**31 - 1

# Largest modulus keeping (p-1)**2 < 2**63 during int64 elimination.
_MAX_PRIME = 3_037_000_493

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class LinalgError(ValueError):
    """Base class for exact-linear-algebra usage errors."""


class MixedModeError(LinalgError):
    """Scalars or matrices from different field modes were combined."""


class ShapeError(LinalgError):
    """Operand dimensions are incompatible."""


def is_prime(num: int) -> bool:
    """Deterministic Miller-Rabin, valid for every 64-bit integer."""
    if num < 2:
        return False
    for base in _MR_BASES:
        if num % base == 0:
            return num == base
    d = num - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for base in _MR_BASES:
        x = pow(base, d, num)
        if x == 1 or x == num - 1:
            continue
        for _ in range(s - 1):
            x = x * x % num
            if x == num - 1:
                break
        else:
            return False
    return True


class PrimeField:
    """The field F_p for a prime p small enough for int64 elimination."""

    __slots__ = ("p",)

    def __init__(self, p: int = DEFAULT_PRIME):
        if p > _MAX_PRIME or not is_prime(p):
            raise LinalgError(f"modulus must be a prime <= {_MAX_PRIME}, got {p}")
        self.p = p

    mode = "prime"

    def normalize(self, x) -> int:
        if isinstance(x, Fraction):
            return x.numerator % self.p * self.inv(x.denominator) % self.p
        return int(x) % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in prime field")
        return pow(a, -1, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


class Rationals:
    """Exact rational arithmetic via `fractions.Fraction`."""

    __slots__ = ()

    mode = "rational"

    def normalize(self, x) -> Fraction:
        return Fraction(x)

    def add(self, a, b):
        return Fraction(a) + b

    def sub(self, a, b):
        return Fraction(a) - b

    def mul(self, a, b):
        return Fraction(a) * b

    def neg(self, a):
        return -Fraction(a)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return 1 / Fraction(a)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Rationals")

    def __repr__(self):
        return "Rationals()"


Field = Union[PrimeField, Rationals]

GF_DEFAULT = PrimeField()
QQ = Rationals()


def _prime_echelon(a: np.ndarray, p: int, reduced: bool) -> tuple[np.ndarray, list[int]]:
    """Row echelon form over F_p on a copy; returns (matrix, pivot columns)."""
    a = np.array(a, dtype=np.int64) % p
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        a[r] = a[r] * pow(int(a[r, c]), -1, p) % p
        below = a[r + 1 :, c]
        idx = np.nonzero(below)[0]
        if idx.size:
            a[r + 1 + idx] = (a[r + 1 + idx] - np.outer(below[idx], a[r])) % p
        if reduced and r > 0:
            above = a[:r, c]
            idx = np.nonzero(above)[0]
            if idx.size:
                a[idx] = (a[idx] - np.outer(above[idx], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def _clear_denominators(row: Sequence[Fraction]) -> list[int]:
    lcm = 1
    for x in row:
        d = x.denominator
        if d != 1:
            lcm = lcm * d // _gcd(lcm, d)
    return [int(x * lcm) for x in row]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _bareiss_rank(rows: list[list[int]], ncols: int) -> int:
    """Fraction-free elimination; only exact integer divisions occur."""
    nrows = len(rows)
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pr = next((i for i in range(r, nrows) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        piv = rows[r][c]
        top = rows[r]
        for i in range(r + 1, nrows):
            cur = rows[i]
            f = cur[c]
            for j in range(c, ncols):
                cur[j] = (piv * cur[j] - f * top[j]) // prev
        prev = piv
        r += 1
    return r


def _rational_rref(rows: Sequence[Sequence[Fraction]], ncols: int, reduced: bool) -> tuple[list[list[Fraction]], list[int]]:
    m = [list(row) for row in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        pr = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        span = range(len(m)) if reduced else range(r + 1, len(m))
        for i in span:
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


class ExactMatrix:
    """Immutable dense matrix over a `PrimeField` or the `Rationals`."""

    __slots__ = ("field", "nrows", "ncols", "_a", "_rows", "_rank")

    def __init__(self, rows: Iterable[Sequence], field: Field = GF_DEFAULT, *, ncols: int | None = None):
        self.field = field
        data = [list(r) for r in rows]
        if data:
            width = len(data[0])
            if any(len(r) != width for r in data):
                raise ShapeError("ragged rows")
            if ncols is not None and ncols != width:
                raise ShapeError(f"expected {ncols} columns, got {width}")
            ncols = width
        elif ncols is None:
            ncols = 0
        self.nrows = len(data)
        self.ncols = ncols
        self._rank: int | None = None
        if field.mode == "prime":
            norm = [[field.normalize(x) for x in r] for r in data]
            a = np.array(norm, dtype=np.int64).reshape(self.nrows, ncols)
            a.setflags(write=False)
            self._a = a
            self._rows = None
        else:
            self._a = None
            self._rows = tuple(tuple(field.normalize(x) for x in r) for r in data)

    # -- construction helpers -------------------------------------------------

    @staticmethod
    def identity(k: int, field: Field = GF_DEFAULT) -> "ExactMatrix":
        return ExactMatrix([[1 if i == j else 0 for j in range(k)] for i in range(k)], field)

    @staticmethod
    def zeros(nrows: int, ncols: int, field: Field = GF_DEFAULT) -> "ExactMatrix":
        return ExactMatrix([[0] * ncols for _ in range(nrows)], field, ncols=ncols)

    @staticmethod
    def vstack(mats: Sequence["ExactMatrix"]) -> "ExactMatrix":
        if not mats:
            raise ShapeError("nothing to stack")
        field = mats[0].field
        if any(m.field != field for m in mats):
            raise MixedModeError("cannot stack matrices from different field modes")
        ncols = mats[0].ncols
        if any(m.ncols != ncols for m in mats):
            raise ShapeError("column counts differ")
        rows: list[list] = []
        for m in mats:
            rows.extend(m.rows())
        return ExactMatrix(rows, field, ncols=ncols)

    # -- inspection -----------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def rows(self) -> list[list]:
        if self.field.mode == "prime":
            return [[int(x) for x in row] for row in self._a]
        return [list(row) for row in self._rows]

    def entry(self, i: int, j: int):
        if self.field.mode == "prime":
            return int(self._a[i, j])
        return self._rows[i][j]

    def array(self) -> np.ndarray:
        """Prime mode only: the (read-only) int64 backing array."""
        if self.field.mode != "prime":
            raise MixedModeError("array() is only available in prime mode")
        return self._a

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self.rows() == other.rows()

    __hash__ = None  # mutable-by-construction comparisons only

    def __repr__(self):
        return f"ExactMatrix({self.nrows}x{self.ncols}, {self.field!r})"

    # -- algebra ----------------------------------------------------------------

    def transpose(self) -> "ExactMatrix":
        if self.field.mode == "prime":
            return ExactMatrix(self._a.T.tolist(), self.field, ncols=self.nrows)
        return ExactMatrix(list(zip(*self._rows)) if self._rows else [], self.field, ncols=self.nrows)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.field != other.field:
            raise MixedModeError("cannot multiply matrices from different field modes")
        if self.ncols != other.nrows:
            raise ShapeError("inner dimensions differ")
        a, b = self.rows(), other.rows()
        f = self.field
        out = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = f.normalize(0)
                for k in range(self.ncols):
                    acc = f.add(acc, f.mul(a[i][k], b[k][j]))
                row.append(acc)
            out.append(row)
        return ExactMatrix(out, f, ncols=other.ncols)

    def to_field(self, field: Field) -> "ExactMatrix":
        """Re-normalize the entries in another mode (prime entries lift as
        their canonical nonnegative representatives)."""
        return ExactMatrix(self.rows(), field, ncols=self.ncols)

    # -- rank / kernel / solve ----------------------------------------------------

    def rank(self) -> int:
        if self._rank is None:
            if self.nrows == 0 or self.ncols == 0:
                self._rank = 0
            elif self.field.mode == "prime":
                _, pivots = _prime_echelon(self._a, self.field.p, reduced=False)
                self._rank = len(pivots)
            else:
                ints = [_clear_denominators(r) for r in self._rows]
                self._rank = _bareiss_rank(ints, self.ncols)
        return self._rank

    def kernel_dim(self) -> int:
        return self.ncols - self.rank()

    def kernel_basis(self) -> list[tuple]:
        """Basis of the right kernel {x : A x = 0}, one tuple per free column."""
        if self.nrows == 0 or self.ncols == 0:
            return [tuple(1 if i == j else 0 for i in range(self.ncols)) for j in range(self.ncols)]
        if self.field.mode == "prime":
            p = self.field.p
            red, pivots = _prime_echelon(self._a, p, reduced=True)
            zero, one = 0, 1
            rows = red.tolist()
        else:
            rows, pivots = _rational_rref(self._rows, self.ncols, reduced=True)
            zero, one = Fraction(0), Fraction(1)
        pivot_set = set(pivots)
        basis = []
        for free in range(self.ncols):
            if free in pivot_set:
                continue
            vec = [zero] * self.ncols
            vec[free] = one
            for i, pc in enumerate(pivots):
                val = rows[i][free]
                vec[pc] = -val % self.field.p if self.field.mode == "prime" else -val
            basis.append(tuple(vec))
        return basis

    def _solve_block(self, rhs_rows: list[list]):
        """Reduced echelon of [A | B]; returns X with A X = B, or None."""
        f = self.field
        aug = [row + list(extra) for row, extra in zip(self.rows(), rhs_rows)]
        width = len(rhs_rows[0]) if rhs_rows else 0
        total = self.ncols + width
        if self.nrows == 0:
            return [[f.normalize(0)] * width for _ in range(self.ncols)]
        if f.mode == "prime":
            red, pivots = _prime_echelon(np.array(aug, dtype=np.int64), f.p, reduced=True)
            red = red.tolist()
        else:
            red, pivots = _rational_rref([[Fraction(x) for x in r] for r in aug], total, reduced=True)
        if any(pc >= self.ncols for pc in pivots):
            return None
        x = [[f.normalize(0)] * width for _ in range(self.ncols)]
        for i, pc in enumerate(pivots):
            for j in range(width):
                x[pc][j] = red[i][self.ncols + j]
        return x

    def solve(self, b: Sequence):
        """One solution x of A x = b, or None when the system is inconsistent."""
        if len(b) != self.nrows:
            raise ShapeError("right-hand side length differs from row count")
        f = self.field
        x = self._solve_block([[f.normalize(v)] for v in b])
        if x is None:
            return None
        return tuple(row[0] for row in x)

    def solve_multi(self, b_columns: Sequence[Sequence]):
        """Solve A X = B for B given by columns; returns X's columns or None."""
        f = self.field
        if any(len(col) != self.nrows for col in b_columns):
            raise ShapeError("right-hand side length differs from row count")
        rhs_rows = [[f.normalize(col[i]) for col in b_columns] for i in range(self.nrows)]
        x = self._solve_block(rhs_rows)
        if x is None:
            return None
        return [tuple(x[i][j] for i in range(self.ncols)) for j in range(len(b_columns))]

    def rref(self) -> tuple[list[list], list[int]]:
        """Reduced row echelon form (copy) and its pivot columns."""
        if self.nrows == 0 or self.ncols == 0:
            return [], []
        if self.field.mode == "prime":
            red, pivots = _prime_echelon(self._a, self.field.p, reduced=True)
            return red.tolist(), pivots
        red, pivots = _rational_rref(self._rows, self.ncols, reduced=True)
        return red, pivots


def rank(matrix: ExactMatrix) -> int:
    return matrix.rank()


def kernel_dim(matrix: ExactMatrix) -> int:
    return matrix.kernel_dim()


def solve(matrix: ExactMatrix, b: Sequence):
    return matrix.solve(b)


class RowReducer:
    """Incremental exact rank over F_p.

    Keeps a reduced row-echelon basis so the running rank is available after
    every block of appended rows.  This is what makes the line-count sweeps
    cheap: one pass over s = 0..s_max costs the same as a single elimination
    of the full stacked matrix.
    """

    def __init__(self, ncols: int, field: PrimeField = GF_DEFAULT):
        if field.mode != "prime":
            raise MixedModeError("RowReducer only supports prime mode")
        self.field = field
        self.ncols = ncols
        self._basis = np.zeros((ncols, ncols), dtype=np.int64)
        self._pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def add_rows(self, rows) -> int:
        """Reduce and absorb a block of rows; returns the new rank."""
        p = self.field.p
        block = np.array(rows, dtype=np.int64).reshape(-1, self.ncols) % p
        basis = self._basis
        for i, pc in enumerate(self._pivots):
            col = block[:, pc]
            idx = np.nonzero(col)[0]
            if idx.size:
                block[idx] = (block[idx] - np.outer(col[idx], basis[i])) % p
        for k in range(block.shape[0]):
            if self.rank == self.ncols:
                break
            row = block[k]
            nz = np.nonzero(row)[0]
            if nz.size == 0:
                continue
            pc = int(nz[0])
            row = row * pow(int(row[pc]), -1, p) % p
            r = self.rank
            if r:
                col = basis[:r, pc]
                idx = np.nonzero(col)[0]
                if idx.size:
                    basis[idx] = (basis[idx] - np.outer(col[idx], row)) % p
            rest = block[k + 1 :, pc]
            idx = np.nonzero(rest)[0]
            if idx.size:
                block[k + 1 + idx] = (block[k + 1 + idx] - np.outer(rest[idx], row)) % p
            basis[r] = row
            self._pivots.append(pc)
        return self.rank
