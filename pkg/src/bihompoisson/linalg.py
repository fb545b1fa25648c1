"""Exact linear algebra over the rationals.

Vectors are tuples of scalars, matrices immutable row-major grids, and
subspaces carry a canonical reduced-row-echelon basis so two equal
subspaces have bit-identical bases.  Everything is pure and immutable;
values can be shared freely between threads.

Eigenvalues are found by factoring characteristic polynomials through
rational-root search, which is complete at the dimensions this package
targets (a few dozen); an irrational spectrum raises
:class:`~bihompoisson.errors.NonRationalSpectrum` instead of being
approximated.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import AmbientMismatch, DimensionMismatch, NonRationalSpectrum, Singular
from .scalar import ONE, ZERO, Scalar, rat

Vector = tuple[Scalar, ...]


# ---------------------------------------------------------------------------
# vectors


def vector(values: Iterable) -> Vector:
    return tuple(rat(v) for v in values)


def zero_vector(n: int) -> Vector:
    return (ZERO,) * n


def unit_vector(n: int, i: int) -> Vector:
    return tuple(ONE if j == i else ZERO for j in range(n))


def add_vectors(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub_vectors(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def scale_vector(c: Scalar, v: Vector) -> Vector:
    return tuple(c * a for a in v)


def negate_vector(v: Vector) -> Vector:
    return tuple(-a for a in v)


def is_zero_vector(v: Vector) -> bool:
    return all(a == 0 for a in v)


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class Matrix:
    """Dense immutable matrix of scalars, row-major."""

    rows: tuple[Vector, ...]
    ncols: int

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], ncols: int | None = None) -> "Matrix":
        coerced = tuple(vector(r) for r in rows)
        if coerced:
            ncols = len(coerced[0])
            if any(len(r) != ncols for r in coerced):
                raise DimensionMismatch("ragged rows")
        elif ncols is None:
            ncols = 0
        return cls(coerced, ncols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(tuple(unit_vector(n, i) for i in range(n)), n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        return cls(tuple(zero_vector(ncols) for _ in range(nrows)), ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def entry(self, i: int, j: int) -> Scalar:
        return self.rows[i][j]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def transpose(self) -> "Matrix":
        if not self.rows:
            return Matrix(((),) * self.ncols if self.ncols else (), 0)
        return Matrix(tuple(zip(*self.rows)), self.nrows)

    def apply(self, v: Vector) -> Vector:
        """Matrix-vector product ``M @ v`` (``v`` read as a column)."""
        if len(v) != self.ncols:
            raise DimensionMismatch(f"expected length {self.ncols}, got {len(v)}")
        out = []
        for row in self.rows:
            acc = ZERO
            for a, b in zip(row, v):
                if a and b:
                    acc += a * b
            out.append(acc)
        return tuple(out)

    def left_apply(self, v: Vector) -> Vector:
        """Row-vector product ``v @ M``."""
        if len(v) != self.nrows:
            raise DimensionMismatch(f"expected length {self.nrows}, got {len(v)}")
        out = [ZERO] * self.ncols
        for a, row in zip(v, self.rows):
            if not a:
                continue
            for j, b in enumerate(row):
                if b:
                    out[j] += a * b
        return tuple(out)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise DimensionMismatch("inner dimensions differ")
        cols = [other.column(j) for j in range(other.ncols)]
        rows = tuple(
            tuple(sum((a * b for a, b in zip(row, col) if a and b), ZERO) for col in cols)
            for row in self.rows
        )
        return Matrix(rows, other.ncols)

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise DimensionMismatch("shapes differ")
        return Matrix(tuple(add_vectors(a, b) for a, b in zip(self.rows, other.rows)), self.ncols)

    def scale(self, c: Scalar) -> "Matrix":
        return Matrix(tuple(scale_vector(c, r) for r in self.rows), self.ncols)

    def shifted(self, lam: Scalar) -> "Matrix":
        """``M - lam * I`` for eigen computations."""
        if not self.is_square:
            raise DimensionMismatch("shift needs a square matrix")
        rows = tuple(
            tuple(e - lam if i == j else e for j, e in enumerate(row))
            for i, row in enumerate(self.rows)
        )
        return Matrix(rows, self.ncols)

    def trace(self) -> Scalar:
        if not self.is_square:
            raise DimensionMismatch("trace needs a square matrix")
        return sum((self.rows[i][i] for i in range(self.nrows)), ZERO)

    def rank(self) -> int:
        return len(rref(self)[1])

    @property
    def is_invertible(self) -> bool:
        return self.is_square and self.rank() == self.ncols

    def inverse(self) -> "Matrix":
        if not self.is_square:
            raise Singular("only square matrices can be inverted")
        n = self.ncols
        work = [list(row) + list(unit_vector(n, i)) for i, row in enumerate(self.rows)]
        reduced, pivots = _row_reduce(work)
        if list(pivots[:n]) != list(range(n)):
            raise Singular("matrix is singular")
        rows = tuple(tuple(r[n:]) for r in reduced[:n])
        return Matrix(rows, n)


# ---------------------------------------------------------------------------
# row reduction


def _row_reduce(rows: list[list[Scalar]]) -> tuple[list[list[Scalar]], list[int]]:
    """In-place Gauss-Jordan elimination; returns the rows and pivot columns."""
    if not rows:
        return rows, []
    nrows, ncols = len(rows), len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = 1 / rows[r][c]
        if inv != 1:
            rows[r] = [e * inv for e in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def rref(m: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form and its pivot columns."""
    work = [list(r) for r in m.rows]
    reduced, pivots = _row_reduce(work)
    return Matrix(tuple(tuple(r) for r in reduced), m.ncols), tuple(pivots)


def kernel(m: Matrix) -> "Subspace":
    """Canonical basis of the right kernel ``{v : m @ v = 0}``."""
    reduced, pivots = rref(m)
    free = [c for c in range(m.ncols) if c not in pivots]
    vectors = []
    for c in free:
        v = [ZERO] * m.ncols
        v[c] = ONE
        for i, p in enumerate(pivots):
            v[p] = -reduced.rows[i][c]
        vectors.append(tuple(v))
    return Subspace.from_vectors(m.ncols, vectors)


def rref_and_kernel(m: Matrix) -> tuple[Matrix, "Subspace"]:
    """The unique RREF together with the kernel; rank + kernel dim = ncols."""
    return rref(m)[0], kernel(m)


# ---------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True)
class Subspace:
    """Row space with a canonical RREF basis; equality is syntactic."""

    ambient_dim: int
    basis: tuple[Vector, ...]

    @classmethod
    def from_vectors(cls, ambient_dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        rows = [list(vector(v)) for v in vectors]
        for r in rows:
            if len(r) != ambient_dim:
                raise AmbientMismatch(f"vector length {len(r)} in ambient {ambient_dim}")
        reduced, pivots = _row_reduce(rows)
        return cls(ambient_dim, tuple(tuple(r) for r in reduced[: len(pivots)]))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, tuple(unit_vector(ambient_dim, i) for i in range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def is_zero(self) -> bool:
        return not self.basis

    def _check_ambient(self, other: "Subspace") -> None:
        if self.ambient_dim != other.ambient_dim:
            raise AmbientMismatch(
                f"ambient dimensions differ: {self.ambient_dim} vs {other.ambient_dim}"
            )

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check_ambient(other)
        return Subspace.from_vectors(self.ambient_dim, self.basis + other.basis)

    def intersection(self, other: "Subspace") -> "Subspace":
        """Intersection via the kernel of the stacked-constraints matrix."""
        self._check_ambient(other)
        if self.is_zero or other.is_zero:
            return Subspace.zero(self.ambient_dim)
        stacked = Matrix.from_rows(self.basis + other.basis).transpose()
        vectors = []
        for coeffs in kernel(stacked).basis:
            v = zero_vector(self.ambient_dim)
            for c, row in zip(coeffs[: self.dim], self.basis):
                if c:
                    v = add_vectors(v, scale_vector(c, row))
            vectors.append(v)
        return Subspace.from_vectors(self.ambient_dim, vectors)

    def contains_vector(self, v: Sequence) -> bool:
        return is_zero_vector(self.residual(v))

    def residual(self, v: Sequence) -> Vector:
        """``v`` reduced against the basis; zero iff ``v`` lies in the span."""
        w = list(vector(v))
        if len(w) != self.ambient_dim:
            raise AmbientMismatch(f"vector length {len(w)} in ambient {self.ambient_dim}")
        for row in self.basis:
            p = next(j for j, e in enumerate(row) if e != 0)
            if w[p]:
                f = w[p]
                w = [a - f * b for a, b in zip(w, row)]
        return tuple(w)

    def contains(self, other: "Subspace") -> bool:
        """Whether ``other`` is a subspace of this one."""
        self._check_ambient(other)
        return all(self.contains_vector(r) for r in other.basis)

    def coordinates(self, v: Sequence) -> Vector | None:
        """Coefficients of ``v`` over the canonical basis, or None if outside."""
        w = list(vector(v))
        if len(w) != self.ambient_dim:
            raise AmbientMismatch(f"vector length {len(w)} in ambient {self.ambient_dim}")
        coords = []
        for row in self.basis:
            p = next(j for j, e in enumerate(row) if e != 0)
            c = w[p]
            coords.append(c)
            if c:
                w = [a - c * b for a, b in zip(w, row)]
        if not is_zero_vector(tuple(w)):
            return None
        return tuple(coords)

    def apply(self, m: Matrix) -> "Subspace":
        """Image of the subspace under the linear map ``m``."""
        return Subspace.from_vectors(m.nrows, [m.apply(r) for r in self.basis])


def coordinates_in_rows(rows: Sequence[Vector], v: Sequence) -> Vector | None:
    """Coefficients ``c`` with ``sum(c_i * rows_i) == v`` over independent rows."""
    if not rows:
        return () if is_zero_vector(vector(v)) else None
    k = len(rows)
    aug = [list(col) + [val] for col, val in zip(zip(*rows), vector(v))]
    reduced, pivots = _row_reduce(aug)
    if k in pivots:
        return None
    if list(pivots) != list(range(k)):
        raise DimensionMismatch("rows are linearly dependent")
    return tuple(reduced[i][k] for i in range(k))


def complement(sub: Subspace, within: Subspace) -> Subspace:
    """Canonical pivot-completion complement of ``sub`` inside ``within``.

    Greedily extends ``sub`` by rows of ``within``'s canonical basis, so
    the answer is deterministic.
    """
    if not within.contains(sub):
        raise AmbientMismatch("complement requested for a non-subspace")
    builder = SpanBuilder(sub.ambient_dim)
    for row in sub.basis:
        builder.add(row)
    picked = []
    for row in within.basis:
        if builder.add(row):
            picked.append(row)
    return Subspace.from_vectors(sub.ambient_dim, picked)


class SpanBuilder:
    """Incrementally grown row space with fast membership tests.

    Maintains fully reduced rows keyed by pivot column, so conversion to a
    canonical :class:`Subspace` is just a sort.
    """

    def __init__(self, ambient_dim: int):
        self.ambient_dim = ambient_dim
        self._rows: dict[int, list[Scalar]] = {}

    @property
    def dim(self) -> int:
        return len(self._rows)

    def residual(self, v: Sequence) -> list[Scalar]:
        w = list(v)
        for p, row in self._rows.items():
            if w[p]:
                f = w[p]
                w = [a - f * b for a, b in zip(w, row)]
        return w

    def contains(self, v: Sequence) -> bool:
        return all(a == 0 for a in self.residual(v))

    def add(self, v: Sequence) -> bool:
        """Insert ``v``; returns True when the span grew."""
        w = self.residual(v)
        p = next((j for j, e in enumerate(w) if e != 0), None)
        if p is None:
            return False
        inv = 1 / w[p]
        if inv != 1:
            w = [e * inv for e in w]
        for row in self._rows.values():
            if row[p]:
                f = row[p]
                row[:] = [a - f * b for a, b in zip(row, w)]
        self._rows[p] = w
        return True

    def to_subspace(self) -> Subspace:
        rows = tuple(tuple(self._rows[p]) for p in sorted(self._rows))
        return Subspace(self.ambient_dim, rows)


def span_of(ambient_dim: int, vectors: Iterable[Sequence]) -> Subspace:
    return Subspace.from_vectors(ambient_dim, vectors)


# ---------------------------------------------------------------------------
# characteristic polynomials and rational spectra


def characteristic_polynomial(m: Matrix) -> tuple[Scalar, ...]:
    """Coefficients ``(c0, ..., cn)`` of ``det(x*I - m)``, monic.

    Uses the Faddeev-LeVerrier recurrence, which stays in exact rational
    arithmetic.
    """
    if not m.is_square:
        raise DimensionMismatch("characteristic polynomial needs a square matrix")
    n = m.ncols
    coeffs = [ZERO] * (n + 1)
    coeffs[n] = ONE
    work = Matrix.identity(n)
    for k in range(1, n + 1):
        work = m @ work
        c = -work.trace() / k
        coeffs[n - k] = c
        if k < n:
            work = work + Matrix.identity(n).scale(c)
    return tuple(coeffs)


def _positive_divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def rational_roots(coeffs: Sequence[Scalar]) -> tuple[list[tuple[Scalar, int]], int]:
    """Rational roots (with multiplicity) of a polynomial and the degree left unsplit.

    ``coeffs`` is ``(c0, ..., cn)`` with ``cn != 0``.  Candidates come from
    the rational-root theorem applied after clearing denominators.
    """
    poly = [rat(c) for c in coeffs]
    while poly and poly[-1] == 0:
        poly.pop()
    if len(poly) <= 1:
        return [], 0
    denlcm = 1
    for c in poly:
        denlcm = denlcm * c.denominator // _gcd(denlcm, c.denominator)
    ints = [int(c * denlcm) for c in poly]

    roots: list[tuple[Scalar, int]] = []

    mult = 0
    while ints[0] == 0 and len(ints) > 1:
        ints.pop(0)
        mult += 1
    if mult:
        roots.append((ZERO, mult))

    lead = ints[-1]
    const = ints[0]
    if len(ints) > 1 and const != 0:
        candidates = set()
        for p in _positive_divisors(const):
            for q in _positive_divisors(lead):
                candidates.add(Scalar(p, q))
                candidates.add(Scalar(-p, q))
        for cand in sorted(candidates):
            mult = 0
            while len(ints) > 1 and _poly_eval(ints, cand) == 0:
                ints = _synthetic_divide(ints, cand)
                mult += 1
            if mult:
                roots.append((cand, mult))
            if len(ints) <= 1:
                break
    roots.sort(key=lambda rm: rm[0])
    return roots, len(ints) - 1


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _poly_eval(ints: Sequence, x: Scalar) -> Scalar:
    acc = ZERO
    for c in reversed(ints):
        acc = acc * x + c
    return acc


def _synthetic_divide(ints: Sequence, root: Scalar) -> list:
    """Divide ``p(x)`` by ``(x - root)``; the remainder must be zero."""
    out = [ZERO] * (len(ints) - 1)
    carry = ZERO
    for i in range(len(ints) - 1, 0, -1):
        carry = carry * root + ints[i]
        out[i - 1] = carry
    return out


# ---------------------------------------------------------------------------
# simultaneous eigenspaces


def restriction_matrix(op: Matrix, domain: Subspace) -> Matrix:
    """Matrix of ``op`` on ``domain`` in canonical-basis coordinates.

    Raises :class:`AmbientMismatch` when ``op`` does not map the domain
    into itself.
    """
    if op.ncols != domain.ambient_dim:
        raise DimensionMismatch("operator and domain sizes differ")
    cols = []
    for b in domain.basis:
        c = domain.coordinates(op.apply(b))
        if c is None:
            raise AmbientMismatch("operator does not preserve the domain")
        cols.append(c)
    rows = tuple(tuple(col[i] for col in cols) for i in range(domain.dim))
    return Matrix(rows, domain.dim)


def _eigenspaces_in_domain(op: Matrix, domain: Subspace) -> list[tuple[Scalar, Subspace]]:
    restricted = restriction_matrix(op, domain)
    roots, remainder = rational_roots(characteristic_polynomial(restricted))
    if remainder:
        raise NonRationalSpectrum(
            f"characteristic polynomial has an irreducible factor of degree {remainder} "
            "over the rationals",
            remainder_degree=remainder,
        )
    out = []
    for lam, _ in roots:
        coords = kernel(restricted.shifted(lam))
        vectors = []
        for cv in coords.basis:
            v = zero_vector(domain.ambient_dim)
            for c, row in zip(cv, domain.basis):
                if c:
                    v = add_vectors(v, scale_vector(c, row))
            vectors.append(v)
        out.append((lam, Subspace.from_vectors(domain.ambient_dim, vectors)))
    return out


def simultaneous_eigenspaces(
    ops: Sequence[Matrix], domain: Subspace
) -> list[tuple[tuple[Scalar, ...], Subspace]]:
    """All maximal joint eigenspaces of ``ops`` inside ``domain``.

    Every operator must map the domain into itself.  Pieces are returned
    sorted by eigenvalue tuple; they are pairwise independent, and when
    the operators are simultaneously diagonalizable over the rationals on
    the domain they sum to it.
    """
    for op in ops:
        if not op.is_square or op.ncols != domain.ambient_dim:
            raise DimensionMismatch("operators must be square of the ambient size")
    if domain.is_zero:
        return []
    pieces: list[tuple[tuple[Scalar, ...], Subspace]] = [((), domain)]
    for op in ops:
        eigen = _eigenspaces_in_domain(op, domain)
        refined = []
        for tup, space in pieces:
            for lam, eig in eigen:
                meet = space.intersection(eig)
                if not meet.is_zero:
                    refined.append((tup + (lam,), meet))
        pieces = refined
        if not pieces:
            break
    pieces.sort(key=lambda te: te[0])
    return pieces
