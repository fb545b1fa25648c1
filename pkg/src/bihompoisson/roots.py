"""Root-space decomposition relative to a distinguished abelian subalgebra.

Roots are linear functionals on the even part of the user-supplied
subalgebra H, stored as coefficient rows over its even basis.  The root
spaces are the joint eigenspaces of the commuting operators
``v -> (phi psi)^(-1) [h, phi(v)]``, computed separately on each parity
component.  Splitness (the root spaces together with H exhausting the
algebra) is recorded, never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .algebra import EVEN, ODD, SuperAlgebra
from .errors import (
    DimensionMismatch,
    NotAbelian,
    NotGraded,
    NotInvariant,
    NotSplit,
    NotSubalgebra,
    Singular,
)
from .linalg import (
    Matrix,
    Subspace,
    Vector,
    coordinates_in_rows,
    is_zero_vector,
    simultaneous_eigenspaces,
    unit_vector,
    vector,
)
from .report import CheckReport, ReportBuilder, Witness
from .scalar import ZERO, Scalar

TRANSFORM_TOKENS = ("phi", "psi", "phi_inv", "psi_inv")


@dataclass(frozen=True, order=True)
class Root:
    """Functional on the even part of H, as a coefficient row."""

    values: tuple[Scalar, ...]

    @classmethod
    def zero(cls, n: int) -> "Root":
        return cls((ZERO,) * n)

    @property
    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    def __neg__(self) -> "Root":
        return Root(tuple(-v for v in self.values))

    def __add__(self, other: "Root") -> "Root":
        if len(self.values) != len(other.values):
            raise DimensionMismatch("roots live on different H bases")
        return Root(tuple(a + b for a, b in zip(self.values, other.values)))

    def transformed(self, m: Matrix) -> "Root":
        """Precompose with the operator whose matrix on H_even is ``m``."""
        return Root(m.left_apply(self.values))

    def __str__(self) -> str:
        return "(" + ", ".join(str(v) for v in self.values) + ")"


@dataclass(frozen=True)
class GradedSubspace:
    even: Subspace
    odd: Subspace

    @property
    def total(self) -> Subspace:
        return self.even + self.odd

    @property
    def dim(self) -> int:
        return self.even.dim + self.odd.dim

    def part(self, parity: int) -> Subspace:
        return self.even if parity == EVEN else self.odd


@dataclass(frozen=True)
class SplitDecomposition:
    """Root system and root spaces of an algebra relative to a chosen H."""

    algebra: SuperAlgebra
    h_vectors: tuple[Vector, ...]
    h_parities: tuple[int, ...]
    cartan: Subspace
    cartan_even: Subspace
    cartan_odd: Subspace
    roots: tuple[Root, ...]
    spaces: Mapping[Root, GradedSubspace]
    is_split: bool
    symmetric: bool
    diagnostics: tuple[str, ...]
    phi_on_cartan: Matrix
    psi_on_cartan: Matrix
    phi_on_cartan_inv: Matrix
    psi_on_cartan_inv: Matrix

    __hash__ = None  # type: ignore[assignment]

    @property
    def zero_root(self) -> Root:
        return Root.zero(len(self.phi_on_cartan.rows))

    @property
    def cartan_graded(self) -> GradedSubspace:
        return GradedSubspace(self.cartan_even, self.cartan_odd)

    def graded_space(self, root: Root, parity: int) -> Subspace:
        """A_{root, parity}; H's parity part at zero, the zero space off-system."""
        if root.is_zero:
            return self.cartan_even if parity == EVEN else self.cartan_odd
        space = self.spaces.get(root)
        if space is None:
            return Subspace.zero(self.algebra.dim)
        return space.part(parity)

    def space_of(self, root: Root) -> Subspace:
        if root.is_zero:
            return self.cartan
        space = self.spaces.get(root)
        if space is None:
            return Subspace.zero(self.algebra.dim)
        return space.total

    def transform_root(self, root: Root, token: str) -> Root:
        matrix = {
            "phi": self.phi_on_cartan,
            "psi": self.psi_on_cartan,
            "phi_inv": self.phi_on_cartan_inv,
            "psi_inv": self.psi_on_cartan_inv,
        }.get(token)
        if matrix is None:
            raise ValueError(f"unknown transform token {token!r}")
        return root.transformed(matrix)


def root_transform(root: Root, word: Iterable[str], dec: SplitDecomposition) -> Root:
    """Compose a root with a word over phi, psi and their inverses on H."""
    out = root
    for token in word:
        out = dec.transform_root(out, token)
    return out


def decompose_roots(alg: SuperAlgebra, h_vectors: Sequence[Sequence]) -> SplitDecomposition:
    """Compute the root-space decomposition of ``alg`` relative to span(h_vectors).

    Preconditions are verified: the twist maps must be invertible and
    even, and H must be a graded abelian subalgebra invariant under both
    twist maps.  A failure of splitness is reported through ``is_split``
    and ``diagnostics`` rather than an exception, so callers can say
    precisely why downstream results do not apply.
    """
    d = alg.dim
    vecs = tuple(vector(v) for v in h_vectors)
    for v in vecs:
        if len(v) != d:
            raise DimensionMismatch("H basis vector has the wrong length")
        if is_zero_vector(v):
            raise ValueError("H basis contains the zero vector")
    parities = tuple(alg.basis.homogeneous_parity(v) for v in vecs)  # NotGraded if mixed

    cartan = Subspace.from_vectors(d, vecs)
    if cartan.dim != len(vecs):
        raise ValueError("H basis vectors must be linearly independent")

    if not (alg.phi.is_invertible and alg.psi.is_invertible):
        raise Singular("root decomposition needs a regular algebra (invertible phi, psi)")

    for name, m in (("phi", alg.phi), ("psi", alg.psi)):
        for i in range(d):
            image = m.apply(unit_vector(d, i))
            if image != alg.basis.parity_projection(image, alg.parities[i]):
                raise NotGraded(f"{name} is not an even map (moves {alg.labels[i]})")

    for name, m in (("phi", alg.phi), ("psi", alg.psi)):
        for v in vecs:
            image = m.apply(v)
            if not cartan.contains_vector(image):
                raise NotInvariant(f"{name}(H) is not contained in H",
                                   witness=(v, image))

    for u in vecs:
        for v in vecs:
            b = alg.bracket_vec(u, v)
            if not is_zero_vector(b):
                raise NotAbelian("H has a nonzero internal bracket", witness=(u, v, b))
            p = alg.product_vec(u, v)
            if not cartan.contains_vector(p):
                raise NotSubalgebra("H is not closed under the superproduct",
                                    witness=(u, v, p))

    h_evens = tuple(v for v, p in zip(vecs, parities) if p == EVEN)
    m_even = len(h_evens)

    phipsi_inv = (alg.phi @ alg.psi).inverse()
    ops = []
    for h in h_evens:
        cols = [phipsi_inv.apply(alg.bracket_vec(h, alg.phi.apply(unit_vector(d, j))))
                for j in range(d)]
        ops.append(Matrix(tuple(tuple(col[i] for col in cols) for i in range(d)), d))

    even_domain = Subspace.from_vectors(
        d, [unit_vector(d, i) for i in range(d) if alg.parities[i] == EVEN])
    odd_domain = Subspace.from_vectors(
        d, [unit_vector(d, i) for i in range(d) if alg.parities[i] == ODD])

    pieces: dict[Root, dict[int, Subspace]] = {}
    for parity, domain in ((EVEN, even_domain), (ODD, odd_domain)):
        for tup, space in simultaneous_eigenspaces(ops, domain):
            pieces.setdefault(Root(tup), {})[parity] = space

    zero = Root.zero(m_even)
    diagnostics: list[str] = []
    is_split = True

    zero_piece = pieces.pop(zero, {})
    a0 = zero_piece.get(EVEN, Subspace.zero(d)) + zero_piece.get(ODD, Subspace.zero(d))
    # abelian + phi(H) = H force H inside the zero root space
    assert a0.contains(cartan), "zero root space lost part of H"
    if a0 != cartan:
        excess = [r for r in a0.basis if not cartan.contains_vector(r)]
        rendered = ", ".join(alg.format_vector(r) for r in excess)
        diagnostics.append(
            f"the zero root space strictly contains H; excess vectors: {rendered}")
        is_split = False

    spaces = {
        root: GradedSubspace(parts.get(EVEN, Subspace.zero(d)),
                             parts.get(ODD, Subspace.zero(d)))
        for root, parts in pieces.items()
    }
    roots = tuple(sorted(spaces))

    covered = a0.dim + sum(spaces[r].dim for r in roots)
    if covered != d:
        diagnostics.append(
            f"root spaces and H cover dimension {covered} of {d}; "
            "the twisted adjoint operators are not simultaneously diagonalizable")
        is_split = False

    symmetric = all(-r in spaces for r in roots)

    cartan_even = Subspace.from_vectors(d, h_evens)
    cartan_odd = Subspace.from_vectors(
        d, [v for v, p in zip(vecs, parities) if p == ODD])

    def on_cartan(m: Matrix) -> Matrix:
        cols = []
        for h in h_evens:
            c = coordinates_in_rows(h_evens, m.apply(h))
            if c is None:
                raise NotInvariant("twist map does not preserve the even part of H")
            cols.append(c)
        return Matrix(tuple(tuple(col[i] for col in cols) for i in range(m_even)), m_even)

    phi_on_cartan = on_cartan(alg.phi)
    psi_on_cartan = on_cartan(alg.psi)

    return SplitDecomposition(
        algebra=alg,
        h_vectors=vecs,
        h_parities=parities,
        cartan=cartan,
        cartan_even=cartan_even,
        cartan_odd=cartan_odd,
        roots=roots,
        spaces=spaces,
        is_split=is_split,
        symmetric=symmetric,
        diagnostics=tuple(diagnostics),
        phi_on_cartan=phi_on_cartan,
        psi_on_cartan=psi_on_cartan,
        phi_on_cartan_inv=phi_on_cartan.inverse(),
        psi_on_cartan_inv=psi_on_cartan.inverse(),
    )


def verify_closure(dec: SplitDecomposition) -> CheckReport:
    """Check the product-closure laws and twist images of every root space.

    For all roots a, b (zero included) and parities, brackets and products
    of basis vectors must land in the graded space of
    ``a . phi^(-1) + b . psi^(-1)``, with the convention that unknown
    functionals name the zero space.  Twist images must satisfy
    ``phi(A_a) = A_{a phi^(-1)}`` and ``psi(A_a) = A_{a psi^(-1)}`` as
    exact subspace equalities.
    """
    if not dec.is_split:
        raise NotSplit("closure verification needs a split decomposition")
    alg = dec.algebra
    rb = ReportBuilder()
    everything = (dec.zero_root,) + dec.roots

    for a in everything:
        rb.start(f"twist-image[{a}]")
    for a in everything:
        for b in everything:
            rb.start(f"bracket-closure[{a}; {b}]")
            rb.start(f"product-closure[{a}; {b}]")

    for a in everything:
        name = f"twist-image[{a}]"
        for token, m in (("phi_inv", alg.phi), ("psi_inv", alg.psi)):
            target_root = dec.transform_root(a, token)
            for parity in (EVEN, ODD):
                source = dec.graded_space(a, parity)
                image = source.apply(m)
                target = dec.graded_space(target_root, parity)
                if image != target:
                    rb.fail(name, Witness(
                        (str(a),),
                        image.basis[0] if image.basis else (),
                        target.basis[0] if target.basis else (),
                        f"{token.replace('_inv', '')}(A_{a}) != A_{target_root} "
                        f"on parity {parity}",
                    ))

    for a in everything:
        a_target = dec.transform_root(a, "phi_inv")
        for b in everything:
            gamma = a_target + dec.transform_root(b, "psi_inv")
            for pa in (EVEN, ODD):
                left = dec.graded_space(a, pa)
                if left.is_zero:
                    continue
                for pb in (EVEN, ODD):
                    right = dec.graded_space(b, pb)
                    if right.is_zero:
                        continue
                    target = dec.graded_space(gamma, (pa + pb) % 2)
                    for table, check in (
                        (alg.bracket_vec, f"bracket-closure[{a}; {b}]"),
                        (alg.product_vec, f"product-closure[{a}; {b}]"),
                    ):
                        for u in left.basis:
                            for v in right.basis:
                                w = table(u, v)
                                if is_zero_vector(w):
                                    continue
                                residual = target.residual(w)
                                if not is_zero_vector(residual):
                                    inside = tuple(x - r for x, r in zip(w, residual))
                                    rb.fail(check, Witness(
                                        (str(a), str(b)),
                                        w,
                                        inside,
                                        f"({alg.format_vector(u)}) o "
                                        f"({alg.format_vector(v)}) escapes "
                                        f"A_{gamma} at parities ({pa}, {pb})",
                                    ))
    return rb.build()
