"""Z2-graded algebras given by structure constants, and their verifiers.

A :class:`SuperAlgebra` bundles a graded basis, sparse bracket and
product tables and the two twisting maps.  :func:`verify_algebra` checks
every defining identity on basis triples (sufficient by multilinearity)
and reports each axiom with a concrete counterexample on failure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Mapping, Sequence

from .errors import (
    CapExceeded,
    DimensionMismatch,
    NotAutomorphism,
    NotCommuting,
    NotGraded,
    Singular,
)
from .linalg import (
    Matrix,
    SpanBuilder,
    Subspace,
    Vector,
    add_vectors,
    is_zero_vector,
    kernel,
    scale_vector,
    unit_vector,
    vector,
    zero_vector,
)
from .report import CheckReport, ReportBuilder, Witness
from .scalar import ONE, ZERO, Scalar, rat

if TYPE_CHECKING:  # pragma: no cover
    from .roots import SplitDecomposition

EVEN = 0
ODD = 1

Entry = tuple[tuple[int, Scalar], ...]


@dataclass(frozen=True)
class GradedBasis:
    """Ordered basis labels with their parities (0 even, 1 odd)."""

    labels: tuple[str, ...]
    parities: tuple[int, ...]

    def __post_init__(self):
        if len(self.labels) != len(self.parities) or not self.labels:
            raise DimensionMismatch("labels and parities must align and be nonempty")
        if len(set(self.labels)) != len(self.labels):
            raise DimensionMismatch("basis labels must be distinct")
        if any(p not in (EVEN, ODD) for p in self.parities):
            raise DimensionMismatch("parities must be 0 or 1")

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(label) from None

    def homogeneous_parity(self, v: Sequence) -> int | None:
        """Parity of a homogeneous vector, None for zero, error when mixed."""
        seen = {self.parities[i] for i, c in enumerate(v) if c != 0}
        if not seen:
            return None
        if len(seen) > 1:
            raise NotGraded("vector mixes even and odd components")
        return seen.pop()

    def parity_projection(self, v: Vector, parity: int) -> Vector:
        return tuple(c if self.parities[i] == parity else ZERO for i, c in enumerate(v))


@dataclass(frozen=True)
class BilinearTable:
    """Sparse structure constants: (i, j) -> coefficient vector over the basis."""

    dim: int
    entries: tuple[tuple[tuple[int, int], Entry], ...]

    __hash__ = None  # type: ignore[assignment]

    @classmethod
    def from_map(cls, dim: int, mapping: Mapping) -> "BilinearTable":
        items = []
        for (i, j), coeffs in mapping.items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise DimensionMismatch(f"table index ({i}, {j}) out of range")
            if isinstance(coeffs, Mapping):
                pairs = coeffs.items()
            else:
                pairs = coeffs
            cleaned = {}
            for k, c in pairs:
                if not 0 <= k < dim:
                    raise DimensionMismatch(f"coefficient index {k} out of range")
                c = rat(c)
                if c:
                    cleaned[k] = cleaned.get(k, ZERO) + c
            entry = tuple(sorted((k, c) for k, c in cleaned.items() if c))
            if entry:
                items.append(((i, j), entry))
        return cls(dim, tuple(sorted(items)))

    @classmethod
    def zero(cls, dim: int) -> "BilinearTable":
        return cls(dim, ())

    @property
    def lookup(self) -> dict[tuple[int, int], Entry]:
        cached = self.__dict__.get("_lookup")
        if cached is None:
            cached = dict(self.entries)
            object.__setattr__(self, "_lookup", cached)
        return cached

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def basis_value(self, i: int, j: int) -> Vector:
        out = [ZERO] * self.dim
        for k, c in self.lookup.get((i, j), ()):
            out[k] = c
        return tuple(out)

    def apply(self, x: Sequence, y: Sequence) -> Vector:
        """Bilinear extension of the table to arbitrary coefficient vectors."""
        if len(x) != self.dim or len(y) != self.dim:
            raise DimensionMismatch("vectors must have the table dimension")
        out = [ZERO] * self.dim
        lookup = self.lookup
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj:
                    continue
                entry = lookup.get((i, j))
                if entry:
                    c = xi * yj
                    for k, coef in entry:
                        out[k] += c * coef
        return tuple(out)


@dataclass(frozen=True)
class SuperAlgebra:
    """A graded algebra with bracket, superproduct and twisting maps phi, psi."""

    basis: GradedBasis
    bracket: BilinearTable
    product: BilinearTable
    phi: Matrix
    psi: Matrix

    __hash__ = None  # type: ignore[assignment]

    def __post_init__(self):
        d = self.basis.dim
        for table in (self.bracket, self.product):
            if table.dim != d:
                raise DimensionMismatch("table dimension differs from basis")
        for m in (self.phi, self.psi):
            if not (m.is_square and m.ncols == d):
                raise DimensionMismatch("twist maps must be square of the basis dimension")

    @property
    def dim(self) -> int:
        return self.basis.dim

    @property
    def labels(self) -> tuple[str, ...]:
        return self.basis.labels

    @property
    def parities(self) -> tuple[int, ...]:
        return self.basis.parities

    @property
    def has_identity_twists(self) -> bool:
        ident = Matrix.identity(self.dim)
        return self.phi == ident and self.psi == ident

    def basis_vector(self, i: int) -> Vector:
        return unit_vector(self.dim, i)

    def bracket_vec(self, x: Sequence, y: Sequence) -> Vector:
        return self.bracket.apply(x, y)

    def product_vec(self, x: Sequence, y: Sequence) -> Vector:
        return self.product.apply(x, y)

    def format_vector(self, v: Sequence) -> str:
        terms = []
        for c, label in zip(v, self.basis.labels):
            if c == 0:
                continue
            if c == 1:
                terms.append(label)
            elif c == -1:
                terms.append(f"-{label}")
            else:
                terms.append(f"{c}*{label}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def eval_bilinear(alg: SuperAlgebra, table: str, x: Sequence, y: Sequence) -> Vector:
    """Evaluate the bracket or product table on coefficient vectors."""
    if table == "bracket":
        return alg.bracket_vec(vector(x), vector(y))
    if table == "product":
        return alg.product_vec(vector(x), vector(y))
    raise ValueError(f"unknown table {table!r}")


# ---------------------------------------------------------------------------
# axiom verification


def _sign(p: int, q: int) -> Scalar:
    return -ONE if (p and q) else ONE


_MODE_CHECKS = {
    "bihom_associative": (
        "product-grading",
        "twist-commutation",
        "twist-evenness",
        "regularity",
        "product-multiplicativity-phi",
        "product-multiplicativity-psi",
        "bihom-associativity",
    ),
    "bihom_lie": (
        "bracket-grading",
        "twist-commutation",
        "twist-evenness",
        "regularity",
        "bracket-multiplicativity-phi",
        "bracket-multiplicativity-psi",
        "bihom-skew-symmetry",
        "bihom-super-jacobi",
    ),
    "bihom_poisson": (
        "bracket-grading",
        "product-grading",
        "twist-commutation",
        "twist-evenness",
        "regularity",
        "bracket-multiplicativity-phi",
        "bracket-multiplicativity-psi",
        "product-multiplicativity-phi",
        "product-multiplicativity-psi",
        "bihom-associativity",
        "bihom-skew-symmetry",
        "bihom-super-jacobi",
        "bihom-leibniz",
    ),
}


def verify_algebra(alg: SuperAlgebra, mode: str = "bihom_poisson") -> CheckReport:
    """Check every defining identity of the requested structure.

    All axioms are evaluated on basis pairs/triples, which suffices by
    multilinearity.  Nothing raises: failures become report entries whose
    witnesses re-evaluate to unequal sides.
    """
    if mode not in _MODE_CHECKS:
        raise ValueError(f"unknown mode {mode!r}")
    wanted = _MODE_CHECKS[mode]
    rb = ReportBuilder()
    for name in wanted:
        rb.start(name)

    d = alg.dim
    labels = alg.labels
    par = alg.parities
    phi_im = [alg.phi.apply(unit_vector(d, i)) for i in range(d)]
    psi_im = [alg.psi.apply(unit_vector(d, i)) for i in range(d)]
    psi2_im = [alg.psi.apply(v) for v in psi_im]
    phipsi_im = [alg.phi.apply(v) for v in psi_im]
    units = [unit_vector(d, i) for i in range(d)]

    def grading(check: str, table: BilinearTable) -> None:
        for (i, j), _ in table.entries:
            w = table.basis_value(i, j)
            proj = alg.basis.parity_projection(w, (par[i] + par[j]) % 2)
            if w != proj:
                rb.fail(check, Witness((labels[i], labels[j]), w, proj,
                                       "value leaves the expected parity component"))

    if "bracket-grading" in wanted:
        grading("bracket-grading", alg.bracket)
    if "product-grading" in wanted:
        grading("product-grading", alg.product)

    if "twist-commutation" in wanted:
        for i in range(d):
            lhs = alg.phi.apply(psi_im[i])
            rhs = alg.psi.apply(phi_im[i])
            if lhs != rhs:
                rb.fail("twist-commutation",
                        Witness((labels[i],), lhs, rhs, "phi(psi(x)) vs psi(phi(x))"))

    if "twist-evenness" in wanted:
        for name, images in (("phi", phi_im), ("psi", psi_im)):
            for i in range(d):
                proj = alg.basis.parity_projection(images[i], par[i])
                if images[i] != proj:
                    rb.fail("twist-evenness",
                            Witness((labels[i],), images[i], proj,
                                    f"{name} does not preserve parity"))

    if "regularity" in wanted:
        for name, m in (("phi", alg.phi), ("psi", alg.psi)):
            ker = kernel(m)
            if not ker.is_zero:
                v = ker.basis[0]
                rb.fail("regularity",
                        Witness((), v, m.apply(v), f"{name} annihilates a nonzero vector"))

    def multiplicative(check: str, table: BilinearTable, m: Matrix, images) -> None:
        for i in range(d):
            for j in range(d):
                lhs = m.apply(table.basis_value(i, j))
                rhs = table.apply(images[i], images[j])
                if lhs != rhs:
                    rb.fail(check, Witness((labels[i], labels[j]), lhs, rhs))

    if "bracket-multiplicativity-phi" in wanted:
        multiplicative("bracket-multiplicativity-phi", alg.bracket, alg.phi, phi_im)
    if "bracket-multiplicativity-psi" in wanted:
        multiplicative("bracket-multiplicativity-psi", alg.bracket, alg.psi, psi_im)
    if "product-multiplicativity-phi" in wanted:
        multiplicative("product-multiplicativity-phi", alg.product, alg.phi, phi_im)
    if "product-multiplicativity-psi" in wanted:
        multiplicative("product-multiplicativity-psi", alg.product, alg.psi, psi_im)

    if "bihom-associativity" in wanted:
        for i in range(d):
            for j in range(d):
                left = alg.product.basis_value(i, j)
                for k in range(d):
                    lhs = alg.product.apply(phi_im[i], alg.product.basis_value(j, k))
                    rhs = alg.product.apply(left, psi_im[k])
                    if lhs != rhs:
                        rb.fail("bihom-associativity",
                                Witness((labels[i], labels[j], labels[k]), lhs, rhs))

    if "bihom-skew-symmetry" in wanted:
        for i in range(d):
            for j in range(d):
                lhs = alg.bracket.apply(psi_im[i], phi_im[j])
                rhs = scale_vector(-_sign(par[i], par[j]),
                                   alg.bracket.apply(psi_im[j], phi_im[i]))
                if lhs != rhs:
                    rb.fail("bihom-skew-symmetry",
                            Witness((labels[i], labels[j]), lhs, rhs))

    if "bihom-super-jacobi" in wanted:
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    t1 = scale_vector(
                        _sign(par[k], par[i]),
                        alg.bracket.apply(psi2_im[i], alg.bracket.apply(psi_im[j], phi_im[k])),
                    )
                    t2 = scale_vector(
                        _sign(par[i], par[j]),
                        alg.bracket.apply(psi2_im[j], alg.bracket.apply(psi_im[k], phi_im[i])),
                    )
                    t3 = scale_vector(
                        _sign(par[j], par[k]),
                        alg.bracket.apply(psi2_im[k], alg.bracket.apply(psi_im[i], phi_im[j])),
                    )
                    total = add_vectors(add_vectors(t1, t2), t3)
                    if not is_zero_vector(total):
                        rb.fail("bihom-super-jacobi",
                                Witness((labels[i], labels[j], labels[k]),
                                        total, zero_vector(d), "cyclic sum"))

    if "bihom-leibniz" in wanted:
        for i in range(d):
            for j in range(d):
                prod_ij = alg.product.basis_value(i, j)
                for k in range(d):
                    lhs = alg.bracket.apply(prod_ij, phipsi_im[k])
                    rhs = add_vectors(
                        alg.product.apply(phi_im[i],
                                          alg.bracket.apply(units[j], phi_im[k])),
                        scale_vector(
                            _sign(par[j], par[k]),
                            alg.product.apply(alg.bracket.apply(units[i], psi_im[k]),
                                              phi_im[j]),
                        ),
                    )
                    if lhs != rhs:
                        rb.fail("bihom-leibniz",
                                Witness((labels[i], labels[j], labels[k]), lhs, rhs))

    return rb.build()


# ---------------------------------------------------------------------------
# the Yau twist


def yau_twist(alg: SuperAlgebra, f: Matrix, g: Matrix) -> SuperAlgebra:
    """Twist an untwisted algebra by a commuting pair of even automorphisms.

    The input must carry identity twist maps and satisfy the untwisted
    axioms; the output has bracket ``(x, y) -> [f x, g y]``, product
    ``(x, y) -> (f x)(g y)`` and twist maps ``phi = f``, ``psi = g``.
    """
    if not alg.has_identity_twists:
        raise ValueError("yau twist expects an algebra with identity twist maps")
    d = alg.dim
    for name, m in (("f", f), ("g", g)):
        if not (m.is_square and m.ncols == d):
            raise DimensionMismatch(f"{name} must be {d}x{d}")
        if not m.is_invertible:
            raise Singular(f"twist map {name} is singular")

    labels = alg.labels
    units = [unit_vector(d, i) for i in range(d)]
    f_im = [f.apply(u) for u in units]
    g_im = [g.apply(u) for u in units]

    for i in range(d):
        lhs, rhs = f.apply(g_im[i]), g.apply(f_im[i])
        if lhs != rhs:
            raise NotCommuting("twist maps do not commute",
                               witness=(labels[i], lhs, rhs))

    for name, images in (("f", f_im), ("g", g_im)):
        for i in range(d):
            proj = alg.basis.parity_projection(images[i], alg.parities[i])
            if images[i] != proj:
                raise NotAutomorphism(f"{name} does not preserve the grading",
                                      witness=(labels[i], images[i], proj))

    for name, m, images in (("f", f, f_im), ("g", g, g_im)):
        for tname, table in (("bracket", alg.bracket), ("product", alg.product)):
            for i in range(d):
                for j in range(d):
                    lhs = m.apply(table.basis_value(i, j))
                    rhs = table.apply(images[i], images[j])
                    if lhs != rhs:
                        raise NotAutomorphism(
                            f"{name} is not an automorphism of the {tname}",
                            witness=(labels[i], labels[j], lhs, rhs),
                        )

    bracket = {}
    product = {}
    for i in range(d):
        for j in range(d):
            b = alg.bracket.apply(f_im[i], g_im[j])
            if not is_zero_vector(b):
                bracket[(i, j)] = list(enumerate(b))
            p = alg.product.apply(f_im[i], g_im[j])
            if not is_zero_vector(p):
                product[(i, j)] = list(enumerate(p))
    return SuperAlgebra(
        basis=alg.basis,
        bracket=BilinearTable.from_map(d, bracket),
        product=BilinearTable.from_map(d, product),
        phi=f,
        psi=g,
    )


# ---------------------------------------------------------------------------
# centers, ideals, brute-force simplicity


def _action_matrices(alg: SuperAlgebra) -> dict[str, list[Matrix]]:
    """Matrices of v -> [v, e_j], [e_j, v], v e_j and e_j v for every j."""
    d = alg.dim
    out: dict[str, list[Matrix]] = {
        "bracket_right": [],
        "bracket_left": [],
        "product_right": [],
        "product_left": [],
    }
    for j in range(d):
        br = [alg.bracket.basis_value(i, j) for i in range(d)]
        bl = [alg.bracket.basis_value(j, i) for i in range(d)]
        pr = [alg.product.basis_value(i, j) for i in range(d)]
        pl = [alg.product.basis_value(j, i) for i in range(d)]
        out["bracket_right"].append(Matrix.from_rows(br).transpose())
        out["bracket_left"].append(Matrix.from_rows(bl).transpose())
        out["product_right"].append(Matrix.from_rows(pr).transpose())
        out["product_left"].append(Matrix.from_rows(pl).transpose())
    return out


def center(alg: SuperAlgebra) -> Subspace:
    """Exact kernel computation of {v : [v, A] + vA + Av = 0}."""
    actions = _action_matrices(alg)
    rows: list[Vector] = []
    for j in range(alg.dim):
        for key in ("bracket_right", "product_right", "product_left"):
            rows.extend(actions[key][j].rows)
    if not rows:
        return Subspace.full(alg.dim)
    return kernel(Matrix.from_rows(rows))


def ideal_closure(alg: SuperAlgebra, seed: Subspace) -> Subspace:
    """Least subspace containing ``seed`` that is an ideal of the algebra.

    Closes under brackets and products with the whole algebra on both
    sides and under phi, psi and their inverses; the fixpoint terminates
    because dimensions strictly increase.
    """
    if seed.ambient_dim != alg.dim:
        raise DimensionMismatch("seed lives in the wrong ambient space")
    try:
        maps = [alg.phi, alg.psi, alg.phi.inverse(), alg.psi.inverse()]
    except Singular:
        raise Singular("ideal closure needs invertible twist maps") from None
    actions = _action_matrices(alg)
    for group in actions.values():
        maps.extend(group)

    builder = SpanBuilder(alg.dim)
    queue = [row for row in seed.basis if builder.add(row)]
    while queue:
        v = queue.pop()
        for m in maps:
            w = m.apply(v)
            if builder.add(w):
                queue.append(w)
    return builder.to_subspace()


def is_simple_bruteforce(
    alg: SuperAlgebra,
    dec: "SplitDecomposition | None" = None,
    cap: int = 12,
) -> tuple[bool, Subspace | None]:
    """Decide simplicity by closing every candidate graded seed line.

    Seeds are the algebra basis vectors, the center's canonical basis and,
    when a decomposition is supplied, the canonical bases of its
    distinguished subalgebra and of every graded root space.  Returns the
    verdict together with a proper nonzero ideal as witness when one
    exists.
    """
    if alg.dim > cap:
        raise CapExceeded(f"dimension {alg.dim} exceeds the brute-force cap {cap}")

    seeds: list[Vector] = [unit_vector(alg.dim, i) for i in range(alg.dim)]
    seeds.extend(center(alg).basis)
    if dec is not None:
        seeds.extend(dec.cartan_even.basis)
        seeds.extend(dec.cartan_odd.basis)
        for root in dec.roots:
            space = dec.spaces[root]
            seeds.extend(space.even.basis)
            seeds.extend(space.odd.basis)

    seen: set[Vector] = set()
    witness = None
    full_dim = alg.dim
    for raw in seeds:
        if is_zero_vector(raw):
            continue
        lead = next(c for c in raw if c)
        normalized = scale_vector(1 / lead, raw)
        if normalized in seen:
            continue
        seen.add(normalized)
        closed = ideal_closure(alg, Subspace.from_vectors(alg.dim, [normalized]))
        if closed.dim < full_dim:
            witness = closed
            break

    products_nonzero = not (alg.bracket.is_zero and alg.product.is_zero)
    if not products_nonzero:
        return False, witness
    return (witness is None), witness
