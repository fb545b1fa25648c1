"""Class ideals, the global decomposition and simplicity characterization.

Each connection class of roots contributes an ideal: the span of the
brackets and products pairing twisted opposite root spaces (its part
inside H) plus the direct sum of the class's root spaces.  The whole
algebra is the sum of these ideals and a canonical complement inside H;
directness is certified twice, once through the center/generation
criteria and once through raw intersection and dimension counts.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    EVEN,
    ODD,
    BilinearTable,
    GradedBasis,
    SuperAlgebra,
    center,
    is_simple_bruteforce,
)
from .connections import RootClass, connection_classes
from .errors import AsymmetricRootSystem, HypothesesNotMet, NotSplit
from .linalg import (
    Matrix,
    Subspace,
    Vector,
    complement,
    coordinates_in_rows,
    is_zero_vector,
    unit_vector,
    zero_vector,
)
from .report import CheckReport, ReportBuilder, Witness
from .roots import SplitDecomposition, decompose_roots


@dataclass(frozen=True)
class ClassIdeal:
    """The ideal attached to one connection class.

    ``h_part`` lies inside the distinguished subalgebra, ``root_part`` is
    the sum of the class's root spaces, and ``ideal`` is their direct sum.
    """

    cls: RootClass
    h_part: Subspace
    root_part: Subspace
    ideal: Subspace


@dataclass(frozen=True)
class DecompositionReport:
    ideals: tuple[ClassIdeal, ...]
    complement_part: Subspace
    center: Subspace
    cartan_generated: bool
    spans_algebra: bool
    direct_by_criteria: bool
    direct_by_dimension: bool

    @property
    def routes_agree(self) -> bool:
        return self.direct_by_criteria == self.direct_by_dimension

    @property
    def is_direct(self) -> bool:
        return self.direct_by_criteria and self.direct_by_dimension


@dataclass(frozen=True)
class SimplicityReport:
    center_zero: bool
    cartan_generated: bool
    all_connected: bool
    maximal_length: bool
    root_multiplicative: bool
    root_multiplicative_closure_form: bool
    products_nonzero: bool
    criteria_simple: bool | None
    bruteforce_simple: bool | None
    bruteforce_witness: Subspace | None

    @property
    def verdict(self) -> bool | None:
        """The strongest available answer: criteria when applicable, else oracle."""
        if self.criteria_simple is not None:
            return self.criteria_simple
        return self.bruteforce_simple


def build_class_ideal(dec: SplitDecomposition, cls: RootClass) -> ClassIdeal:
    """Span the brackets/products of twisted opposite root spaces plus the class spaces."""
    if not dec.is_split:
        raise NotSplit("class ideals need a split decomposition")
    alg = dec.algebra
    collected: list[Vector] = []
    for beta in cls.members:
        left = dec.space_of(dec.transform_root(beta, "psi_inv"))
        right = dec.space_of(-dec.transform_root(beta, "phi_inv"))
        for u in left.basis:
            for v in right.basis:
                collected.append(alg.bracket_vec(u, v))
                collected.append(alg.product_vec(u, v))
    h_part = Subspace.from_vectors(alg.dim, collected)
    if not dec.cartan.contains(h_part):
        raise ValueError(
            "pairing of opposite root spaces escaped H; the algebra violates "
            "the closure laws")
    root_part = Subspace.zero(alg.dim)
    for beta in cls.members:
        root_part = root_part + dec.space_of(beta)
    ideal = h_part + root_part
    if ideal.dim != h_part.dim + root_part.dim:
        raise ValueError("H-part and root part of the class ideal are not independent")
    return ClassIdeal(cls=cls, h_part=h_part, root_part=root_part, ideal=ideal)


def verify_ideal_properties(dec: SplitDecomposition,
                            ideals: tuple[ClassIdeal, ...]) -> CheckReport:
    """Check self-closure, twist invariance, the full ideal law and cross vanishing."""
    alg = dec.algebra
    rb = ReportBuilder()
    units = [unit_vector(alg.dim, j) for j in range(alg.dim)]

    for ci in ideals:
        rep = ci.cls.representative
        rb.start(f"self-closure[{rep}]")
        rb.start(f"twist-invariance[{rep}]")
        rb.start(f"ideal-property[{rep}]")
        rb.start(f"h-part-stability[{rep}]")
    for i, a in enumerate(ideals):
        for b in ideals[i + 1:]:
            rb.start(f"cross-annihilation[{a.cls.representative}; {b.cls.representative}]")

    for ci in ideals:
        rep = ci.cls.representative
        space = ci.ideal
        for u in space.basis:
            for v in space.basis:
                for table in (alg.bracket_vec, alg.product_vec):
                    w = table(u, v)
                    if not space.contains_vector(w):
                        rb.fail(f"self-closure[{rep}]", _escape_witness(alg, space, w, u, v))
        for name, m in (("phi", alg.phi), ("psi", alg.psi)):
            image = space.apply(m)
            if image != space:
                rb.fail(f"twist-invariance[{rep}]", Witness(
                    (str(rep),), image.basis[0] if image.basis else (),
                    space.basis[0] if space.basis else (),
                    f"{name} does not fix the ideal"))
        for u in space.basis:
            for e in units:
                values = (alg.bracket_vec(u, e), alg.product_vec(u, e),
                          alg.product_vec(e, u))
                for w in values:
                    if not space.contains_vector(w):
                        rb.fail(f"ideal-property[{rep}]", _escape_witness(alg, space, w, u, e))
        for u in ci.h_part.basis:
            for h in dec.cartan.basis:
                for w in (alg.product_vec(u, h), alg.product_vec(h, u)):
                    if not ci.h_part.contains_vector(w):
                        rb.fail(f"h-part-stability[{rep}]",
                                _escape_witness(alg, ci.h_part, w, u, h))

    for i, a in enumerate(ideals):
        for b in ideals[i + 1:]:
            name = f"cross-annihilation[{a.cls.representative}; {b.cls.representative}]"
            for u in a.ideal.basis:
                for v in b.ideal.basis:
                    for table in (alg.bracket_vec, alg.product_vec):
                        for w in (table(u, v), table(v, u)):
                            if not is_zero_vector(w):
                                rb.fail(name, Witness(
                                    (alg.format_vector(u), alg.format_vector(v)),
                                    w, zero_vector(alg.dim),
                                    "product of distinct class ideals is nonzero"))
    return rb.build()


def _escape_witness(alg: SuperAlgebra, space: Subspace, w: Vector,
                    u: Vector, v: Vector) -> Witness:
    residual = space.residual(w)
    inside = tuple(x - r for x, r in zip(w, residual))
    return Witness((alg.format_vector(u), alg.format_vector(v)), w, inside,
                   "value escapes the subspace")


def global_decompose(dec: SplitDecomposition) -> DecompositionReport:
    """Assemble all class ideals, the complement inside H and both directness routes."""
    if not dec.is_split:
        raise NotSplit("global decomposition needs a split decomposition")
    alg = dec.algebra
    classes = connection_classes(dec)
    ideals = tuple(build_class_ideal(dec, cls) for cls in classes)

    generated = Subspace.zero(alg.dim)
    for ci in ideals:
        generated = generated + ci.h_part
    cartan_generated = generated == dec.cartan
    complement_part = complement(generated, dec.cartan)

    z = center(alg)
    direct_by_criteria = z.is_zero and cartan_generated

    total = complement_part
    dims = 0
    pairwise_trivial = True
    for i, ci in enumerate(ideals):
        total = total + ci.ideal
        dims += ci.ideal.dim
        for other in ideals[i + 1:]:
            if not ci.ideal.intersection(other.ideal).is_zero:
                pairwise_trivial = False
    spans_algebra = total.dim == alg.dim
    direct_by_dimension = pairwise_trivial and dims == alg.dim

    return DecompositionReport(
        ideals=ideals,
        complement_part=complement_part,
        center=z,
        cartan_generated=cartan_generated,
        spans_algebra=spans_algebra,
        direct_by_criteria=direct_by_criteria,
        direct_by_dimension=direct_by_dimension,
    )


def _maximal_length(dec: SplitDecomposition) -> bool:
    return all(space.even.dim <= 1 and space.odd.dim <= 1
               for space in dec.spaces.values())


def _root_multiplicative(dec: SplitDecomposition, printed_form: bool) -> bool:
    """Whenever a twisted sum of two roots is a root, their products are nonzero.

    ``printed_form`` pairs alpha with psi^(-1) and beta with phi^(-1); the
    closure form swaps the twists.  Both coincide when phi equals psi.
    """
    alg = dec.algebra
    for alpha in dec.roots:
        a_twist = dec.transform_root(alpha, "psi_inv" if printed_form else "phi_inv")
        for beta in dec.roots:
            b_twist = dec.transform_root(beta, "phi_inv" if printed_form else "psi_inv")
            gamma = a_twist + b_twist
            if gamma.is_zero or gamma not in dec.spaces:
                continue
            for pa in (EVEN, ODD):
                left = dec.graded_space(alpha, pa)
                if left.is_zero:
                    continue
                for pb in (EVEN, ODD):
                    right = dec.graded_space(beta, pb)
                    if right.is_zero:
                        continue
                    if dec.graded_space(gamma, (pa + pb) % 2).is_zero:
                        continue
                    hit = any(
                        not is_zero_vector(alg.bracket_vec(u, v))
                        or not is_zero_vector(alg.product_vec(u, v))
                        for u in left.basis for v in right.basis
                    )
                    if not hit:
                        return False
    return True


def simplicity_report(dec: SplitDecomposition, cap: int = 12,
                      force_bruteforce: bool = False) -> SimplicityReport:
    """Evaluate the simplicity criteria and, within the cap, the brute-force oracle.

    ``criteria_simple`` is populated only when the maximal-length and
    root-multiplicativity hypotheses hold; the oracle runs whenever the
    dimension is within ``cap`` (always when forced).
    """
    if not dec.is_split:
        raise NotSplit("simplicity analysis needs a split decomposition")
    if not dec.symmetric:
        raise AsymmetricRootSystem("simplicity analysis needs a symmetric root system")
    alg = dec.algebra

    report = global_decompose(dec)
    maximal_length = _maximal_length(dec)
    root_mult = _root_multiplicative(dec, printed_form=True)
    root_mult_closure = _root_multiplicative(dec, printed_form=False)
    center_zero = report.center.is_zero
    all_connected = len(report.ideals) <= 1
    products_nonzero = not (alg.bracket.is_zero and alg.product.is_zero)

    criteria: bool | None = None
    if maximal_length and root_mult:
        criteria = center_zero and report.cartan_generated and all_connected

    brute: bool | None = None
    witness: Subspace | None = None
    if force_bruteforce or alg.dim <= cap:
        brute, witness = is_simple_bruteforce(
            alg, dec, cap=max(cap, alg.dim) if force_bruteforce else cap)

    return SimplicityReport(
        center_zero=center_zero,
        cartan_generated=report.cartan_generated,
        all_connected=all_connected,
        maximal_length=maximal_length,
        root_multiplicative=root_mult,
        root_multiplicative_closure_form=root_mult_closure,
        products_nonzero=products_nonzero,
        criteria_simple=criteria,
        bruteforce_simple=brute,
        bruteforce_witness=witness,
    )


def restrict_to_ideal(dec: SplitDecomposition,
                      ci: ClassIdeal) -> tuple[SuperAlgebra, tuple[Vector, ...]]:
    """Structure constants of the algebra restricted to one class ideal.

    Returns the restricted algebra in a basis adapted to the H-part
    followed by the class root spaces, together with the coefficient
    vectors (in restricted coordinates) spanning the restricted H.
    """
    alg = dec.algebra
    rows: list[Vector] = []
    parities: list[int] = []
    for row in ci.h_part.basis:
        parity = alg.basis.homogeneous_parity(row)
        assert parity is not None
        rows.append(row)
        parities.append(parity)
    h_count = len(rows)
    for beta in ci.cls.members:
        for parity in (EVEN, ODD):
            for row in dec.graded_space(beta, parity).basis:
                rows.append(row)
                parities.append(parity)

    k = len(rows)

    def coords(w: Vector) -> Vector:
        c = coordinates_in_rows(rows, w)
        if c is None:
            raise ValueError("the class ideal is not closed; restriction impossible")
        return c

    bracket = {}
    product = {}
    for i in range(k):
        for j in range(k):
            b = coords(alg.bracket_vec(rows[i], rows[j]))
            if not is_zero_vector(b):
                bracket[(i, j)] = list(enumerate(b))
            p = coords(alg.product_vec(rows[i], rows[j]))
            if not is_zero_vector(p):
                product[(i, j)] = list(enumerate(p))

    def restricted_map(m: Matrix) -> Matrix:
        cols = [coords(m.apply(r)) for r in rows]
        return Matrix(tuple(tuple(col[i] for col in cols) for i in range(k)), k)

    sub = SuperAlgebra(
        basis=GradedBasis(tuple(f"v{i}" for i in range(k)), tuple(parities)),
        bracket=BilinearTable.from_map(k, bracket),
        product=BilinearTable.from_map(k, product),
        phi=restricted_map(alg.phi),
        psi=restricted_map(alg.psi),
    )
    sub_h = tuple(unit_vector(k, i) for i in range(h_count))
    return sub, sub_h


def fine_decomposition(dec: SplitDecomposition, cap: int = 12,
                       ) -> tuple[tuple[ClassIdeal, SimplicityReport], ...]:
    """Split the algebra into its class ideals and certify each one simple.

    The hypotheses (maximal length, root multiplicativity, trivial
    center, generated H) are verified first and reported together when
    they fail.
    """
    if not dec.is_split:
        raise NotSplit("fine decomposition needs a split decomposition")
    if not dec.symmetric:
        raise AsymmetricRootSystem("fine decomposition needs a symmetric root system")
    report = global_decompose(dec)
    failed = []
    if not _maximal_length(dec):
        failed.append("maximal-length")
    if not _root_multiplicative(dec, printed_form=True):
        failed.append("root-multiplicative")
    if not report.center.is_zero:
        failed.append("center-zero")
    if not report.cartan_generated:
        failed.append("cartan-generated")
    if failed:
        raise HypothesesNotMet(tuple(failed))

    out = []
    for ci in report.ideals:
        sub, sub_h = restrict_to_ideal(dec, ci)
        sub_dec = decompose_roots(sub, sub_h)
        out.append((ci, simplicity_report(sub_dec, cap=cap)))
    return tuple(out)
