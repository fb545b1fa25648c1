"""Connections between roots: orbits, witness search and the quotient.

Two roots are connected either directly (one is a sign times a twist
orbit element of the other) or through a finite chain whose twisted
partial sums stay inside the root system.  Because the inverse-twist
transforms permute the finite root system, a breadth-first search over
partial-sum states terminates without exponent caps and returns a
shortest witness chain.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import AsymmetricRootSystem, NotSplit, UnknownRoot
from .roots import Root, SplitDecomposition


@dataclass(frozen=True)
class Connection:
    """Witness that two roots are connected.

    ``chain`` of length one encodes the direct clause; longer chains list
    the roots whose twisted partial sums (recorded in ``partial_sums``,
    final sum last) realize the connection.  ``start_exponents`` are the
    inverse-twist exponents producing the chain head from the source
    root, ``end_exponents`` and ``epsilon`` relate the final sum to the
    target root.
    """

    chain: tuple[Root, ...]
    epsilon: int
    start_exponents: tuple[int, int]
    end_exponents: tuple[int, int]
    partial_sums: tuple[Root, ...]


@dataclass(frozen=True)
class RootClass:
    """One equivalence class of connected roots."""

    representative: Root
    members: tuple[Root, ...]

    def __contains__(self, root: Root) -> bool:
        return root in self.members


def _require_usable(dec: SplitDecomposition, *roots: Root, symmetric: bool) -> None:
    if not dec.is_split:
        raise NotSplit("connections need a split decomposition")
    if symmetric and not dec.symmetric:
        raise AsymmetricRootSystem("the root system is not symmetric")
    known = set(dec.roots)
    for r in roots:
        if r not in known:
            raise UnknownRoot(f"{r} is not a root of this decomposition")


def _orbit_exponents(root: Root, dec: SplitDecomposition) -> dict[Root, tuple[int, int]]:
    """Closure of ``root`` under the two inverse transforms, with exponents.

    Records for each orbit element a pair (n, r) of nonnegative exponents
    realizing it; breadth-first over total exponent keeps them minimal.
    """
    known = set(dec.roots)
    seen = {root: (0, 0)}
    queue = deque([root])
    while queue:
        current = queue.popleft()
        n, r = seen[current]
        for token, bump in (("phi_inv", (1, 0)), ("psi_inv", (0, 1))):
            image = dec.transform_root(current, token)
            if image not in known:
                raise UnknownRoot(
                    f"{image} left the root system under {token}; "
                    "the decomposition violates the orbit law")
            if image not in seen:
                seen[image] = (n + bump[0], r + bump[1])
                queue.append(image)
    return seen


def orbit(root: Root, dec: SplitDecomposition) -> tuple[Root, ...]:
    """All roots of the form root . phi^(-z1) psi^(-z2), as a sorted tuple."""
    _require_usable(dec, root, symmetric=False)
    return tuple(sorted(_orbit_exponents(root, dec)))


def connect(alpha: Root, beta: Root, dec: SplitDecomposition) -> Connection | None:
    """Search for a connection from ``alpha`` to ``beta``.

    Breadth-first over partial-sum states inside the root system, seeded
    with the orbit of ``alpha``; a state is accepting when it lies in the
    orbit of ``beta`` up to sign.  Returns a minimal-length witness (ties
    resolved by the canonical root order) or None.
    """
    _require_usable(dec, alpha, beta, symmetric=True)
    start = _orbit_exponents(alpha, dec)
    finish = _orbit_exponents(beta, dec)
    targets = {root: (1, exps) for root, exps in finish.items()}
    for root, exps in finish.items():
        targets.setdefault(-root, (-1, exps))

    known = sorted(dec.roots)
    parents: dict[Root, tuple[Root, Root] | None] = {}
    queue: deque[Root] = deque()
    for head in sorted(start):
        parents[head] = None
        queue.append(head)

    def witness(state: Root) -> Connection:
        chain: list[Root] = []
        sums: list[Root] = []
        cursor: Root | None = state
        while cursor is not None:
            sums.append(cursor)
            step = parents[cursor]
            if step is None:
                chain.append(cursor)
                break
            prev, gamma = step
            chain.append(gamma)
            cursor = prev
        chain.reverse()
        sums.reverse()
        epsilon, end = targets[state]
        return Connection(
            chain=tuple(chain),
            epsilon=epsilon,
            start_exponents=start[chain[0]],
            end_exponents=end,
            partial_sums=tuple(sums),
        )

    while queue:
        state = queue.popleft()
        if state in targets:
            return witness(state)
        shifted = dec.transform_root(state, "phi_inv")
        for gamma in known:
            nxt = shifted + dec.transform_root(gamma, "psi_inv")
            if nxt in parents or nxt not in dec.spaces:
                continue
            parents[nxt] = (state, gamma)
            queue.append(nxt)
    return None


def validate_connection(conn: Connection, alpha: Root, beta: Root,
                        dec: SplitDecomposition) -> bool:
    """Recompute a witness from its chain and confirm every membership."""
    known = set(dec.roots)
    if any(c not in known for c in conn.chain):
        return False
    n, r = conn.start_exponents
    head = root_after_inverse_twists(alpha, n, r, dec)
    if head != conn.chain[0]:
        return False
    sums = [head]
    for gamma in conn.chain[1:]:
        nxt = dec.transform_root(sums[-1], "phi_inv") + dec.transform_root(gamma, "psi_inv")
        sums.append(nxt)
    if tuple(sums) != conn.partial_sums:
        return False
    if any(s not in known for s in sums[:-1]):
        return False
    m, s = conn.end_exponents
    expected = root_after_inverse_twists(beta, m, s, dec)
    if conn.epsilon == -1:
        expected = -expected
    return sums[-1] == expected


def root_after_inverse_twists(root: Root, n: int, r: int,
                              dec: SplitDecomposition) -> Root:
    out = root
    for _ in range(n):
        out = dec.transform_root(out, "phi_inv")
    for _ in range(r):
        out = dec.transform_root(out, "psi_inv")
    return out


def connection_classes(dec: SplitDecomposition) -> tuple[RootClass, ...]:
    """Partition of the root system by the connection relation.

    Union-find seeded with sign and orbit links (both are direct
    connections), then pairwise searches between surviving
    representatives.  The result does not depend on iteration order
    because the relation is an equivalence.
    """
    _require_usable(dec, symmetric=True)
    roots = sorted(dec.roots)
    parent = {r: r for r in roots}

    def find(r: Root) -> Root:
        while parent[r] != r:
            parent[r] = parent[parent[r]]
            r = parent[r]
        return r

    def union(a: Root, b: Root) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            parent[rb] = ra

    for r in roots:
        union(r, -r)
        for member in _orbit_exponents(r, dec):
            union(r, member)

    for i, a in enumerate(roots):
        for b in roots[i + 1:]:
            if find(a) != find(b) and connect(a, b, dec) is not None:
                union(a, b)

    grouped: dict[Root, list[Root]] = {}
    for r in roots:
        grouped.setdefault(find(r), []).append(r)
    return tuple(
        RootClass(representative=min(members), members=tuple(sorted(members)))
        for _, members in sorted(grouped.items())
    )
