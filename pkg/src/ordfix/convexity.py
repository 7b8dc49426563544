"""Convex subsets under the bi-domination order.

A nonempty ``X`` is below ``Y`` when ``X`` is contained in the down-set of
``Y`` and ``Y`` in the up-set of ``X``.  On arbitrary nonempty subsets this
is only a preorder; restricted to convex sets it is a partial order, and
equivalence classes of subsets are represented by their convex envelopes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import Poset, bits, popcount, require_nonempty
from .errors import (
    BudgetExceeded,
    EmptyInput,
    HostMismatch,
    NotAPregap,
    NotARetraction,
    PreconditionUnsatisfiable,
)

CONVEX_BUDGET_DEFAULT = 20_000


@dataclass(frozen=True)
class ConvexSet:
    """Nonempty convex subset of a host poset, stored as a bitmask."""

    host: Poset
    members: int

    def __post_init__(self):
        if self.members == 0:
            raise EmptyInput("convex set must be nonempty")
        if self.members >> self.host.n:
            raise EmptyInput("members outside host")
        hull = self.host.downset(self.members) & self.host.upset(self.members)
        if hull != self.members:
            raise EmptyInput(
                f"set {sorted(bits(self.members))} is not convex"
            )

    def down(self):
        return self.host.downset(self.members)

    def up(self):
        return self.host.upset(self.members)

    def elements(self):
        return sorted(bits(self.members))

    def __repr__(self):
        return f"ConvexSet({self.elements()})"


def convex_envelope(P, X):
    """Smallest convex superset of the nonempty subset ``X``."""
    require_nonempty(X)
    hull = P.downset(X) & P.upset(X)
    return ConvexSet(P, hull)


def bidom_leq(P, X, Y):
    """Bi-domination comparison of two nonempty subsets (masks)."""
    return X & ~P.downset(Y) == 0 and Y & ~P.upset(X) == 0


def bidom_compare(X, Y):
    """One of 'less', 'greater', 'equal', 'incomparable' for convex sets."""
    if X.host != Y.host:
        raise HostMismatch("convex sets over different hosts")
    P = X.host
    le = bidom_leq(P, X.members, Y.members)
    ge = bidom_leq(P, Y.members, X.members)
    if le and ge:
        return "equal"
    if le:
        return "less"
    if ge:
        return "greater"
    return "incomparable"


class CPoset:
    """All nonempty convex subsets of a host, ordered by bi-domination.

    ``sets`` lists the member bitmasks in canonical (size, mask) order;
    ``index`` maps each mask back to its position.  The relation matrix is
    materialised lazily because only the small instances ever need it.
    """

    __slots__ = ("host", "sets", "index", "downs", "ups", "_rows", "_heights")

    def __init__(self, host, sets):
        self.host = host
        self.sets = tuple(sorted(sets, key=lambda m: (popcount(m), m)))
        self.index = {m: i for i, m in enumerate(self.sets)}
        self.downs = tuple(host.downset(m) for m in self.sets)
        self.ups = tuple(host.upset(m) for m in self.sets)
        self._rows = None
        self._heights = None

    def __len__(self):
        return len(self.sets)

    def element(self, i):
        return ConvexSet(self.host, self.sets[i])

    @property
    def elements(self):
        return [self.element(i) for i in range(len(self.sets))]

    def leq(self, i, j):
        return (
            self.sets[i] & ~self.downs[j] == 0
            and self.sets[j] & ~self.ups[i] == 0
        )

    def rows(self):
        """Full bi-domination matrix as bit rows (row i = sets above i)."""
        if self._rows is None:
            m = len(self.sets)
            rows = [0] * m
            for i in range(m):
                row = 0
                for j in range(m):
                    if self.leq(i, j):
                        row |= 1 << j
                rows[i] = row
            self._rows = tuple(rows)
        return self._rows

    def as_poset(self):
        """The bi-domination order as an abstract poset on indices."""
        return Poset(len(self.sets), self.rows(), check=False)

    def heights(self):
        if self._heights is None:
            self._heights = tuple(self.as_poset().heights())
        return self._heights

    def singleton_index(self, x):
        return self.index[1 << x]


def enumerate_convex_poset(P, budget=CONVEX_BUDGET_DEFAULT):
    """Every nonempty convex subset of ``P``, by closure-grown orbit walk.

    Starting from singletons, repeatedly adjoin one element and take the
    convex envelope; every convex set is reached this way because envelopes
    of subsets of a convex set stay inside it.
    """
    seen = set()
    queue = []
    for x in range(P.n):
        m = 1 << x
        seen.add(m)
        queue.append(m)
    while queue:
        m = queue.pop()
        outside = P.full & ~m
        for x in bits(outside):
            grown = m | (1 << x)
            hull = P.downset(grown) & P.upset(grown)
            if hull not in seen:
                if len(seen) >= budget:
                    raise BudgetExceeded(budget, "convex-set enumeration")
                seen.add(hull)
                queue.append(hull)
    return CPoset(P, seen)


def phi_embedding_check(C):
    """Check that X -> (down-set, up-set) embeds C into I(P) x F(P)*.

    The pair order is containment on the first coordinate and reverse
    containment on the second.  Returns ``(True, None)`` or a violating
    index pair.
    """
    m = len(C)
    for i in range(m):
        for j in range(m):
            pair_le = (
                C.downs[i] & ~C.downs[j] == 0 and C.ups[j] & ~C.ups[i] == 0
            )
            if C.leq(i, j) != pair_le:
                return False, (i, j)
    return True, None


# --- pregaps -----------------------------------------------------------


@dataclass(frozen=True)
class Pregap:
    """Pair of families of convex sets with every A below every B.

    ``lower_hull`` caches the intersection of the down-sets of the upper
    family and ``upper_hull`` the intersection of the up-sets of the lower
    family (both equal to the full host when the family is empty).
    """

    A_family: tuple
    B_family: tuple
    lower_hull: int = field(init=False)  # I_B: meet of down-sets of B's
    upper_hull: int = field(init=False)  # F_A: meet of up-sets of A's

    def __post_init__(self):
        host = self.host()
        for A in self.A_family:
            for B in self.B_family:
                if bidom_compare(A, B) not in ("less", "equal"):
                    raise NotAPregap(
                        f"{A} is not below {B} in the bi-domination order"
                    )
        lower = host.full if host else 0
        for B in self.B_family:
            lower &= B.down()
        upper = host.full if host else 0
        for A in self.A_family:
            upper &= A.up()
        object.__setattr__(self, "lower_hull", lower)
        object.__setattr__(self, "upper_hull", upper)

    def host(self):
        for S in self.A_family + self.B_family:
            return S.host
        return None

    def totally_ordered(self):
        """True when the union of both families is a bi-domination chain."""
        fam = self.A_family + self.B_family
        for i, X in enumerate(fam):
            for Y in fam[i + 1 :]:
                if bidom_compare(X, Y) == "incomparable":
                    return False
        return True


def pregap(A_sets, B_sets):
    return Pregap(tuple(A_sets), tuple(B_sets))


def separators(G, cp=None):
    """All convex sets between the two families; empty list means a gap."""
    host = G.host()
    if host is None:
        raise NotAPregap("empty pregap has no host")
    if cp is None:
        cp = enumerate_convex_poset(host)
    out = []
    for m in cp.sets:
        C = ConvexSet(host, m)
        if all(bidom_compare(A, C) in ("less", "equal") for A in G.A_family) and all(
            bidom_compare(C, B) in ("less", "equal") for B in G.B_family
        ):
            out.append(C)
    return out


def special_pregap(G):
    """Replace each A by lower_hull & up(A) and each B by upper_hull & down(B).

    The result is again a pregap with the same two hulls, and its separators
    are among the originals; both facts are asserted (the second via the
    chain A <= A' <= B' <= B, which implies the containment).
    """
    host = G.host()
    if host is None:
        raise NotAPregap("empty pregap")
    new_A = []
    for A in G.A_family:
        m = G.lower_hull & A.up()
        if m == 0:
            raise NotAPregap("lower hull misses the up-set of a lower member")
        new_A.append(ConvexSet(host, m))
    new_B = []
    for B in G.B_family:
        m = G.upper_hull & B.down()
        if m == 0:
            raise NotAPregap("upper hull misses the down-set of an upper member")
        new_B.append(ConvexSet(host, m))
    out = Pregap(tuple(new_A), tuple(new_B))
    assert out.upper_hull == G.upper_hull, "upper hull must be preserved"
    assert out.lower_hull == G.lower_hull, "lower hull must be preserved"
    for A, A2 in zip(G.A_family, new_A):
        assert bidom_compare(A, A2) in ("less", "equal")
    for B, B2 in zip(G.B_family, new_B):
        assert bidom_compare(B2, B) in ("less", "equal")
    for A2 in new_A:
        for B2 in new_B:
            assert bidom_compare(A2, B2) in ("less", "equal")
    return out


def fixpointfree_from_gap(C, G):
    """Fixed-point-free map promised by a totally ordered gap.

    On a finite host the required emptiness can never hold: the lower
    family has a maximum A* and the upper family a minimum B*, and every
    member of B* lies in up(A*) & down(B*).  The operation therefore always
    raises, reporting such a witness.
    """
    if not G.A_family or not G.B_family:
        raise NotAPregap("both families must be nonempty")
    if not G.totally_ordered():
        raise NotAPregap("families are not totally ordered")
    meet = G.upper_hull & G.lower_hull
    if meet:
        witness = next(bits(meet))
        raise PreconditionUnsatisfiable(
            "up-hull and down-hull intersect on a finite host "
            f"(witness element {witness}); a totally ordered pregap has a "
            "maximal lower member A* and a minimal upper member B*, and any "
            "member of B* lies in both hulls"
        )
    # Unreachable on finite hosts; kept for interface symmetry.
    raise PreconditionUnsatisfiable("empty hull intersection is impossible here")


# --- transport of retractions to the convex-set level -------------------


@dataclass(frozen=True)
class CPosetMap:
    """Map between convex-set posets, stored by target index."""

    domain: CPoset
    codomain: CPoset
    values: tuple

    def __post_init__(self):
        viol = self.violation()
        if viol is not None:
            i, j = viol
            raise NotARetraction(
                f"induced map not order preserving at {i} <= {j}"
            )

    def violation(self):
        for i in range(len(self.domain)):
            for j in range(len(self.domain)):
                if self.domain.leq(i, j) and not self.codomain.leq(
                    self.values[i], self.values[j]
                ):
                    return (i, j)
        return None

    def __call__(self, i):
        return self.values[i]


def cbar_retraction(s, r, cp_P=None, cp_Q=None):
    """Lift a retraction pair to the convex-set posets.

    ``s`` embeds Q into P and ``r`` retracts P onto Q with r(s(y)) = y.  The
    lifted maps take convex envelopes of images; the lifted pair is again a
    retraction, which is asserted.
    """
    Q, P = s.domain, s.codomain
    if r.domain != P or r.codomain != Q:
        raise NotARetraction("maps do not form a Q -> P -> Q pair")
    if any(r.values[s.values[y]] != y for y in range(Q.n)):
        raise NotARetraction("r after s is not the identity")
    if cp_P is None:
        cp_P = enumerate_convex_poset(P)
    if cp_Q is None:
        cp_Q = enumerate_convex_poset(Q)

    def push(mask, f, target):
        image = 0
        for x in bits(mask):
            image |= 1 << f.values[x]
        return target.downset(image) & target.upset(image)

    sbar = CPosetMap(
        cp_Q,
        cp_P,
        tuple(cp_P.index[push(m, s, P)] for m in cp_Q.sets),
    )
    rbar = CPosetMap(
        cp_P,
        cp_Q,
        tuple(cp_Q.index[push(m, r, Q)] for m in cp_P.sets),
    )
    for i in range(len(cp_Q)):
        if rbar.values[sbar.values[i]] != i:
            raise NotARetraction("lifted pair fails to retract")
    return sbar, rbar
