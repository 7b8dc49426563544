"""Order-preserving selections on posets of convex sets and sublattices.

A selection assigns to every set a member, monotonically with respect to
bi-domination.  Constructors here either search for one, build one from
structure (minima, weaving, lexicographic decomposition) or transport one
along products, retractions and quotients; every output is re-verified.
"""

from __future__ import annotations

from dataclasses import dataclass

from .convexity import ConvexSet, bidom_leq, enumerate_convex_poset
from .core import MonotoneMap, Poset, bits, popcount
from .deciders import Verdict, retract_search
from .errors import (
    BadParams,
    BudgetExceeded,
    HostMismatch,
    InvalidParts,
    NotAChain,
)
from .lattices import Lattice, convex_sublattices, initial_segments, quotient
from .search import Budget, node_budget, search_monotone_map_dynamic


@dataclass(frozen=True)
class SelectionMap:
    """Member choice for a family of sets over a host poset."""

    host: Poset
    sets: tuple
    values: tuple

    def __post_init__(self):
        if len(self.sets) != len(self.values):
            raise BadParams("one value per set required")

    def as_dict(self):
        return dict(zip(self.sets, self.values))

    def __len__(self):
        return len(self.sets)


def verify_selection(m):
    """Exhaustive membership and monotonicity check.

    Returns ``(True, None)`` or ``(False, violation)`` where the violation
    is ``("membership", i)`` or ``("monotone", (i, j))``.
    """
    P = m.host
    for i, (s, v) in enumerate(zip(m.sets, m.values)):
        if not (s >> v) & 1:
            return False, ("membership", i)
    for i in range(len(m.sets)):
        for j in range(len(m.sets)):
            if i == j:
                continue
            if bidom_leq(P, m.sets[i], m.sets[j]) and not P.leq(
                m.values[i], m.values[j]
            ):
                return False, ("monotone", (i, j))
    return True, None


# --- selection property for convex subsets --------------------------------


def _bipartite_obstruction(P):
    """True when P is bipartite with every comparability degree at least 2."""
    return (
        P.n > 0
        and P.is_bipartite()
        and all(P.comparability_degree(x) >= 2 for x in range(P.n))
    )


def _bounded_crown_retract(P, budget):
    """Retraction of P onto the bounded 6-crown, if one exists.

    The bounded crown has no selection: its middle levels form a convex
    bipartite subset with all degrees 2, and selections restrict to convex
    subsets and transfer along retractions.
    """
    from .zoo import generate

    crown = generate("crown_bounded", 6).poset
    if P.n < crown.n:
        return None
    try:
        verdict = retract_search(P, crown, budget=budget)
    except BudgetExceeded:
        return None
    return verdict.witness if verdict.holds else None


def decide_csp(P, fast_paths=True, budget=None, cp=None):
    """Existence of a monotone selection on all nonempty convex subsets.

    Fast negative paths: the bipartite degree obstruction on ``P`` itself,
    then a retraction onto the bounded 6-crown.  Otherwise a backtracking
    search over the convex-set poset, most constrained set first, either
    produces a verified selection or exhausts.
    """
    if fast_paths:
        if _bipartite_obstruction(P):
            return Verdict("CSP", False, fast_path="bipartite-degree-2")
        if P.n >= 8:
            fast_budget = min(node_budget(budget) // 10, 500_000)
            pair = _bounded_crown_retract(P, fast_budget)
            if pair is not None:
                return Verdict(
                    "CSP",
                    False,
                    witness=pair,
                    fast_path="bounded-crown-retract",
                )
    if cp is None:
        cp = enumerate_convex_poset(P)
    dom = cp.as_poset()
    b = Budget(budget)
    h = P.heights()
    candidates = [
        sorted(bits(m), key=lambda v: (h[v], v)) for m in cp.sets
    ]
    found = search_monotone_map_dynamic(dom, P.up, P.dn, candidates, b)
    if found is None:
        return Verdict("CSP", False, nodes=b.nodes)
    sel = SelectionMap(P, cp.sets, tuple(found))
    ok, viol = verify_selection(sel)
    assert ok, f"search produced an invalid selection: {viol}"
    return Verdict("CSP", True, witness=sel, nodes=b.nodes)


def chain_selection(cp, chain):
    """Greedy selection along an ascending chain of convex sets.

    Picks the lowest-index member of the first set, then the lowest-index
    member above the previous pick; the next set always contains one
    because consecutive sets compare under bi-domination.
    """
    P = cp.host
    masks = []
    for S in chain:
        if isinstance(S, ConvexSet):
            if S.host != P:
                raise HostMismatch("chain member over a different host")
            masks.append(S.members)
        else:
            masks.append(cp.sets[S])
    for a, b_ in zip(masks, masks[1:]):
        if not bidom_leq(P, a, b_):
            raise NotAChain("list is not ascending under bi-domination")
    values = []
    prev = None
    for m in masks:
        pool = m if prev is None else m & P.up[prev]
        assert pool, "ascending chain must stay reachable"
        v = next(bits(pool))
        values.append(v)
        prev = v
    sel = SelectionMap(P, tuple(masks), tuple(values))
    ok, viol = verify_selection(sel)
    assert ok, f"greedy chain selection failed: {viol}"
    return sel


# --- selections on convex sublattices --------------------------------------


def min_selection(T, cl=None):
    """Send every convex sublattice to its least element."""
    if cl is None:
        cl = convex_sublattices(T)
    values = tuple(T.meet_mask(m) for m in cl.sets)
    sel = SelectionMap(T.order, cl.sets, values)
    ok, viol = verify_selection(sel)
    assert ok, f"minimum selection failed: {viol}"
    return sel


def max_selection(T, cl=None):
    """Dual form: send every convex sublattice to its greatest element."""
    if cl is None:
        cl = convex_sublattices(T)
    values = tuple(T.join_mask(m) for m in cl.sets)
    sel = SelectionMap(T.order, cl.sets, values)
    ok, viol = verify_selection(sel)
    assert ok, f"maximum selection failed: {viol}"
    return sel


def weaving_selection(T, enumeration, cl=None):
    """Stagewise selection driven by an enumeration of the lattice.

    Stage k handles the not-yet-handled sublattices containing the k-th
    element: the value is the enumerated element meeted with the values
    already chosen strictly above, then joined with those strictly below
    (empty meet is the top, empty join the bottom).  Stage invariants
    (membership, finitely many values, monotonicity so far) are asserted
    per stage.
    """
    if sorted(enumeration) != list(range(T.n)):
        raise BadParams("enumeration must be a permutation of the elements")
    if cl is None:
        cl = convex_sublattices(T)
    m = len(cl.sets)
    phi = {}
    handled = []
    for k, xk in enumerate(enumeration):
        stage = [
            i for i in range(m) if (cl.sets[i] >> xk) & 1 and i not in phi
        ]
        for c in stage:
            above = [phi[d] for d in handled if cl.order.lt(c, d)]
            below = [phi[d] for d in handled if cl.order.lt(d, c)]
            plus = T.top
            for v in above:
                plus = T.meet(plus, v)
            minus = T.bottom
            for v in below:
                minus = T.join(minus, v)
            phi[c] = T.join(T.meet(xk, plus), minus)
        handled.extend(stage)
        if k == 0:
            assert all(phi[c] == xk for c in stage), (
                "first stage must choose the enumerated element itself"
            )
        for c in stage:
            assert (cl.sets[c] >> phi[c]) & 1, "stage value left its set"
        assert len(set(phi.values())) <= len(handled)
        for i in handled:
            for j in handled:
                if cl.order.lt(i, j):
                    assert T.leq(phi[i], phi[j]), "stage monotonicity broke"
    assert len(handled) == m
    sel = SelectionMap(T.order, cl.sets, tuple(phi[i] for i in range(m)))
    ok, viol = verify_selection(sel)
    assert ok, f"weaving selection failed: {viol}"
    return sel


# --- lexicographic sums -----------------------------------------------------


def lexsum_selection(L, subselections, index_selection):
    """Selection on the segment lattice of a lexicographic sum.

    A convex sublattice of segments projects to a convex sublattice over
    the index; the index selection fixes which blocks are fully used, and
    the per-block selections choose inside the maximal blocks.
    """
    if len(subselections) != len(L.blocks):
        raise InvalidParts("one block selection per block required")
    IP = initial_segments(L.sum)
    clP = convex_sublattices(IP)
    IA = initial_segments(L.index)
    index_lookup = index_selection.as_dict()
    block_lats = [initial_segments(B) for B in L.blocks]
    block_lookups = [sel.as_dict() for sel in subselections]
    for sel, B_lat in zip(subselections, block_lats):
        if sel.host != B_lat.order:
            raise InvalidParts("block selection over the wrong segment lattice")
    if index_selection.host != IA.order:
        raise InvalidParts("index selection over the wrong segment lattice")

    def project(seg_mask):
        """Index set of blocks met by a segment of the sum."""
        out = 0
        for a in range(L.index.n):
            if seg_mask & L.block_mask(a):
                out |= 1 << a
        return out

    values = []
    for family in clP.sets:
        theta = 0
        members = [IP.sets[i] for i in bits(family)]
        for seg in members:
            theta |= 1 << IA.index[project(seg)]
        a_prime_idx = index_lookup[theta]
        a_prime = IA.sets[a_prime_idx]
        maximal = [
            a
            for a in bits(a_prime)
            if L.index.up[a] & ~(1 << a) & a_prime == 0
        ]
        chosen = 0
        for a in bits(a_prime):
            if a not in maximal:
                chosen |= L.block_mask(a)
        for a in maximal:
            lat = block_lats[a]
            local_family = 0
            for seg in members:
                local = (seg & L.block_mask(a)) >> L.offsets[a]
                local_family |= 1 << lat.index[local]
            picked_idx = block_lookups[a][local_family]
            chosen |= lat.sets[picked_idx] << L.offsets[a]
        values.append(IP.index[chosen])
    sel = SelectionMap(IP.order, clP.sets, tuple(values))
    ok, viol = verify_selection(sel)
    assert ok, f"lexicographic-sum selection failed: {viol}"
    return sel


# --- transfers ---------------------------------------------------------------


def _convex_hull_mask(P, mask):
    return P.downset(mask) & P.upset(mask)


def transfer_selection(kind, parts):
    """Transport a selection along a product, retraction or quotient.

    ``parts`` is a dict whose keys depend on ``kind``:

    - ``product``: factors (two lattices), selections (their selections);
    - ``retract``: big (lattice), small (lattice), selection (on the big
      one), s and r (the coretraction/retraction maps between the orders);
    - ``quotient``: lattice, congruence, selection (on the lattice).
    """
    if kind == "product":
        return _transfer_product(parts)
    if kind == "retract":
        return _transfer_retract(parts)
    if kind == "quotient":
        return _transfer_quotient(parts)
    raise InvalidParts(f"unknown transfer kind {kind!r}")


def _transfer_product(parts):
    try:
        T0, T1 = parts["factors"]
        m0, m1 = parts["selections"]
    except (KeyError, ValueError) as exc:
        raise InvalidParts(str(exc))
    from .core import direct_product

    prod_order = direct_product(T0.order, T1.order)
    T = Lattice(prod_order)
    cl = convex_sublattices(T)
    d0, d1 = m0.as_dict(), m1.as_dict()
    n1 = T1.order.n
    values = []
    for S in cl.sets:
        p0 = 0
        p1 = 0
        for e in bits(S):
            p0 |= 1 << (e // n1)
            p1 |= 1 << (e % n1)
        rebuilt = 0
        for x in bits(p0):
            for y in bits(p1):
                rebuilt |= 1 << (x * n1 + y)
        if rebuilt != S:
            raise InvalidParts("product sublattice is not a box")
        values.append(d0[p0] * n1 + d1[p1])
    sel = SelectionMap(prod_order, cl.sets, tuple(values))
    ok, viol = verify_selection(sel)
    assert ok, f"product transfer failed: {viol}"
    return sel


def _transfer_retract(parts):
    try:
        big = parts["big"]
        small = parts["small"]
        sel_big = parts["selection"]
        s = parts["s"]
        r = parts["r"]
    except KeyError as exc:
        raise InvalidParts(str(exc))
    if s.domain != small.order or s.codomain != big.order:
        raise InvalidParts("coretraction endpoints are wrong")
    if r.domain != big.order or r.codomain != small.order:
        raise InvalidParts("retraction endpoints are wrong")
    if any(r.values[s.values[y]] != y for y in range(small.order.n)):
        raise InvalidParts("r after s is not the identity")
    lookup = sel_big.as_dict()
    cl_small = convex_sublattices(small)
    values = []
    for Y in cl_small.sets:
        image = 0
        for y in bits(Y):
            image |= 1 << s.values[y]
        lifted = _convex_hull_mask(big.order, image)
        values.append(r.values[lookup[lifted]])
    sel = SelectionMap(small.order, cl_small.sets, tuple(values))
    ok, viol = verify_selection(sel)
    assert ok, f"retract transfer failed: {viol}"
    return sel


def coretraction_from_selection(T, cong, selection):
    """Quotient map together with the selection-built coretraction.

    The preimage of a quotient element is a convex sublattice; choosing in
    it with the given selection yields a monotone map splitting the
    quotient, so the quotient is a retract.
    """
    Q, q = quotient(T, cong)
    lookup = selection.as_dict()
    preimages = []
    bo = cong.block_of(T.n)
    for j in range(Q.order.n):
        mask = 0
        for x in range(T.n):
            if bo[x] == j:
                mask |= 1 << x
        preimages.append(mask)
    f = MonotoneMap(Q.order, T.order, tuple(lookup[m] for m in preimages))
    assert all(q.values[f.values[y]] == y for y in range(Q.order.n))
    return Q, q, f


def _transfer_quotient(parts):
    try:
        T = parts["lattice"]
        cong = parts["congruence"]
        sel_big = parts["selection"]
    except KeyError as exc:
        raise InvalidParts(str(exc))
    Q, q, f = coretraction_from_selection(T, cong, sel_big)
    return _transfer_retract(
        {"big": T, "small": Q, "selection": sel_big, "s": f, "r": q}
    )
