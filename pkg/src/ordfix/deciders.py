"""Exact deciders for fixed-point properties, with machine-checkable witnesses.

A negative verdict always carries a validated fixed-point-free order
preserving map; a positive one records how it was reached (fast path or
exhaustion with a node count).  Budgets are explicit outcomes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .convexity import bidom_leq, enumerate_convex_poset
from .core import MonotoneMap, Poset, bits, popcount
from .errors import BudgetExceeded, NotMonotone
from .search import Budget, search_monotone_map


@dataclass(frozen=True)
class MultiMap:
    """Map from a poset into nonempty subsets of itself, stored as masks.

    Order preservation is with respect to bi-domination on the values.
    """

    domain: Poset
    values: tuple

    def __post_init__(self):
        P = self.domain
        for x, m in enumerate(self.values):
            if m == 0 or m >> P.n:
                raise NotMonotone(f"value of {x} is not a nonempty subset")
        v = self.violation()
        if v is not None:
            raise NotMonotone(f"multimap not order preserving at {v[0]} <= {v[1]}")

    def violation(self):
        P = self.domain
        for x in range(P.n):
            for y in bits(P.up[x] & ~(1 << x)):
                if not bidom_leq(P, self.values[x], self.values[y]):
                    return (x, y)
        return None

    def fixed_points(self):
        return [x for x in range(self.domain.n) if (self.values[x] >> x) & 1]

    def values_convex(self):
        P = self.domain
        return all(
            P.downset(m) & P.upset(m) == m for m in self.values
        )


@dataclass
class Verdict:
    """Decision outcome: property tag, answer, witness and decision path."""

    prop: str
    holds: bool
    witness: object = None
    fast_path: str = None
    nodes: int = 0

    def __bool__(self):
        return self.holds


# --- irreducibles and dismantling ----------------------------------------


def irreducibles(P):
    """Elements whose strict down-set has a maximum or strict up-set a minimum."""
    out = []
    for x in range(P.n):
        strict_dn = P.dn[x] & ~(1 << x)
        strict_up = P.up[x] & ~(1 << x)
        has_max = any(strict_dn & ~P.dn[m] == 0 for m in bits(strict_dn))
        has_min = any(strict_up & ~P.up[m] == 0 for m in bits(strict_up))
        if has_max or has_min:
            out.append(x)
    return out


def _retraction_target(P, x):
    """Where the retraction removing the irreducible ``x`` sends it."""
    strict_dn = P.dn[x] & ~(1 << x)
    for m in bits(strict_dn):
        if strict_dn & ~P.dn[m] == 0:
            return m
    strict_up = P.up[x] & ~(1 << x)
    for m in bits(strict_up):
        if strict_up & ~P.up[m] == 0:
            return m
    return None


def elimination_chain(P, pick=None):
    """Greedy irreducible removal down to a stuck core.

    Returns ``(steps, core_poset, core_labels)`` where each step is a pair
    ``(removed_label, target_label)`` and labels refer to elements of ``P``.
    ``pick`` chooses among the current irreducible labels; the default takes
    the lowest one.
    """
    cur = P
    labels = list(range(P.n))
    steps = []
    while cur.n > 1:
        irs = irreducibles(cur)
        if not irs:
            break
        options = [labels[i] for i in irs]
        chosen = min(options) if pick is None else pick(options)
        x = labels.index(chosen)
        t = _retraction_target(cur, x)
        steps.append((labels[x], labels[t]))
        keep = [i for i in range(cur.n) if i != x]
        cur, _ = cur.induced(keep)
        labels = [labels[i] for i in keep]
    return steps, cur, labels


def dismantle(P):
    """Elimination order down to a point, or the stuck core."""
    steps, core, labels = elimination_chain(P)
    if core.n == 1:
        return Verdict(
            "DISMANTLE",
            True,
            witness={"elimination": steps, "point": labels[0]},
        )
    return Verdict(
        "DISMANTLE",
        False,
        witness={"elimination": steps, "core": labels},
    )


def _retraction_to_core(P, steps):
    """Composite retraction of ``P`` onto the core left by ``steps``."""
    rho = list(range(P.n))
    for removed, target in steps:
        for y in range(P.n):
            if rho[y] == removed:
                rho[y] = target
    return rho


# --- fixed point property (single-valued maps) ----------------------------


def _search_fixed_point_free_endomap(P, budget):
    """Backtracking search for a monotone endomap with no fixed point."""
    h = P.heights()
    order_by_height = sorted(range(P.n), key=lambda v: (-h[v], v))
    candidates = [
        [v for v in order_by_height if v != x] for x in range(P.n)
    ]
    return search_monotone_map(P, P.up, candidates, budget)


def decide_fpp(P, direct=False, budget=None):
    """Fixed point property for monotone endomaps.

    The default mode reduces to the core by irreducible removal (removal
    preserves the property in both directions on finite posets) and lifts
    any witness found on the core back through the removal retractions.
    ``direct=True`` searches on ``P`` itself; the two modes agree and the
    small-size test sweep checks that.
    """
    b = Budget(budget)
    if direct or P.n == 1:
        found = _search_fixed_point_free_endomap(P, b)
        if found is None:
            return Verdict("FPP", True, fast_path=None, nodes=b.nodes)
        witness = MonotoneMap(P, P, found)
        assert not any(witness.values[x] == x for x in range(P.n))
        return Verdict("FPP", False, witness=witness, nodes=b.nodes)

    steps, core, labels = elimination_chain(P)
    found = _search_fixed_point_free_endomap(core, b)
    if found is None:
        return Verdict(
            "FPP",
            True,
            fast_path="core-reduction" if steps else None,
            nodes=b.nodes,
        )
    rho = _retraction_to_core(P, steps)
    pos = {lab: i for i, lab in enumerate(labels)}
    values = tuple(labels[found[pos[rho[y]]]] for y in range(P.n))
    witness = MonotoneMap(P, P, values)
    assert not any(witness.values[x] == x for x in range(P.n))
    return Verdict(
        "FPP",
        False,
        witness=witness,
        fast_path="core-reduction" if steps else None,
        nodes=b.nodes,
    )


# --- convex and relational fixed point properties -------------------------


def _search_fixed_point_free_multimap(P, value_masks, value_rows, budget):
    """Search a monotone map into the given value sets avoiding membership.

    Candidates are tried from the top of the bi-domination order down (few
    sets above first), so monotonicity violations prune early.
    """
    sizes = [popcount(m) for m in value_masks]
    order = sorted(
        range(len(value_masks)),
        key=lambda i: (popcount(value_rows[i]), sizes[i], value_masks[i]),
    )
    candidates = [
        [i for i in order if not (value_masks[i] >> x) & 1] for x in range(P.n)
    ]
    return search_monotone_map(P, value_rows, candidates, budget)


def decide_cfpp(P, exhaustive=False, budget=None, cp=None):
    """Fixed point property for maps into nonempty convex subsets.

    Fast path: a dismantlable poset has the property, with the elimination
    order as the decision path.  Otherwise (and always when ``exhaustive``)
    a backtracking search either produces a validated fixed-point-free
    witness or exhausts; in exhaustive mode the outcome is cross-checked
    against dismantlability.
    """
    if not exhaustive:
        dis = dismantle(P)
        if dis.holds:
            return Verdict(
                "CFPP", True, witness=dis.witness, fast_path="dismantlable"
            )
    if cp is None:
        cp = enumerate_convex_poset(P)
    b = Budget(budget)
    rows = cp.rows()
    found = _search_fixed_point_free_multimap(P, cp.sets, rows, b)
    if found is None:
        return Verdict("CFPP", True, nodes=b.nodes)
    witness = MultiMap(P, tuple(cp.sets[i] for i in found))
    assert not witness.fixed_points() and witness.values_convex()
    return Verdict(
        "CFPP",
        False,
        witness=witness,
        fast_path=None if exhaustive else "dismantle+witness-search",
        nodes=b.nodes,
    )


RFPP_SIZE_MAX = 5


def decide_rfpp(P, budget=None):
    """Fixed point property for maps into arbitrary nonempty subsets.

    The value space is exponential, so the size is capped; bi-domination is
    only a preorder here, which the search kernel tolerates.
    """
    if P.n > RFPP_SIZE_MAX:
        raise BudgetExceeded(RFPP_SIZE_MAX, "relational decider size")
    masks = list(range(1, 1 << P.n))
    rows = []
    for m in masks:
        row = 0
        for j, m2 in enumerate(masks):
            if bidom_leq(P, m, m2):
                row |= 1 << j
        rows.append(row)
    b = Budget(budget)
    order = sorted(range(len(masks)), key=lambda i: (popcount(rows[i]), masks[i]))
    candidates = [
        [i for i in order if not (masks[i] >> x) & 1] for x in range(P.n)
    ]
    found = search_monotone_map(P, rows, candidates, b)
    if found is None:
        return Verdict("RFPP", True, nodes=b.nodes)
    witness = MultiMap(P, tuple(masks[i] for i in found))
    assert not witness.fixed_points()
    return Verdict("RFPP", False, witness=witness, nodes=b.nodes)


def decide_fpp_cposet(P, force_search=False, budget=None):
    """Fixed point property of the poset of convex subsets of ``P``.

    Fast paths: dismantlable hosts imply the property; otherwise the host
    is first shrunk by irreducible removal (the property transfers both
    ways across one removal), the decision runs on the core's convex-set
    poset, and any witness is lifted back level by level.
    """
    dis = dismantle(P)
    if dis.holds and not force_search:
        return Verdict(
            "CP_FPP", True, witness=dis.witness, fast_path="dismantlable"
        )
    steps, core, labels = elimination_chain(P)
    cp_core = enumerate_convex_poset(core)
    inner = decide_fpp(cp_core.as_poset(), budget=budget)
    if inner.holds:
        return Verdict(
            "CP_FPP",
            True,
            fast_path="irreducible-reduction" if steps else None,
            nodes=inner.nodes,
        )
    witness = _lift_cposet_witness(P, steps, core, labels, cp_core, inner.witness)
    return Verdict(
        "CP_FPP",
        False,
        witness=witness,
        fast_path="irreducible-reduction" if steps else None,
        nodes=inner.nodes,
    )


def _lift_cposet_witness(P, steps, core, labels, cp_core, core_map):
    """Transport a fixed-point-free endomap of C(core) up to C(P).

    Each removal step is a retraction; its lift to the convex-set posets
    (convex envelopes of images) is again a retraction, and conjugating a
    fixed-point-free endomap through a retraction pair keeps it
    fixed-point-free.
    """
    # Levels from P (level 0) down to the core.
    level_labels = [list(range(P.n))]
    for removed, _ in steps:
        level_labels.append([y for y in level_labels[-1] if y != removed])
    posets = [P]
    for lab in level_labels[1:]:
        posets.append(P.induced(lab)[0])
    cps = [enumerate_convex_poset(q) for q in posets]

    def down_mask(level, mask_local):
        """Retract a convex set at ``level`` one level further down."""
        removed, target = steps[level]
        lab = level_labels[level]
        nxt = level_labels[level + 1]
        pos_next = {l: i for i, l in enumerate(nxt)}
        image = 0
        for i in bits(mask_local):
            l = lab[i]
            if l == removed:
                l = target
            image |= 1 << pos_next[l]
        q = posets[level + 1]
        return q.downset(image) & q.upset(image)

    def up_mask(level, mask_local):
        """Include a convex set from ``level``+1 and take the envelope."""
        nxt = level_labels[level + 1]
        lab = level_labels[level]
        pos = {l: i for i, l in enumerate(lab)}
        image = 0
        for i in bits(mask_local):
            image |= 1 << pos[nxt[i]]
        q = posets[level]
        return q.downset(image) & q.upset(image)

    depth = len(steps)
    values = []
    for m in cps[0].sets:
        cur = m
        for level in range(depth):
            cur = down_mask(level, cur)
        cur = cp_core.sets[core_map.values[cp_core.index[cur]]]
        for level in range(depth - 1, -1, -1):
            cur = up_mask(level, cur)
        values.append(cps[0].index[cur])
    out = MonotoneMap(cps[0].as_poset(), cps[0].as_poset(), tuple(values))
    assert not any(out.values[i] == i for i in range(len(cps[0])))
    return out


# --- retract search -------------------------------------------------------


def retract_search(P, Q, budget=None):
    """Monotone pair (s, r) with r after s the identity on ``Q``.

    Enumerates order embeddings of ``Q`` into ``P`` and tries to extend the
    inverse to a monotone retraction; exhaustion is an explicit outcome.
    """
    b = Budget(budget)
    ext_q = Q.linear_extension()
    s_vals = [None] * Q.n
    used = [False] * P.n

    def extend_r(s_map):
        image_of = {s_map[y]: y for y in range(Q.n)}
        candidates = []
        for v in range(P.n):
            if v in image_of:
                candidates.append([image_of[v]])
            else:
                candidates.append(list(range(Q.n)))
        return search_monotone_map(P, Q.up, candidates, b)

    def rec(i):
        if i == Q.n:
            r_vals = extend_r(s_vals)
            if r_vals is not None:
                return tuple(s_vals), r_vals
            return None
        x = ext_q[i]
        for v in range(P.n):
            if used[v]:
                continue
            b.tick()
            ok = True
            for j in range(i):
                y = ext_q[j]
                w = s_vals[y]
                if Q.leq(y, x) != P.leq(w, v) or Q.leq(x, y) != P.leq(v, w):
                    ok = False
                    break
            if ok:
                s_vals[x] = v
                used[v] = True
                got = rec(i + 1)
                if got is not None:
                    return got
                used[v] = False
                s_vals[x] = None
        return None

    got = rec(0)
    if got is None:
        return Verdict("RETRACT", False, nodes=b.nodes)
    s_tuple, r_tuple = got
    s = MonotoneMap(Q, P, s_tuple)
    r = MonotoneMap(P, Q, r_tuple)
    assert all(r.values[s.values[y]] == y for y in range(Q.n))
    return Verdict("RETRACT", True, witness=(s, r), nodes=b.nodes)
