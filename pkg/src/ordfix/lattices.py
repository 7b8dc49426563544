"""Lattice recognition, ideals and filters, convex sublattices, congruences.

Derived lattices whose elements are subsets of a host (initial segments,
ideals, filters, convex sublattices) carry their member bitmasks alongside
the abstract order, so results can always be mapped back to host elements.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import MonotoneMap, Poset, bits, popcount
from .errors import (
    ArityMismatch,
    BudgetExceeded,
    ConditionViolated,
    EmptyInput,
    InvalidCongruence,
    NotALattice,
)

SEGMENT_BUDGET_DEFAULT = 4096
CONGRUENCE_SIZE_DEFAULT = 10
BOOLEAN_K_MAX = 4


def _tables(P):
    """Join and meet tables of a poset, or a NotALattice witness pair."""
    n = P.n
    if n == 0:
        raise EmptyInput("a lattice must be nonempty")
    join = [[0] * n for _ in range(n)]
    meet = [[0] * n for _ in range(n)]
    for x in range(n):
        for y in range(x, n):
            ub = P.up[x] & P.up[y]
            if ub == 0:
                raise NotALattice(x, y, "no common upper bound")
            least = None
            for m in bits(ub):
                if ub & ~P.up[m] == 0:
                    least = m
                    break
            if least is None:
                raise NotALattice(x, y, "no least upper bound")
            join[x][y] = join[y][x] = least
            lb = P.dn[x] & P.dn[y]
            if lb == 0:
                raise NotALattice(x, y, "no common lower bound")
            greatest = None
            for m in bits(lb):
                if lb & ~P.dn[m] == 0:
                    greatest = m
                    break
            if greatest is None:
                raise NotALattice(x, y, "no greatest lower bound")
            meet[x][y] = meet[y][x] = greatest
    return tuple(map(tuple, join)), tuple(map(tuple, meet))


class Lattice:
    """Finite lattice: a poset together with its join and meet tables."""

    __slots__ = ("order", "join_table", "meet_table", "bottom", "top")

    def __init__(self, order, join_table=None, meet_table=None):
        self.order = order
        if join_table is None or meet_table is None:
            join_table, meet_table = _tables(order)
        self.join_table = join_table
        self.meet_table = meet_table
        self.bottom = order.bottom()
        self.top = order.top()
        if self.bottom is None or self.top is None:
            raise NotALattice(-1, -1, "missing least or largest element")

    @property
    def n(self):
        return self.order.n

    def join(self, x, y):
        return self.join_table[x][y]

    def meet(self, x, y):
        return self.meet_table[x][y]

    def join_mask(self, mask):
        out = self.bottom
        for x in bits(mask):
            out = self.join_table[out][x]
        return out

    def meet_mask(self, mask):
        out = self.top
        for x in bits(mask):
            out = self.meet_table[out][x]
        return out

    def leq(self, x, y):
        return self.order.leq(x, y)

    def dual(self):
        from .core import dual as dual_poset

        return Lattice(dual_poset(self.order), self.meet_table, self.join_table)

    def __repr__(self):
        return f"Lattice(n={self.n})"


def as_lattice(P):
    """Wrap a poset as a lattice; raises NotALattice with a witness pair."""
    return Lattice(P)


def is_lattice(P):
    try:
        as_lattice(P)
        return True
    except (NotALattice, EmptyInput):
        return False


def _inclusion_poset(sets):
    rows = []
    for a in sets:
        row = 0
        for j, b in enumerate(sets):
            if a & ~b == 0:
                row |= 1 << j
        rows.append(row)
    return Poset(len(sets), rows, check=False)


class SetLattice(Lattice):
    """Lattice whose elements are subsets of a host poset."""

    __slots__ = ("host", "sets", "index")

    def __init__(self, host, sets, join_table=None, meet_table=None):
        self.host = host
        self.sets = tuple(sets)
        self.index = {m: i for i, m in enumerate(self.sets)}
        super().__init__(_inclusion_poset(self.sets), join_table, meet_table)

    def __len__(self):
        return len(self.sets)


def downsets(P, budget=SEGMENT_BUDGET_DEFAULT):
    """All initial segments of ``P`` as bitmasks (the empty one included)."""
    family = {0}
    for x in P.linear_extension():
        need = P.dn[x] & ~(1 << x)
        grown = [m | (1 << x) for m in family if need & ~m == 0]
        family.update(grown)
        if budget is not None and len(family) > budget:
            raise BudgetExceeded(budget, "initial-segment enumeration")
    return sorted(family)


def initial_segments(P, budget=SEGMENT_BUDGET_DEFAULT):
    """The distributive lattice of all down-sets, ordered by containment.

    Joins are unions and meets intersections; on small instances those
    tables are re-derived from the containment order and compared.
    """
    masks = downsets(P, budget)
    index = {m: i for i, m in enumerate(masks)}
    m = len(masks)
    join_table = tuple(
        tuple(index[masks[i] | masks[j]] for j in range(m)) for i in range(m)
    )
    meet_table = tuple(
        tuple(index[masks[i] & masks[j]] for j in range(m)) for i in range(m)
    )
    lat = SetLattice(P, masks, join_table, meet_table)
    if m <= 512:
        order_join, order_meet = _tables(lat.order)
        assert order_join == join_table and order_meet == meet_table
    return lat


def _has_greatest(P, mask):
    return any(mask & ~P.dn[m] == 0 for m in bits(mask))


def _has_least(P, mask):
    return any(mask & ~P.up[m] == 0 for m in bits(mask))


def ideals_filters(T, budget=SEGMENT_BUDGET_DEFAULT):
    """The lattices of ideals and of filters of ``T``, by containment.

    Joins follow the closure formulas (down-set of pairwise joins for
    ideals, up-set of pairwise meets for filters) and are asserted to agree
    with the order-derived tables; meets are intersections.
    """
    P = T.order
    ideals = [m for m in downsets(P, budget) if m and _has_greatest(P, m)]
    filters = [
        m
        for m in (P.full & ~d for d in downsets(P, budget))
        if m and _has_least(P, m)
    ]
    filters.sort()
    id_lat = SetLattice(P, ideals)
    fi_lat = SetLattice(P, filters)
    for lat, pairjoin in ((id_lat, T.join_table), (fi_lat, T.meet_table)):
        gen = P.downset if lat is id_lat else P.upset
        for i, a in enumerate(lat.sets):
            for j, b in enumerate(lat.sets):
                prods = 0
                for x in bits(a):
                    for y in bits(b):
                        prods |= 1 << pairjoin[x][y]
                assert lat.sets[lat.join(i, j)] == gen(prods)
                assert lat.sets[lat.meet(i, j)] == a & b
    return id_lat, fi_lat


@dataclass(frozen=True)
class KPair:
    """An ideal and a filter with nonempty intersection (their core)."""

    ideal: int
    filter: int
    core: int

    def __post_init__(self):
        if self.core != self.ideal & self.filter or self.core == 0:
            raise EmptyInput("core must be the nonempty intersection")


def k_pairs(T, budget=SEGMENT_BUDGET_DEFAULT):
    id_lat, fi_lat = ideals_filters(T, budget)
    out = []
    for i in id_lat.sets:
        for f in fi_lat.sets:
            if i & f:
                out.append(KPair(i, f, i & f))
    return out


def _bidom_rows(P, sets, downs, ups):
    m = len(sets)
    rows = [0] * m
    for i in range(m):
        row = 0
        for j in range(m):
            if sets[i] & ~downs[j] == 0 and sets[j] & ~ups[i] == 0:
                row |= 1 << j
        rows[i] = row
    return rows


class CLLattice(Lattice):
    """Nonempty convex sublattices of a lattice, under bi-domination.

    Join and meet tables are derived from the order and re-derived from the
    ideal/filter formulas; the two must agree and this is asserted on
    construction.
    """

    __slots__ = ("host", "sets", "index", "downs", "ups", "mins", "maxs")

    def __init__(self, host, sets):
        self.host = host
        P = host.order
        self.sets = tuple(sorted(sets, key=lambda m: (popcount(m), m)))
        self.index = {m: i for i, m in enumerate(self.sets)}
        self.downs = tuple(P.downset(m) for m in self.sets)
        self.ups = tuple(P.upset(m) for m in self.sets)
        self.mins = tuple(host.meet_mask(m) for m in self.sets)
        self.maxs = tuple(host.join_mask(m) for m in self.sets)
        order = Poset(
            len(self.sets), _bidom_rows(P, self.sets, self.downs, self.ups)
        )
        super().__init__(order)
        for i in range(len(self.sets)):
            for j in range(len(self.sets)):
                assert self.sets[self.join(i, j)] == self.formula_join(i, j)
                assert self.sets[self.meet(i, j)] == self.formula_meet(i, j)

    def __len__(self):
        return len(self.sets)

    def formula_join(self, i, j):
        """Join by the representation: (dA v dB) & (uA & uB), as a mask."""
        T = self.host
        top_join = T.join(self.maxs[i], self.maxs[j])
        return T.order.dn[top_join] & (self.ups[i] & self.ups[j])

    def formula_meet(self, i, j):
        T = self.host
        bot_meet = T.meet(self.mins[i], self.mins[j])
        return (self.downs[i] & self.downs[j]) & T.order.up[bot_meet]

    def convex_set(self, i):
        from .convexity import ConvexSet

        return ConvexSet(self.host.order, self.sets[i])

    def singleton_index(self, x):
        return self.index[1 << x]


def convex_sublattices(T, budget=SEGMENT_BUDGET_DEFAULT):
    """The lattice of nonempty convex sublattices, built from ideal-filter
    pairs with nonempty intersection and deduplicated by member set."""
    cores = {kp.core for kp in k_pairs(T, budget)}
    return CLLattice(T, cores)


# --- Boolean-lattice embeddings -----------------------------------------


def boolean_poset(k):
    """The Boolean lattice on k atoms; element i is the subset-mask i."""
    size = 1 << k
    rows = []
    for x in range(size):
        row = 0
        for y in range(size):
            if x & ~y == 0:
                row |= 1 << y
        rows.append(row)
    return Poset(size, rows, check=False)


@dataclass(frozen=True)
class SearchOutcome:
    """Result of a bounded exhaustive search."""

    found: object
    nodes: int

    @property
    def absent(self):
        return self.found is None


def boolean_embedding_search(T, k, budget=None, k_max=BOOLEAN_K_MAX):
    """Order embedding of the Boolean lattice with ``k`` atoms into ``T``.

    Backtracking over subset-rank levels with candidates ordered by height;
    returns the embedding as a MonotoneMap, or an exhaustion certificate.
    """
    if k > k_max:
        raise BudgetExceeded(k_max, "boolean embedding rank")
    B = boolean_poset(k)
    P = T.order
    order = sorted(range(B.n), key=lambda s: (popcount(s), s))
    h = P.heights()
    cand_order = sorted(range(P.n), key=lambda v: (h[v], v))
    images = [None] * B.n
    used = [False] * P.n
    nodes = 0

    def rec(pos):
        nonlocal nodes
        if pos == len(order):
            return True
        S = order[pos]
        for v in cand_order:
            if used[v]:
                continue
            nodes += 1
            if budget is not None and nodes > budget:
                raise BudgetExceeded(budget, "boolean embedding search")
            ok = True
            for q in range(pos):
                Sq = order[q]
                w = images[Sq]
                if Sq & ~S == 0:  # Sq subset of S (strict: different)
                    if not P.lt(w, v):
                        ok = False
                        break
                elif S & ~Sq == 0:
                    if not P.lt(v, w):
                        ok = False
                        break
                else:
                    if P.leq(v, w) or P.leq(w, v):
                        ok = False
                        break
            if ok:
                images[S] = v
                used[v] = True
                if rec(pos + 1):
                    return True
                used[v] = False
                images[S] = None
        return False

    if rec(0):
        return SearchOutcome(MonotoneMap(B, P, tuple(images)), nodes)
    return SearchOutcome(None, nodes)


def embedding_from_sequences(T, xs, ys):
    """Embedding of the Boolean lattice built from two witness sequences.

    Checks the three defining conditions (strictly decreasing ``xs``; each
    ``ys[n]`` escapes ``xs[n]`` joined with the earlier ``ys``; each
    ``ys[n+1]`` sits below ``xs[n]``), then maps a subset to the join of
    its ``ys`` (bottom for the empty subset) and verifies the result is an
    order embedding.
    """
    if len(xs) != len(ys):
        raise ArityMismatch("sequences must have equal length")
    k = len(xs)
    if k == 0:
        raise ArityMismatch("need at least one stage")
    for n in range(k - 1):
        if not T.order.lt(xs[n + 1], xs[n]):
            raise ConditionViolated("i", f"xs[{n + 1}] not strictly below xs[{n}]")
    acc = T.bottom
    for n in range(k):
        if T.leq(ys[n], T.join(xs[n], acc)):
            raise ConditionViolated("ii", f"ys[{n}] is trapped at stage {n}")
        acc = T.join(acc, ys[n])
    for n in range(k - 1):
        if not T.leq(ys[n + 1], xs[n]):
            raise ConditionViolated("iii", f"ys[{n + 1}] not below xs[{n}]")
    B = boolean_poset(k)
    images = []
    for S in range(B.n):
        v = T.bottom
        for i in bits(S):
            v = T.join(v, ys[i])
        images.append(v)
    f = MonotoneMap(B, T.order, tuple(images))
    for S in range(B.n):
        for S2 in range(B.n):
            assert (S & ~S2 == 0) == T.leq(images[S], images[S2]), (
                "constructed map is not an order embedding"
            )
    return f


def find_embedding_sequences(T, k, budget=None):
    """Backtracking search for sequences satisfying the three conditions.

    At stage n the candidate pairs (x_n, y_n) are drawn from below the
    previous x and tested jointly, mirroring the constructive argument.
    Returns ``SearchOutcome`` whose payload is ``(xs, ys)`` or None.
    """
    P = T.order
    nodes = 0

    def rec(stage, xs, ys, acc):
        nonlocal nodes
        if stage == k:
            return xs, ys
        if stage == 0:
            x_cands = range(P.n)
            y_cands = range(P.n)
        else:
            prev = xs[-1]
            x_cands = [x for x in range(P.n) if P.lt(x, prev)]
            y_cands = [y for y in range(P.n) if P.leq(y, prev)]
        for x in x_cands:
            for y in y_cands:
                nodes += 1
                if budget is not None and nodes > budget:
                    raise BudgetExceeded(budget, "sequence search")
                if not T.leq(y, T.join(x, acc)):
                    got = rec(stage + 1, xs + [x], ys + [y], T.join(acc, y))
                    if got is not None:
                        return got
        return None

    got = rec(0, [], [], T.bottom)
    if got is None:
        return SearchOutcome(None, nodes)
    return SearchOutcome((tuple(got[0]), tuple(got[1])), nodes)


# --- congruences and quotients -------------------------------------------


@dataclass(frozen=True)
class Congruence:
    """Lattice-compatible partition; every block is a convex sublattice."""

    blocks: tuple

    @staticmethod
    def from_block_of(block_of):
        groups = {}
        for x, b in enumerate(block_of):
            groups.setdefault(b, []).append(x)
        blocks = tuple(
            sorted((tuple(sorted(g)) for g in groups.values()), key=lambda t: t[0])
        )
        return Congruence(blocks)

    def block_of(self, n=None):
        if n is None:
            n = self.size()
        out = [0] * n
        for i, blk in enumerate(self.blocks):
            for x in blk:
                out[x] = i
        return out

    def same(self, x, y):
        bo = self.block_of()
        return bo[x] == bo[y]

    def size(self):
        return sum(len(b) for b in self.blocks)

    def validate(self, T):
        n = T.n
        if self.size() != n:
            raise InvalidCongruence("partition does not cover the lattice")
        bo = self.block_of(n)
        for x in range(n):
            for y in range(n):
                if bo[x] != bo[y]:
                    continue
                for z in range(n):
                    if bo[T.join(x, z)] != bo[T.join(y, z)]:
                        raise InvalidCongruence(
                            f"join incompatibility at ({x},{y}) with {z}"
                        )
                    if bo[T.meet(x, z)] != bo[T.meet(y, z)]:
                        raise InvalidCongruence(
                            f"meet incompatibility at ({x},{y}) with {z}"
                        )
        for blk in self.blocks:
            mask = 0
            for x in blk:
                mask |= 1 << x
            hull = T.order.downset(mask) & T.order.upset(mask)
            if hull != mask:
                raise InvalidCongruence(f"block {blk} is not convex")
            for x in blk:
                for y in blk:
                    if not (mask >> T.join(x, y)) & 1 or not (
                        mask >> T.meet(x, y)
                    ) & 1:
                        raise InvalidCongruence(f"block {blk} is not a sublattice")


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        self.parent[max(rx, ry)] = min(rx, ry)
        return True


def principal_congruence(T, a, b):
    """Smallest congruence identifying ``a`` and ``b``."""
    n = T.n
    uf = _UnionFind(n)
    queue = [(a, b)]
    while queue:
        x, y = queue.pop()
        if not uf.union(x, y):
            continue
        for z in range(n):
            queue.append((T.join(x, z), T.join(y, z)))
            queue.append((T.meet(x, z), T.meet(y, z)))
    return Congruence.from_block_of([uf.find(x) for x in range(n)])


def _join_partitions(n, c1, c2):
    uf = _UnionFind(n)
    for cong in (c1, c2):
        for blk in cong.blocks:
            for x in blk[1:]:
                uf.union(blk[0], x)
    return Congruence.from_block_of([uf.find(x) for x in range(n)])


def congruences(T, max_n=CONGRUENCE_SIZE_DEFAULT):
    """All congruences: principal ones closed under partition join."""
    n = T.n
    if n > max_n:
        raise BudgetExceeded(max_n, "congruence enumeration size")
    identity = Congruence.from_block_of(list(range(n)))
    found = {identity}
    frontier = {identity}
    for a in range(n):
        for b in range(a + 1, n):
            c = principal_congruence(T, a, b)
            if c not in found:
                found.add(c)
                frontier.add(c)
    while frontier:
        new = set()
        for c1 in frontier:
            for c2 in found:
                j = _join_partitions(n, c1, c2)
                if j not in found:
                    new.add(j)
        found |= new
        frontier = new
    for c in found:
        c.validate(T)
    return sorted(found, key=lambda c: (len(c.blocks), c.blocks))


def quotient(T, cong):
    """Quotient lattice and the canonical surjective homomorphism."""
    cong.validate(T)
    n = T.n
    bo = cong.block_of(n)
    k = len(cong.blocks)
    reps = [blk[0] for blk in cong.blocks]
    rows = []
    for i in range(k):
        row = 0
        for j in range(k):
            if bo[T.join(reps[i], reps[j])] == j:
                row |= 1 << j
        rows.append(row)
    Q = Lattice(Poset(k, rows))
    q = MonotoneMap(T.order, Q.order, tuple(bo))
    for x in range(n):
        for y in range(n):
            assert q.values[T.join(x, y)] == Q.join(q.values[x], q.values[y])
            assert q.values[T.meet(x, y)] == Q.meet(q.values[x], q.values[y])
    return Q, q


def tarski_fixpoint(T, f):
    """Least fixed point of a monotone endomap, by iteration from bottom."""
    if f.domain != T.order or f.codomain != T.order:
        raise ArityMismatch("endomap of the lattice required")
    x = T.bottom
    for _ in range(T.n + 1):
        nxt = f.values[x]
        if nxt == x:
            return x
        x = nxt
    raise AssertionError("iteration failed to stabilise on a finite lattice")
