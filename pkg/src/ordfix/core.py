"""Finite posets stored as bit-row relation matrices.

Elements are dense indices ``0..n-1``; subsets are int bitmasks.  The full
closed order (not the cover relation) is stored so that every decider can
answer ``x <= y`` in O(1); covers are recomputed on demand by transitive
reduction.  All values are immutable after construction and all operations
are pure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import (
    ArityMismatch,
    CycleDetected,
    EmptyInput,
    IndexOutOfRange,
    NotMonotone,
)


def bits(mask):
    """Iterate the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask):
    return mask.bit_count()


class Poset:
    """Finite poset on ``0..n-1`` with rows ``up[x] = {y : x <= y}``.

    Reflexivity, antisymmetry and transitivity are asserted on every
    construction; ``dn`` is the transposed row family ``{y : y <= x}``.
    """

    __slots__ = ("n", "up", "dn", "_hash")

    def __init__(self, n, up, check=True):
        self.n = n
        self.up = tuple(up)
        if len(self.up) != n:
            raise IndexOutOfRange(f"expected {n} rows, got {len(self.up)}")
        dn = [0] * n
        for x in range(n):
            row = self.up[x]
            if row >> n:
                raise IndexOutOfRange(f"row {x} mentions elements >= {n}")
            for y in bits(row):
                dn[y] |= 1 << x
        self.dn = tuple(dn)
        self._hash = hash((n, self.up))
        if check:
            self._validate()

    def _validate(self):
        for x in range(self.n):
            if not (self.up[x] >> x) & 1:
                raise CycleDetected(f"relation not reflexive at {x}")
            if self.up[x] & self.dn[x] != 1 << x:
                raise CycleDetected(f"antisymmetry fails at {x}")
            row = self.up[x]
            for y in bits(row):
                if self.up[y] & ~row:
                    raise CycleDetected(f"transitivity fails at {x} <= {y}")

    # --- basic queries -------------------------------------------------

    def leq(self, x, y):
        return (self.up[x] >> y) & 1 == 1

    def lt(self, x, y):
        return x != y and (self.up[x] >> y) & 1 == 1

    @property
    def full(self):
        return (1 << self.n) - 1

    def downset(self, mask):
        """All elements below some member of ``mask``."""
        out = 0
        for x in bits(mask):
            out |= self.dn[x]
        return out

    def upset(self, mask):
        out = 0
        for x in bits(mask):
            out |= self.up[x]
        return out

    def upper_bounds(self, mask):
        """Elements above every member of ``mask`` (everything if empty)."""
        out = self.full
        for x in bits(mask):
            out &= self.up[x]
        return out

    def lower_bounds(self, mask):
        out = self.full
        for x in bits(mask):
            out &= self.dn[x]
        return out

    def covers(self):
        """Transitive reduction as a sorted list of (lower, upper) pairs."""
        out = []
        for x in range(self.n):
            strict_up = self.up[x] & ~(1 << x)
            for y in bits(strict_up):
                strict_dn = self.dn[y] & ~(1 << y)
                if strict_up & strict_dn == 0:
                    out.append((x, y))
        return out

    def cover_preds(self, x):
        """Elements covered by ``x`` (maximal ones strictly below)."""
        strict = self.dn[x] & ~(1 << x)
        out = []
        for y in bits(strict):
            if self.up[y] & strict & ~(1 << y) == 0:
                out.append(y)
        return out

    def heights(self):
        """Longest-chain rank of each element, bottom ranks 0."""
        h = [0] * self.n
        for x in self._linear_extension():
            strict = self.dn[x] & ~(1 << x)
            h[x] = max((h[y] + 1 for y in bits(strict)), default=0)
        return h

    def _linear_extension(self):
        order = sorted(range(self.n), key=lambda x: (popcount(self.dn[x]), x))
        return order

    def linear_extension(self):
        """Index-stable topological order: y <= x puts y before x."""
        return self._linear_extension()

    def maximal_elements(self):
        return [x for x in range(self.n) if self.up[x] == 1 << x]

    def minimal_elements(self):
        return [x for x in range(self.n) if self.dn[x] == 1 << x]

    def top(self):
        """Greatest element or None."""
        for x in range(self.n):
            if self.dn[x] == self.full:
                return x
        return None

    def bottom(self):
        for x in range(self.n):
            if self.up[x] == self.full:
                return x
        return None

    def is_antichain(self, mask):
        for x in bits(mask):
            if (self.up[x] | self.dn[x]) & mask != 1 << x:
                return False
        return True

    def comparability_degree(self, x):
        return popcount((self.up[x] | self.dn[x]) & ~(1 << x))

    def is_bipartite(self):
        """True when every element is minimal or maximal."""
        return all(
            self.dn[x] == 1 << x or self.up[x] == 1 << x for x in range(self.n)
        )

    def induced(self, keep):
        """Subposet on the elements of ``keep`` (list of old indices).

        Returns ``(Q, old_of_new)`` where ``old_of_new[i]`` is the original
        index of the i-th element of ``Q``.
        """
        keep = list(keep)
        pos = {old: new for new, old in enumerate(keep)}
        up = []
        for old in keep:
            row = 0
            for y in bits(self.up[old]):
                if y in pos:
                    row |= 1 << pos[y]
            up.append(row)
        return Poset(len(keep), up, check=False), keep

    def __eq__(self, other):
        return (
            isinstance(other, Poset) and self.n == other.n and self.up == other.up
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Poset(n={self.n}, covers={self.covers()})"


# --- construction ------------------------------------------------------


def poset_from_covers(n, covers):
    """Reflexive-transitive closure of the given pairs; antisymmetry checked."""
    if n < 0:
        raise IndexOutOfRange("negative size")
    up = [1 << x for x in range(n)]
    for i, j in covers:
        if not (0 <= i < n and 0 <= j < n):
            raise IndexOutOfRange(f"pair ({i}, {j}) out of range for n={n}")
        up[i] |= 1 << j
    # Warshall closure over bit rows.
    for k in range(n):
        row_k = up[k]
        for x in range(n):
            if (up[x] >> k) & 1:
                up[x] |= row_k
    for x in range(n):
        for y in bits(up[x]):
            if x != y and (up[y] >> x) & 1:
                raise CycleDetected(f"{x} and {y} lie on a cycle")
    return Poset(n, up)


def relabel(P, perm):
    """Poset with element ``x`` renamed to ``perm[x]``."""
    up = [0] * P.n
    for x in range(P.n):
        row = 0
        for y in bits(P.up[x]):
            row |= 1 << perm[y]
        up[perm[x]] = row
    return Poset(P.n, up, check=False)


def dual(P):
    """Order-reversed poset; an involution."""
    return Poset(P.n, P.dn, check=False)


def direct_product(P, Q):
    """Componentwise order on pairs; (x, y) is index x*|Q| + y."""
    m = Q.n
    up = []
    for x in range(P.n):
        for y in range(Q.n):
            row = 0
            for a in bits(P.up[x]):
                # all (a, b) with y <= b
                row |= Q.up[y] << (a * m)
            up.append(row)
    return Poset(P.n * m, up, check=False)


def product_pair_index(Q, x, y):
    return x * Q.n + y


@dataclass(frozen=True)
class LexSum:
    """Lexicographic sum of ``blocks`` over the ``index`` poset.

    ``projection[e]`` is the index element whose block contains ``e``;
    ``offsets[a]`` is the first sum index of block ``a``.
    """

    index: Poset
    blocks: tuple
    sum: Poset
    projection: tuple
    offsets: tuple

    def block_mask(self, a):
        size = self.blocks[a].n
        return ((1 << size) - 1) << self.offsets[a]


def lexicographic_sum(A, blocks):
    """Replace each index element by its block, ordering across blocks by A."""
    blocks = tuple(blocks)
    if len(blocks) != A.n:
        raise ArityMismatch(f"{A.n} index elements but {len(blocks)} blocks")
    offsets = []
    total = 0
    projection = []
    for a, B in enumerate(blocks):
        offsets.append(total)
        projection.extend([a] * B.n)
        total += B.n
    up = [0] * total
    for a, B in enumerate(blocks):
        for x in range(B.n):
            row = B.up[x] << offsets[a]
            for b in bits(A.up[a] & ~(1 << a)):
                row |= ((1 << blocks[b].n) - 1) << offsets[b]
            up[offsets[a] + x] = row
    return LexSum(
        index=A,
        blocks=blocks,
        sum=Poset(total, up),
        projection=tuple(projection),
        offsets=tuple(offsets),
    )


@dataclass(frozen=True)
class Cones:
    down: int
    up: int
    upper_bounds: int
    lower_bounds: int


def cones(P, X):
    """Down-set, up-set, upper bounds and lower bounds of the subset ``X``.

    For empty ``X`` the generated segments are empty and the bound sets are
    the whole poset.
    """
    return Cones(
        down=P.downset(X),
        up=P.upset(X),
        upper_bounds=P.upper_bounds(X),
        lower_bounds=P.lower_bounds(X),
    )


# --- width -------------------------------------------------------------


def max_antichain(P):
    """An antichain of maximum size, as a bitmask.

    Branch and bound over the incomparability graph; adequate for n <= 24.
    """
    n = P.n
    inc = [P.full & ~(P.up[x] | P.dn[x]) for x in range(n)]
    best_mask = 1 << 0 if n else 0
    best_size = 1 if n else 0

    def expand(current, size, cand):
        nonlocal best_mask, best_size
        if size + popcount(cand) <= best_size:
            return
        if not cand:
            best_size, best_mask = size, current
            return
        while cand:
            if size + popcount(cand) <= best_size:
                return
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            expand(current | low, size + 1, cand & inc[v])

    if n:
        expand(0, 0, P.full)
    return best_mask


def width(P):
    return popcount(max_antichain(P))


# --- canonical form ----------------------------------------------------


def _refine_colors(P):
    n = P.n
    h = P.heights()
    raw = [(popcount(P.dn[x]), popcount(P.up[x]), h[x]) for x in range(n)]
    palette = sorted(set(raw))
    color = [palette.index(c) for c in raw]
    while True:
        key = [
            (
                color[x],
                tuple(sorted(color[y] for y in bits(P.dn[x] & ~(1 << x)))),
                tuple(sorted(color[y] for y in bits(P.up[x] & ~(1 << x)))),
            )
            for x in range(n)
        ]
        palette = sorted(set(key))
        new = [palette.index(k) for k in key]
        if len(set(new)) == len(set(color)):
            return new
        color = new


def _matrix_bytes(P, elems):
    n = P.n
    acc = 0
    for p in range(n):
        row = P.up[elems[p]]
        for q in range(n):
            acc = (acc << 1) | ((row >> elems[q]) & 1)
    width_bytes = (n * n + 7) // 8
    return acc.to_bytes(width_bytes, "big")


def canonical_form(P):
    """Canonical byte string: equal iff the posets are order-isomorphic.

    Minimizes the relation matrix over the permutations compatible with an
    iterated (in-degree, out-degree, height) colouring.  Intended for the
    small sizes used by the enumeration suites.
    """
    n = P.n
    if n == 0:
        return bytes([0])
    color = _refine_colors(P)
    classes = {}
    for x in range(n):
        classes.setdefault(color[x], []).append(x)
    ordered = [classes[c] for c in sorted(classes)]
    best = None
    for parts in itertools.product(*(itertools.permutations(c) for c in ordered)):
        elems = [x for part in parts for x in part]
        cand = _matrix_bytes(P, elems)
        if best is None or cand < best:
            best = cand
    return bytes([n]) + best


def poset_from_canonical(form):
    """Rebuild a poset from its canonical byte string."""
    n = form[0]
    if n == 0:
        return Poset(0, ())
    acc = int.from_bytes(form[1:], "big")
    up = [0] * n
    total = n * n
    for p in range(n):
        for q in range(n):
            if (acc >> (total - 1 - (p * n + q))) & 1:
                up[p] |= 1 << q
    return Poset(n, up)


def canonical_relabel(P):
    """Isomorphic copy whose labelling realises the canonical form."""
    n = P.n
    if n == 0:
        return P
    color = _refine_colors(P)
    classes = {}
    for x in range(n):
        classes.setdefault(color[x], []).append(x)
    ordered = [classes[c] for c in sorted(classes)]
    best = None
    best_elems = None
    for parts in itertools.product(*(itertools.permutations(c) for c in ordered)):
        elems = [x for part in parts for x in part]
        cand = _matrix_bytes(P, elems)
        if best is None or cand < best:
            best, best_elems = cand, elems
    perm = [0] * n
    for new, old in enumerate(best_elems):
        perm[old] = new
    return relabel(P, perm)


# --- monotone maps -----------------------------------------------------


@dataclass(frozen=True)
class MonotoneMap:
    """Order-preserving map between posets, stored by value table."""

    domain: Poset
    codomain: Poset
    values: tuple

    def __post_init__(self):
        if len(self.values) != self.domain.n:
            raise ArityMismatch("one value per domain element required")
        for v in self.values:
            if not 0 <= v < self.codomain.n:
                raise IndexOutOfRange(f"value {v} outside codomain")
        viol = self.violation()
        if viol is not None:
            x, y = viol
            raise NotMonotone(f"map not order preserving at {x} <= {y}")

    def violation(self):
        """First pair witnessing non-monotonicity, or None."""
        P, Q, f = self.domain, self.codomain, self.values
        for x in range(P.n):
            for y in bits(P.up[x]):
                if not Q.leq(f[x], f[y]):
                    return (x, y)
        return None

    def __call__(self, x):
        return self.values[x]

    def compose(self, other):
        """self after other."""
        if other.codomain != self.domain:
            raise ArityMismatch("composition domains do not match")
        return MonotoneMap(
            other.domain,
            self.codomain,
            tuple(self.values[v] for v in other.values),
        )

    def is_identity(self):
        return self.domain == self.codomain and all(
            v == i for i, v in enumerate(self.values)
        )


def identity_map(P):
    return MonotoneMap(P, P, tuple(range(P.n)))


def subset_from_iter(xs):
    mask = 0
    for x in xs:
        mask |= 1 << x
    return mask


def require_nonempty(mask):
    if mask == 0:
        raise EmptyInput("nonempty subset required")
    return mask
