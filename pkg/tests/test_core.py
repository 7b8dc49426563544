import itertools

import pytest
from hypothesis import given, settings, strategies as st

from ordfix.core import (
    MonotoneMap,
    Poset,
    bits,
    canonical_form,
    canonical_relabel,
    cones,
    direct_product,
    dual,
    identity_map,
    lexicographic_sum,
    max_antichain,
    popcount,
    poset_from_canonical,
    poset_from_covers,
    relabel,
    subset_from_iter,
    width,
)
from ordfix.errors import (
    ArityMismatch,
    CycleDetected,
    IndexOutOfRange,
    NotMonotone,
)


def chain(n):
    return poset_from_covers(n, [(i, i + 1) for i in range(n - 1)])


def antichain(n):
    return poset_from_covers(n, [])


def all_labeled_posets(n):
    """Oracle: every labeled poset on n elements.

    Index-increasing transitive relations are permuted through the whole
    symmetric group; every poset has a linear extension, so all labelings
    are reached.
    """
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    base = []
    for picks in itertools.product([0, 1], repeat=len(pairs)):
        up = [1 << x for x in range(n)]
        for bit, (i, j) in zip(picks, pairs):
            if bit:
                up[i] |= 1 << j
        ok = True
        for k in range(n):
            for x in range(n):
                if (up[x] >> k) & 1 and up[k] & ~up[x]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            base.append(tuple(up))
    seen = set()
    for up in base:
        P = Poset(n, up, check=False)
        for perm in itertools.permutations(range(n)):
            seen.add(relabel(P, list(perm)).up)
    return [Poset(n, up, check=False) for up in seen]


class TestConstruction:
    def test_singleton(self):
        P = poset_from_covers(1, [])
        assert P.n == 1 and P.up == (1,)

    def test_three_chain_closure(self):
        P = poset_from_covers(3, [(0, 1), (1, 2)])
        assert P.leq(0, 2)

    def test_cycle_detected(self):
        with pytest.raises(CycleDetected):
            poset_from_covers(2, [(0, 1), (1, 0)])

    def test_long_cycle_detected(self):
        with pytest.raises(CycleDetected):
            poset_from_covers(3, [(0, 1), (1, 2), (2, 0)])

    def test_index_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            poset_from_covers(2, [(0, 5)])

    def test_invariants_validated(self):
        # a non-transitive relation handed to the constructor is rejected
        with pytest.raises(CycleDetected):
            Poset(3, (0b011, 0b110, 0b100))

    @given(st.integers(1, 6), st.data())
    @settings(max_examples=60, deadline=None)
    def test_random_cover_sets_close_fine(self, n, data):
        pairs = data.draw(
            st.lists(
                st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)),
                max_size=10,
            )
        )
        try:
            P = poset_from_covers(n, pairs)
        except CycleDetected:
            return
        for x in range(n):
            assert P.leq(x, x)
            for y in bits(P.up[x]):
                assert P.up[y] & ~P.up[x] == 0


class TestDual:
    def test_three_chain(self):
        P = chain(3)
        D = dual(P)
        assert D.leq(2, 0) and not D.leq(0, 2)

    def test_antichain_self_dual(self):
        P = antichain(3)
        assert dual(P) == P

    def test_involution(self):
        for P in (chain(4), antichain(3), poset_from_covers(4, [(0, 2), (1, 2), (1, 3)])):
            assert dual(dual(P)) == P

    def test_cone_exchange(self):
        P = poset_from_covers(4, [(0, 2), (1, 2), (1, 3)])
        for X in range(1, 16):
            assert cones(dual(P), X).down == cones(P, X).up
            assert cones(dual(P), X).upper_bounds == cones(P, X).lower_bounds


class TestProduct:
    def test_two_chains_make_diamond(self):
        P = direct_product(chain(2), chain(2))
        # componentwise order on four pairs: one bottom, one top, two middles
        assert sorted(popcount(r) for r in P.up) == [1, 2, 2, 4]

    def test_singleton_factor_identity(self):
        P = poset_from_covers(4, [(0, 2), (1, 2), (1, 3)])
        Q = direct_product(P, poset_from_covers(1, []))
        assert canonical_form(Q) == canonical_form(P)

    def test_grid_width_two(self):
        # oracle: exhaust subsets for the maximum antichain
        G = direct_product(chain(2), chain(3))
        best = max(
            (m for m in range(1, 64) if G.is_antichain(m)),
            key=popcount,
        )
        assert popcount(best) == 2
        assert width(G) == 2


class TestLexSum:
    def test_two_singleton_blocks(self):
        L = lexicographic_sum(chain(2), [antichain(1), antichain(1)])
        assert canonical_form(L.sum) == canonical_form(chain(2))

    def test_antichain_of_antichains(self):
        L = lexicographic_sum(antichain(2), [antichain(2), antichain(2)])
        assert canonical_form(L.sum) == canonical_form(antichain(4))

    def test_two_level_arises(self):
        L = lexicographic_sum(chain(2), [antichain(2), antichain(2)])
        expected = poset_from_covers(4, [(0, 2), (0, 3), (1, 2), (1, 3)])
        assert canonical_form(L.sum) == canonical_form(expected)

    def test_arity_mismatch(self):
        with pytest.raises(ArityMismatch):
            lexicographic_sum(chain(2), [antichain(1)])

    def test_projection_characterises_order(self):
        A = poset_from_covers(3, [(0, 1)])
        blocks = [chain(2), antichain(2), chain(1)]
        L = lexicographic_sum(A, blocks)
        S, p = L.sum, L.projection
        for x in range(S.n):
            for y in range(S.n):
                expected = (
                    A.lt(p[x], p[y])
                    or (
                        p[x] == p[y]
                        and blocks[p[x]].leq(
                            x - L.offsets[p[x]], y - L.offsets[p[y]]
                        )
                    )
                )
                assert S.leq(x, y) == expected
        assert sorted(set(p)) == list(range(A.n))


class TestCones:
    def test_singleton_in_chain(self):
        P = chain(4)
        c = cones(P, 1 << 2)
        assert c.down == 0b0111

    def test_two_level_upper_bounds(self):
        P = poset_from_covers(4, [(0, 2), (0, 3), (1, 2), (1, 3)])
        c = cones(P, 0b0011)
        assert c.upper_bounds == 0b1100

    def test_whole_poset_upper_bounds_maximum(self):
        P = chain(3)
        assert cones(P, P.full).upper_bounds == 1 << 2
        Q = antichain(2)
        assert cones(Q, Q.full).upper_bounds == 0

    def test_empty_subset(self):
        P = chain(3)
        c = cones(P, 0)
        assert c.down == 0 and c.up == 0
        assert c.upper_bounds == P.full and c.lower_bounds == P.full


class TestMaxAntichain:
    def subset_oracle(self, P):
        return max(
            (m for m in range(1, 1 << P.n) if P.is_antichain(m)),
            key=popcount,
        )

    def test_chain(self):
        P = chain(5)
        assert width(P) == 1

    def test_boolean_three(self):
        covers = []
        for x in range(8):
            for b in range(3):
                if not (x >> b) & 1:
                    covers.append((x, x | (1 << b)))
        B3 = poset_from_covers(8, covers)
        assert popcount(self.subset_oracle(B3)) == 3
        assert width(B3) == 3

    def test_crown(self):
        covers = [(i, 3 + i) for i in range(3)] + [(i, 3 + (i + 1) % 3) for i in range(3)]
        P = poset_from_covers(6, covers)
        assert popcount(self.subset_oracle(P)) == 3
        assert width(P) == 3

    def test_output_is_maximum_antichain(self):
        from ordfix.zoo import enumerate_posets

        for n in range(1, 6):
            for P in enumerate_posets(n):
                m = max_antichain(P)
                assert P.is_antichain(m)
                w = popcount(m)
                assert not any(
                    P.is_antichain(s)
                    for s in range(1, 1 << P.n)
                    if popcount(s) == w + 1
                )


class TestCanonicalForm:
    def test_relabelled_chains_agree(self):
        P = chain(3)
        assert canonical_form(relabel(P, [2, 0, 1])) == canonical_form(P)

    def test_chain_vs_antichain(self):
        assert canonical_form(chain(3)) != canonical_form(antichain(3))

    @given(st.integers(2, 6), st.randoms(use_true_random=False))
    @settings(max_examples=40, deadline=None)
    def test_invariance_under_random_relabelling(self, n, rng):
        from ordfix.zoo import random_structures

        P = random_structures("poset", n, rng.randrange(10_000))
        perm = list(range(n))
        rng.shuffle(perm)
        assert canonical_form(relabel(P, perm)) == canonical_form(P)

    def test_roundtrip(self):
        P = poset_from_covers(4, [(0, 2), (1, 2), (1, 3)])
        Q = poset_from_canonical(canonical_form(P))
        assert canonical_form(Q) == canonical_form(P)
        assert canonical_relabel(P).up == Q.up

    def test_labeled_posets_on_five_elements(self):
        # oracle: enumerate every labeled poset, then count orbits two ways
        labeled = all_labeled_posets(5)
        assert len(labeled) == 4231
        forms = {canonical_form(P) for P in labeled}
        assert len(forms) == 63
        # independent orbit count: strip orbits off the labeled set directly
        remaining = {P.up for P in labeled}
        orbits = 0
        while remaining:
            up = next(iter(remaining))
            P = Poset(5, up, check=False)
            for perm in itertools.permutations(range(5)):
                remaining.discard(relabel(P, list(perm)).up)
            orbits += 1
        assert orbits == 63


class TestMonotoneMap:
    def test_identity_and_compose(self):
        P = chain(3)
        i = identity_map(P)
        assert i.compose(i).is_identity()

    def test_rejects_non_monotone(self):
        P = chain(2)
        with pytest.raises(NotMonotone):
            MonotoneMap(P, P, (1, 0))

    def test_subset_helper(self):
        assert subset_from_iter([0, 2]) == 0b101
