import random

import pytest

from ordfix.convexity import enumerate_convex_poset
from ordfix.core import bits, popcount, poset_from_covers
from ordfix.deciders import (
    MultiMap,
    decide_cfpp,
    decide_fpp,
    decide_fpp_cposet,
    decide_rfpp,
    dismantle,
    elimination_chain,
    irreducibles,
    retract_search,
)
from ordfix.errors import BudgetExceeded, NotMonotone
from ordfix.zoo import enumerate_posets, generate


def chain(n):
    return poset_from_covers(n, [(i, i + 1) for i in range(n - 1)])


def antichain(n):
    return poset_from_covers(n, [])


class TestIrreducibles:
    def test_chain_all(self):
        assert irreducibles(chain(4)) == [0, 1, 2, 3]

    def test_two_level_none(self):
        assert irreducibles(generate("two_level").structure) == []

    def test_atoms_above_bottom(self):
        P = poset_from_covers(4, [(0, 1), (0, 2), (0, 3)])
        got = irreducibles(P)
        assert set(got) >= {1, 2, 3}


class TestDismantle:
    def test_bounded_posets_dismantle(self):
        for n in range(1, 6):
            for P in enumerate_posets(n):
                if P.top() is not None or P.bottom() is not None:
                    assert dismantle(P).holds

    def test_two_level_core_is_itself(self):
        P = generate("two_level").structure
        v = dismantle(P)
        assert not v.holds
        assert sorted(v.witness["core"]) == [0, 1, 2, 3]

    def test_crown_bounded_dismantles(self):
        assert dismantle(generate("crown_bounded", 6).poset).holds

    def test_elimination_order_is_valid(self):
        P = generate("nine_example").poset
        v = dismantle(P)
        assert v.holds
        cur, labels = P, list(range(P.n))
        for removed, _target in v.witness["elimination"]:
            local = labels.index(removed)
            assert local in irreducibles(cur)
            keep = [i for i in range(cur.n) if i != local]
            cur, _ = cur.induced(keep)
            labels = [l for l in labels if l != removed]
        assert cur.n == 1

    def test_greedy_is_confluent_in_core_size(self):
        rng = random.Random(7)
        for n in range(2, 7):
            for P in enumerate_posets(n):
                base = len(elimination_chain(P)[2])
                for _ in range(3):
                    pick = lambda opts: rng.choice(sorted(opts))
                    assert len(elimination_chain(P, pick=pick)[2]) == base


class TestDecideFpp:
    def test_two_antichain_swap(self):
        v = decide_fpp(antichain(2))
        assert not v.holds and v.witness.values == (1, 0)

    def test_chains_have_it(self):
        for n in range(1, 6):
            assert decide_fpp(chain(n)).holds

    def test_crown_rotation_found(self):
        P = generate("crown", 6).structure
        v = decide_fpp(P)
        assert not v.holds
        f = v.witness
        assert all(f.values[x] != x for x in range(P.n))

    def test_reduction_agrees_with_direct(self):
        for n in range(1, 6):
            for P in enumerate_posets(n):
                assert decide_fpp(P).holds == decide_fpp(P, direct=True).holds

    def test_witness_revalidates(self):
        for n in range(2, 6):
            for P in enumerate_posets(n):
                v = decide_fpp(P)
                if not v.holds:
                    assert v.witness.violation() is None
                    assert all(
                        v.witness.values[x] != x for x in range(P.n)
                    )


class TestDecideCfpp:
    def test_two_level_witness(self):
        v = decide_cfpp(generate("two_level").structure, exhaustive=True)
        assert not v.holds
        assert v.witness.values == (1 << 1, 1 << 0, 1 << 3, 1 << 2)

    def test_crown_bounded_true(self):
        v = decide_cfpp(generate("crown_bounded", 6).poset)
        assert v.holds and v.fast_path == "dismantlable"

    def test_powerset_plus_true(self):
        for k in (1, 2, 3):
            assert decide_cfpp(generate("powerset_plus", k).poset).holds

    def test_top_implies_property(self):
        # finiteness plus a greatest element always gives the property
        for n in range(1, 6):
            for P in enumerate_posets(n):
                if P.top() is not None:
                    assert decide_cfpp(P, exhaustive=True).holds

    def test_exhaustive_equals_dismantlability(self):
        for n in range(1, 6):
            for P in enumerate_posets(n):
                assert decide_cfpp(P, exhaustive=True).holds == dismantle(P).holds


class TestDecideRfpp:
    def test_two_antichain(self):
        v = decide_rfpp(antichain(2))
        assert not v.holds

    def test_two_chain_true_by_exhaustion(self):
        v = decide_rfpp(chain(2))
        assert v.holds and v.nodes > 0

    def test_triple_agreement(self):
        for n in range(1, 5):
            for P in enumerate_posets(n):
                r = decide_rfpp(P)
                c = decide_cfpp(P, exhaustive=True)
                d = dismantle(P)
                assert r.holds == c.holds == d.holds

    def test_size_cap(self):
        with pytest.raises(BudgetExceeded):
            decide_rfpp(antichain(6))


class TestDecideFppCposet:
    def test_two_level_positive(self):
        v = decide_fpp_cposet(generate("two_level").structure, force_search=True)
        assert v.holds

    def test_powerset_plus_small(self):
        for k in (1, 2):
            assert decide_fpp_cposet(generate("powerset_plus", k).poset).holds

    def test_antichain_negative_with_derangement(self):
        for n in (2, 3):
            v = decide_fpp_cposet(antichain(n), force_search=True)
            assert not v.holds
            f = v.witness
            assert all(f.values[i] != i for i in range(len(f.values)))

    def test_property_follows_the_host(self):
        # positive on every dismantlable host at small size
        for n in range(1, 5):
            for P in enumerate_posets(n):
                if dismantle(P).holds:
                    assert decide_fpp_cposet(P, force_search=True).holds

    def test_rutkowski_interval_criterion(self):
        # a totally ordered pregap whose separator interval lacks the
        # single-valued property forces failure upstairs
        for n in range(1, 5):
            for P in enumerate_posets(n):
                cp = enumerate_convex_poset(P)
                cpp = cp.as_poset()
                rows = cp.rows()
                has_fpp = decide_fpp_cposet(P, force_search=True).holds
                for i in range(len(cp)):
                    for j in bits(rows[i]):
                        interval = [
                            k
                            for k in range(len(cp))
                            if cp.leq(i, k) and cp.leq(k, j)
                        ]
                        if not interval:
                            continue
                        sub, _ = cpp.induced(interval)
                        if not decide_fpp(sub).holds:
                            assert not has_fpp


class TestRetractSearch:
    def test_identity_pair(self):
        P = chain(3)
        v = retract_search(P, P)
        assert v.holds
        s, r = v.witness
        assert s.values == r.values == (0, 1, 2)

    def test_chain_two_inside_three(self):
        v = retract_search(chain(3), chain(2))
        assert v.holds

    def test_two_level_not_retract_of_crown_bounded(self):
        # the property transfers along retractions, so none can exist here
        v = retract_search(
            generate("crown_bounded", 6).poset,
            generate("two_level").structure,
        )
        assert not v.holds and v.nodes > 0

    def test_preservation_of_convex_property(self):
        for n in range(1, 5):
            for P in enumerate_posets(n):
                if not decide_cfpp(P, exhaustive=True).holds:
                    continue
                for m in range(1, 5):
                    for Q in enumerate_posets(m):
                        if m > n:
                            continue
                        got = retract_search(P, Q)
                        if got.holds:
                            assert decide_cfpp(Q, exhaustive=True).holds


class TestMultiMap:
    def test_rejects_non_monotone(self):
        P = chain(2)
        with pytest.raises(NotMonotone):
            MultiMap(P, (1 << 1, 1 << 0))

    def test_rejects_empty_value(self):
        with pytest.raises(NotMonotone):
            MultiMap(chain(2), (0, 1))

    def test_fixed_points(self):
        P = chain(2)
        mm = MultiMap(P, (0b01, 0b11))
        assert mm.fixed_points() == [0, 1]
