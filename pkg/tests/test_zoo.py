import pytest
from hypothesis import given, settings, strategies as st

from ordfix.core import (
    bits,
    canonical_form,
    lexicographic_sum,
    poset_from_covers,
    subset_from_iter,
)
from ordfix.errors import BadParams, BudgetExceeded, UnknownKey
from ordfix.lattices import Lattice, as_lattice
from ordfix.zoo import (
    count_posets,
    enumerate_lattices,
    enumerate_posets,
    generate,
    known_keys,
    random_structures,
    robert_self_map,
)


class TestGenerate:
    def test_unknown_key(self):
        with pytest.raises(UnknownKey):
            generate("moebius")

    def test_bad_params(self):
        with pytest.raises(BadParams):
            generate("crown", 5)
        with pytest.raises(BadParams):
            generate("crown", 4)
        with pytest.raises(BadParams):
            generate("chain")

    def test_deterministic_regeneration(self):
        for key, params in [
            ("chain", (5,)),
            ("crown_bounded", (8,)),
            ("qbar", (4,)),
            ("robert", (2,)),
            ("nine_example", ()),
        ]:
            a = generate(key, *params)
            b = generate(key, *params)
            assert a.poset.up == b.poset.up
            assert a.element_labels == b.element_labels

    def test_lattice_keys_are_lattices(self):
        for key, params in [
            ("chain", (4,)),
            ("boolean", (3,)),
            ("crown_bounded", (6,)),
            ("nine_example", ()),
            ("qbar", (3,)),
            ("robert", (2,)),
            ("powerset_plus", (2,)),
        ]:
            assert isinstance(generate(key, *params).structure, Lattice)

    def test_fence(self):
        P = generate("fence", 4).structure
        assert P.lt(0, 1) and P.lt(2, 1) and P.lt(2, 3)

    def test_two_level_is_ordinal_sum_of_antichains(self):
        direct = generate("two_level").structure
        two = poset_from_covers(2, [(0, 1)])
        anti = poset_from_covers(2, [])
        summed = lexicographic_sum(two, [anti, anti]).sum
        assert canonical_form(direct) == canonical_form(summed)

    def test_crown_comparability_cycle(self):
        P = generate("crown", 8).structure
        assert all(P.comparability_degree(x) == 2 for x in range(P.n))
        assert P.is_bipartite()


class TestNineExample:
    def test_labels_cover_everything(self):
        ex = generate("nine_example")
        assert sorted(ex.element_labels) == list(range(11))
        assert set(ex.element_labels.values()) == {
            "⊥", "a", "b", "0", "1", "c", "00", "01", "10", "11", "⊤"
        }

    def test_cover_relations_as_listed(self):
        ex = generate("nine_example")
        inv = {v: k for k, v in ex.element_labels.items()}
        P = ex.poset
        cover_labels = {
            (ex.element_labels[i], ex.element_labels[j]) for i, j in P.covers()
        }
        expected = {
            ("⊥", "a"), ("⊥", "b"),
            ("a", "0"), ("a", "c"), ("b", "c"), ("b", "1"),
            ("0", "00"), ("0", "01"), ("1", "10"), ("1", "11"),
            ("c", "⊤"), ("00", "⊤"), ("01", "⊤"), ("10", "⊤"), ("11", "⊤"),
        }
        assert cover_labels == expected


class TestQbar:
    def test_bounds_orientation(self):
        ex = generate("qbar", 4)
        inv = {v: k for k, v in ex.element_labels.items()}
        P = ex.poset
        assert P.bottom() == inv["0"]
        assert P.top() == inv["1"]

    def test_cone_formulas(self):
        N = 5
        ex = generate("qbar", N)
        inv = {v: k for k, v in ex.element_labels.items()}
        P = ex.poset
        A = subset_from_iter(inv[f"a{m}"] for m in range(N + 1))
        B = subset_from_iter(inv[f"b{m}"] for m in range(N + 1))
        C = subset_from_iter(inv[f"c{m}"] for m in range(N + 1))
        for n in range(N - 1):
            c_ge = subset_from_iter(inv[f"c{m}"] for m in range(n, N + 1))
            b_ge = subset_from_iter(inv[f"b{m}"] for m in range(n, N + 1))
            assert P.upset(A | (1 << inv[f"c{n}"])) == A | B | c_ge | (
                1 << inv["1"]
            )
            assert P.downset(A | b_ge) == A | b_ge | C | (1 << inv["0"])


class TestRobert:
    def test_self_dual_map(self):
        for d in (1, 2, 3):
            ex = generate("robert", d)
            P = ex.poset
            S = robert_self_map(ex)
            assert sorted(S) == list(range(P.n))
            for x in range(P.n):
                assert S[S[x]] == x
                for y in range(P.n):
                    assert P.leq(x, y) == P.leq(S[y], S[x])

    def test_level_sizes(self):
        ex = generate("robert", 3)
        kinds = {"D": 0, "A": 0, "U": 0}
        for lab in ex.element_labels.values():
            kinds[lab.partition(":")[0]] += 1
        assert kinds == {"D": 15, "A": 8, "U": 15}


class TestEnumeration:
    def test_poset_counts(self):
        assert [count_posets(n) for n in range(1, 6)] == [1, 2, 5, 16, 63]

    def test_distinct_canonical_forms(self):
        for n in range(1, 6):
            forms = [canonical_form(P) for P in enumerate_posets(n)]
            assert len(forms) == len(set(forms))

    def test_size_cap(self):
        with pytest.raises(BudgetExceeded):
            list(enumerate_posets(8))

    def test_lattice_counts(self):
        assert [len(enumerate_lattices(n)) for n in range(1, 8)] == [
            1, 1, 1, 2, 5, 15, 53,
        ]

    def test_lattices_validate(self):
        for n in range(1, 7):
            for T in enumerate_lattices(n):
                as_lattice(T.order)


class TestRandomStructures:
    def test_same_seed_same_structure(self):
        a = random_structures("poset", 6, 42)
        b = random_structures("poset", 6, 42)
        assert a.up == b.up
        c = random_structures("lattice", 7, 3)
        d = random_structures("lattice", 7, 3)
        assert c.order.up == d.order.up

    def test_lattice_outputs_validate(self):
        for seed in range(40):
            T = random_structures("lattice", 4 + seed % 7, seed)
            as_lattice(T.order)
            assert T.n == 4 + seed % 7

    @given(st.integers(1, 8), st.integers(0, 500))
    @settings(max_examples=80, deadline=None)
    def test_poset_invariants_hold(self, n, seed):
        P = random_structures("poset", n, seed)
        for x in range(P.n):
            assert P.leq(x, x)
            for y in bits(P.up[x]):
                assert P.up[y] & ~P.up[x] == 0
                if x != y:
                    assert not P.leq(y, x) or x == y

    def test_unknown_kind(self):
        with pytest.raises(UnknownKey):
            random_structures("graph", 3, 0)


class TestKnownKeys:
    def test_registry(self):
        assert "crown_bounded" in known_keys()
        assert "qbar" in known_keys()
