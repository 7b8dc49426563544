"""Acceptance gate: one test per criterion, each printing a pass/fail line.

All checks are exact combinatorial assertions (tolerance zero); the only
numeric bounds are the per-criterion wall-clock budgets, asserted as
stated.  Run with ``pytest tests/test_acceptance.py -s`` to see the lines.
"""

import itertools
import time
from contextlib import contextmanager

from ordfix.convexity import (
    ConvexSet,
    bidom_compare,
    bidom_leq,
    enumerate_convex_poset,
)
from ordfix.core import bits, lexicographic_sum, poset_from_covers, subset_from_iter
from ordfix.deciders import (
    decide_cfpp,
    decide_fpp_cposet,
    dismantle,
    irreducibles,
)
from ordfix.lattices import as_lattice, convex_sublattices, initial_segments
from ordfix.selection import (
    decide_csp,
    lexsum_selection,
    min_selection,
    verify_selection,
)
from ordfix.suites import verify_suite
from ordfix.zoo import generate, robert_self_map


@contextmanager
def criterion(num, name, budget_seconds):
    t0 = time.monotonic()
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {num:02d} {name}: FAIL")
        raise
    elapsed = time.monotonic() - t0
    assert elapsed < budget_seconds, (
        f"criterion {num} took {elapsed:.1f}s, budget {budget_seconds}s"
    )
    print(f"ACCEPTANCE {num:02d} {name}: PASS ({elapsed:.2f}s)")


def test_criterion_01_lattice_example_infimum_failure():
    with criterion(1, "eleven-element lattice, no infimum upstairs", 1.0):
        ex = generate("nine_example")
        lat = as_lattice(ex.poset)  # raises if not a lattice
        inv = {v: k for k, v in ex.element_labels.items()}
        P = ex.poset

        def mask(*names):
            return subset_from_iter(inv[nm] for nm in names)

        X = mask("00", "c", "11")
        Y = mask("01", "10")
        Z0 = mask("0", "a", "1")
        Z1 = mask("0", "b", "1")
        cp = enumerate_convex_poset(P)
        iX, iY = cp.index[X], cp.index[Y]
        lower = [
            k for k in range(len(cp)) if cp.leq(k, iX) and cp.leq(k, iY)
        ]
        maximal = sorted(
            cp.sets[k]
            for k in lower
            if not any(j != k and cp.leq(k, j) for j in lower)
        )
        assert maximal == sorted([Z0, Z1])
        # two incomparable maximal lower bounds: no infimum exists
        assert (
            bidom_compare(ConvexSet(P, Z0), ConvexSet(P, Z1)) == "incomparable"
        )


def test_criterion_02_two_level_separating_example():
    with criterion(2, "two-level example separates the properties", 10.0):
        P = generate("two_level").structure
        assert irreducibles(P) == []
        assert not dismantle(P).holds
        v = decide_cfpp(P, exhaustive=True)
        assert not v.holds
        witness = v.witness
        assert witness.violation() is None
        assert witness.fixed_points() == []
        assert witness.values_convex()
        cp = enumerate_convex_poset(P)
        assert len(cp) == 15
        up = decide_fpp_cposet(P, force_search=True)
        assert up.holds


def test_criterion_03_walker_equivalence():
    with criterion(3, "exhaustive convex decision equals dismantlability", 600.0):
        report = verify_suite("walker", max_n=5)
        assert report.instances == 87
        assert report.passed, report.failures[:5]


def test_criterion_04_convex_hosts_have_fpp_upstairs():
    with criterion(4, "convex property forces fixed points upstairs", 300.0):
        report = verify_suite("cposet-fpp", max_n=4)
        assert report.instances == 24
        assert report.passed, report.failures[:5]


def test_criterion_05_crown_and_powerset_selection():
    with criterion(5, "crown obstruction and powerset selections", 1800.0):
        crown = generate("crown_bounded", 6).poset
        cp = enumerate_convex_poset(crown)
        assert len(cp) == 100
        v = decide_csp(crown, fast_paths=False, cp=cp)
        assert not v.holds and v.nodes > 0
        small = generate("powerset_plus", 2).poset
        v2 = decide_csp(small, fast_paths=False)
        assert v2.holds and verify_selection(v2.witness)[0]
        big = generate("powerset_plus", 3).poset
        v3 = decide_csp(big)
        assert not v3.holds and v3.fast_path == "bounded-crown-retract"
        # exhaustive confirmation (optional by the statement, cheap here)
        v4 = decide_csp(big, fast_paths=False)
        assert not v4.holds


def test_criterion_06_sublattice_algebra():
    with criterion(6, "representation formulas match the raw order", 600.0):
        assert len(convex_sublattices(generate("boolean", 2).structure)) == 9
        report = verify_suite(
            "cl-algebra", max_n=7, random_count=500, random_n=10
        )
        assert report.instances == 78 + 500
        assert report.passed, report.failures[:5]


def test_criterion_07_selection_constructions():
    with criterion(7, "selection constructions and transfers verify", 900.0):
        report = verify_suite("selections", max_n=8, full_n=5, sample_count=5)
        assert report.passed, report.failures[:5]
        report2 = verify_suite("quotient-retract", max_n=7)
        assert report2.instances == 78
        assert report2.passed, report2.failures[:5]
        # lexicographic decomposition across three index shapes
        two_chain = poset_from_covers(2, [(0, 1)])
        two_anti = poset_from_covers(2, [])
        for index, blocks in [
            (two_chain, [poset_from_covers(1, []), poset_from_covers(1, [])]),
            (two_chain, [two_anti, two_anti]),
            (two_anti, [poset_from_covers(2, [(0, 1)]), poset_from_covers(3, [(0, 1), (1, 2)])]),
        ]:
            L = lexicographic_sum(index, blocks)
            sel = lexsum_selection(
                L,
                [min_selection(initial_segments(B)) for B in L.blocks],
                min_selection(initial_segments(L.index)),
            )
            assert verify_selection(sel)[0]


def test_criterion_08_embedding_criterion_and_width():
    with criterion(8, "sequence criterion matches direct embedding search", 600.0):
        report = verify_suite("embedding-criterion", max_n=8, k_max=3)
        assert report.instances == 300
        assert report.passed, report.failures[:5]
        report2 = verify_suite("width-boolean", max_n=5, k_max=3)
        assert report2.instances == 87
        assert report2.passed, report2.failures[:5]


def test_criterion_09_pregap_machinery():
    with criterion(9, "pregap laws and finite non-vacuity", 600.0):
        report = verify_suite("pregaps", max_n=4, samples=25, nonvacuity_n=5)
        assert report.passed, report.failures[:5]


def test_criterion_10_truncated_infinite_examples():
    with criterion(10, "truncated examples reproduce the closed forms", 1.0):
        N = 6
        ex = generate("qbar", N)
        P = ex.poset
        inv = {v: k for k, v in ex.element_labels.items()}
        A = subset_from_iter(inv[f"a{m}"] for m in range(N + 1))
        B = subset_from_iter(inv[f"b{m}"] for m in range(N + 1))
        C = subset_from_iter(inv[f"c{m}"] for m in range(N + 1))
        one = 1 << inv["1"]
        zero = 1 << inv["0"]
        hull_final = A | B | one
        hull_initial = A | C | zero

        def c_ge(n):
            return subset_from_iter(inv[f"c{m}"] for m in range(n, N + 1))

        def b_ge(n):
            return subset_from_iter(inv[f"b{m}"] for m in range(n, N + 1))

        for n in range(5):
            F_n = P.upset(A | (1 << inv[f"c{n}"]))
            I_n = P.downset(A | b_ge(n))
            assert F_n == A | B | c_ge(n) | one
            assert I_n == A | b_ge(n) | C | zero
            assert F_n & hull_initial == A | c_ge(n)
            assert I_n & hull_final == A | b_ge(n)
        for n in range(N - 1):
            assert (
                bidom_compare(
                    ConvexSet(P, A | c_ge(n)), ConvexSet(P, A | c_ge(n + 1))
                )
                == "less"
            )
            assert (
                bidom_compare(
                    ConvexSet(P, A | b_ge(n + 1)), ConvexSet(P, A | b_ge(n))
                )
                == "less"
            )
            for m in range(N - 1):
                assert bidom_leq(P, A | c_ge(n + 1), A | b_ge(m + 1))

        ex_r = generate("robert", 3)
        T = ex_r.structure
        Pr = ex_r.poset
        S = robert_self_map(ex_r)
        assert all(
            Pr.leq(x, y) == Pr.leq(S[y], S[x])
            for x in range(Pr.n)
            for y in range(Pr.n)
        )
        d_level = [
            i for i, lab in ex_r.element_labels.items() if lab.startswith("D:")
        ]
        for x in d_level:
            for y in range(Pr.n):
                if Pr.leq(x, y) or Pr.leq(y, x):
                    continue
                j = T.join(x, y)
                assert j == T.join(x, S[y]) == T.join(S[x], y)
