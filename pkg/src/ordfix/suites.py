"""Exhaustive verification suites over enumerated structure classes.

Each suite sweeps every isomorphism class up to a size bound (random
structures where the class is too big), re-checks one family of facts with
independent machinery, and reports failures keyed by canonical form so any
failure is reproducible.  Instance streams can be sharded across a process
pool; reports merge order-independently.
"""

from __future__ import annotations

import itertools
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .convexity import (
    ConvexSet,
    Pregap,
    bidom_leq,
    enumerate_convex_poset,
    separators,
    special_pregap,
)
from .core import MonotoneMap, bits, canonical_form, width
from .deciders import (
    decide_cfpp,
    decide_fpp_cposet,
    decide_rfpp,
    dismantle,
    retract_search,
)
from .errors import UnknownSuite
from .lattices import (
    boolean_embedding_search,
    congruences,
    convex_sublattices,
    find_embedding_sequences,
    ideals_filters,
    initial_segments,
    tarski_fixpoint,
)
from .selection import (
    coretraction_from_selection,
    decide_csp,
    min_selection,
    transfer_selection,
    verify_selection,
    weaving_selection,
)
from .zoo import enumerate_lattices, enumerate_posets, random_structures


@dataclass
class SuiteReport:
    suite: str
    instances: int
    failures: list
    elapsed: float

    @property
    def passed(self):
        return not self.failures


def _sweep(name, items, checker, workers=1):
    t0 = time.monotonic()
    failures = []
    if workers <= 1:
        for item in items:
            failures.extend(checker(item))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for out in pool.map(checker, items, chunksize=4):
                failures.extend(out)
    failures.sort()
    return SuiteReport(name, len(items), failures, time.monotonic() - t0)


def _fail(P, prop, detail):
    return (canonical_form(P).hex(), prop, detail)


# --- walker: exhaustive convex-map decision equals dismantlability ---------


def _check_walker(P):
    out = []
    dis = dismantle(P)
    v = decide_cfpp(P, exhaustive=True)
    if v.holds != dis.holds:
        out.append(_fail(P, "CFPP-vs-dismantle", f"{v.holds} vs {dis.holds}"))
    if not v.holds:
        mm = v.witness
        if mm.fixed_points() or not mm.values_convex():
            out.append(_fail(P, "CFPP-witness", "witness failed revalidation"))
    if P.n <= 4:
        r = decide_rfpp(P)
        if r.holds != v.holds:
            out.append(_fail(P, "RFPP-vs-CFPP", f"{r.holds} vs {v.holds}"))
    return out


def suite_walker(max_n=5, seed=0, workers=1):
    items = [P for n in range(1, max_n + 1) for P in enumerate_posets(n)]
    return _sweep("walker", items, _check_walker, workers)


# --- cposet-fpp: hosts with the convex property have fixed points upstairs --


def _check_cposet_fpp(P):
    if not dismantle(P).holds:
        return []
    v = decide_fpp_cposet(P, force_search=True)
    if not v.holds:
        return [_fail(P, "CP-FPP", "expected the convex-set poset to have FPP")]
    return []


def suite_cposet_fpp(max_n=4, seed=0, workers=1):
    items = [P for n in range(1, max_n + 1) for P in enumerate_posets(n)]
    return _sweep("cposet-fpp", items, _check_cposet_fpp, workers)


# --- csp-bipartite: the degree obstruction matches exhaustive search --------


def _check_csp_bipartite(P):
    if not (P.is_bipartite() and all(P.comparability_degree(x) >= 2 for x in range(P.n))):
        return []
    fast = decide_csp(P, fast_paths=True)
    slow = decide_csp(P, fast_paths=False)
    out = []
    if fast.holds or slow.holds:
        out.append(_fail(P, "CSP-bipartite", f"fast={fast.holds} slow={slow.holds}"))
    if fast.fast_path != "bipartite-degree-2":
        out.append(_fail(P, "CSP-fast-path", str(fast.fast_path)))
    return out


def suite_csp_bipartite(max_n=7, seed=0, workers=1):
    items = [P for n in range(2, max_n + 1) for P in enumerate_posets(n)]
    return _sweep("csp-bipartite", items, _check_csp_bipartite, workers)


# --- clfpp-finite: minimum selection plus iteration finds fixed points ------


def _random_monotone_multimap(T, cl, rng):
    """Random monotone map from the lattice into its convex sublattices."""
    P = T.order
    rows = cl.order.up
    full = (1 << len(cl.sets)) - 1
    vals = [None] * P.n
    for x in P.linear_extension():
        allowed = full
        for y in P.cover_preds(x):
            allowed &= rows[vals[y]]
        choices = list(bits(allowed))
        vals[x] = rng.choice(choices)
    return vals


def _check_clfpp(args):
    T, seed, samples = args
    P = T.order
    out = []
    cl = convex_sublattices(T)
    sel = min_selection(T, cl)
    ok, viol = verify_selection(sel)
    if not ok:
        out.append(_fail(P, "min-selection", str(viol)))
        return out
    rng = random.Random(f"clfpp:{seed}:{canonical_form(P).hex()}")
    for _ in range(samples):
        vals = _random_monotone_multimap(T, cl, rng)
        composed = MonotoneMap(P, P, tuple(sel.values[v] for v in vals))
        x = tarski_fixpoint(T, composed)
        if not (cl.sets[vals[x]] >> x) & 1:
            out.append(_fail(P, "selection-fixpoint", f"element {x}"))
    return out


def suite_clfpp_finite(max_n=6, seed=0, workers=1, samples=20):
    items = [
        (T, seed, samples)
        for n in range(1, max_n + 1)
        for T in enumerate_lattices(n)
    ]
    return _sweep("clfpp-finite", items, _check_clfpp, workers)


# --- quotient-retract: quotients split through the selection ----------------


def _check_quotient_retract(T):
    P = T.order
    out = []
    sel = min_selection(T)
    for cong in congruences(T):
        Q, q, f = coretraction_from_selection(T, cong, sel)
        if any(q.values[f.values[y]] != y for y in range(Q.order.n)):
            out.append(_fail(P, "quotient-coretraction", str(cong.blocks)))
        transferred = transfer_selection(
            "quotient", {"lattice": T, "congruence": cong, "selection": sel}
        )
        ok, viol = verify_selection(transferred)
        if not ok:
            out.append(_fail(P, "quotient-transfer", str(viol)))
    return out


def suite_quotient_retract(max_n=7, seed=0, workers=1):
    items = [T for n in range(1, max_n + 1) for T in enumerate_lattices(n)]
    return _sweep("quotient-retract", items, _check_quotient_retract, workers)


# --- pregaps ----------------------------------------------------------------


def _random_pregap(cp, rng, max_family=3):
    m = len(cp)
    rows = cp.rows()
    for _ in range(40):
        k = rng.randint(1, max_family)
        lower = rng.sample(range(m), min(k, m))
        region = (1 << m) - 1
        for a in lower:
            region &= rows[a]
        if not region:
            continue
        pool = list(bits(region))
        upper = rng.sample(pool, min(rng.randint(1, max_family), len(pool)))
        A = tuple(ConvexSet(cp.host, cp.sets[i]) for i in lower)
        B = tuple(ConvexSet(cp.host, cp.sets[j]) for j in upper)
        return Pregap(A, B)
    return None


def _check_pregap_laws(args):
    P, seed, samples = args
    out = []
    cp = enumerate_convex_poset(P)
    host = P
    rows = cp.rows()
    rng = random.Random(f"pregaps:{seed}:{canonical_form(P).hex()}")
    gaps = []
    for i in range(len(cp)):
        for j in bits(rows[i]):
            gaps.append(
                Pregap(
                    (ConvexSet(host, cp.sets[i]),),
                    (ConvexSet(host, cp.sets[j]),),
                )
            )
    for _ in range(samples):
        g = _random_pregap(cp, rng)
        if g is not None:
            gaps.append(g)
    for g in gaps:
        seps = separators(g, cp)
        hull_meet = g.upper_hull & g.lower_hull
        if seps:
            if hull_meet == 0:
                out.append(_fail(P, "pregap-separator-hull", "empty hull"))
                continue
            Z = ConvexSet(host, host.downset(hull_meet) & host.upset(hull_meet))
            if Z.members != hull_meet:
                out.append(_fail(P, "pregap-hull-convex", "hull not convex"))
            in_seps = any(S.members == hull_meet for S in seps)
            if not in_seps:
                out.append(_fail(P, "pregap-hull-separates", "hull not a separator"))
            for S in seps:
                if S.members & ~hull_meet:
                    out.append(_fail(P, "pregap-hull-contains", "separator escapes hull"))
                    break
        sp = special_pregap(g)
        sp_seps = separators(sp, cp)
        sep_masks = {S.members for S in seps}
        if any(S.members not in sep_masks for S in sp_seps):
            out.append(_fail(P, "special-pregap-separators", "not contained"))
        for A in g.A_family:
            up_a = A.up()
            if host.upset(g.lower_hull & up_a) != up_a:
                out.append(_fail(P, "hull-identity-up", str(A.elements())))
        for B in g.B_family:
            dn_b = B.down()
            if host.downset(g.upper_hull & dn_b) != dn_b:
                out.append(_fail(P, "hull-identity-down", str(B.elements())))
        for A in g.A_family:
            for B in g.B_family:
                mid_a = g.lower_hull & A.up()
                mid_b = g.upper_hull & B.down()
                chain = (
                    bidom_leq(host, A.members, mid_a)
                    and bidom_leq(host, mid_a, mid_b)
                    and bidom_leq(host, mid_b, B.members)
                )
                if not chain:
                    out.append(_fail(P, "pregap-chain", "A <= A' <= B' <= B failed"))
    return out


def _check_nonvacuity(P):
    """Totally ordered pregaps always meet: check all comparable pairs.

    Finite totally ordered families have a maximal lower member and a
    minimal upper member, so the two hulls are the cones of those two sets
    and the general case reduces to pairs.
    """
    out = []
    cp = enumerate_convex_poset(P)
    rows = cp.rows()
    for i in range(len(cp)):
        for j in bits(rows[i]):
            if cp.ups[i] & cp.downs[j] == 0:
                out.append(_fail(P, "nonvacuity", f"pair {i} <= {j}"))
    return out


def suite_pregaps(max_n=4, seed=0, workers=1, samples=25, nonvacuity_n=5):
    items = [
        (P, seed, samples)
        for n in range(1, max_n + 1)
        for P in enumerate_posets(n)
    ]
    report = _sweep("pregaps", items, _check_pregap_laws, workers)
    extra = [
        P for n in range(1, nonvacuity_n + 1) for P in enumerate_posets(n)
    ]
    t0 = time.monotonic()
    for P in extra:
        report.failures.extend(_check_nonvacuity(P))
    report.instances += len(extra)
    report.elapsed += time.monotonic() - t0
    report.failures.sort()
    return report


# --- filling: no gaps among convex sublattices of a finite lattice ----------


def _check_filling(args):
    T, seed, samples = args
    P = T.order
    out = []
    cl = convex_sublattices(T)
    rng = random.Random(f"filling:{seed}:{canonical_form(P).hex()}")
    pregaps = []
    for i in range(len(cl.sets)):
        for j in range(len(cl.sets)):
            if cl.order.leq(i, j):
                pregaps.append(
                    Pregap(
                        (ConvexSet(P, cl.sets[i]),),
                        (ConvexSet(P, cl.sets[j]),),
                    )
                )
    rng.shuffle(pregaps)
    pregaps = pregaps[:samples]
    m = len(cl.sets)
    for _ in range(min(samples, 20)):
        lower = rng.sample(range(m), rng.randint(1, min(3, m)))
        region = (1 << m) - 1
        for a in lower:
            region &= cl.order.up[a]
        if not region:
            continue
        pool = list(bits(region))
        upper = rng.sample(pool, rng.randint(1, min(3, len(pool))))
        pregaps.append(
            Pregap(
                tuple(ConvexSet(P, cl.sets[i]) for i in lower),
                tuple(ConvexSet(P, cl.sets[j]) for j in upper),
            )
        )
    for g in pregaps:
        hull_meet = g.upper_hull & g.lower_hull
        if hull_meet == 0:
            out.append(_fail(P, "filling-hull", "hulls miss each other"))
            continue
        ok = all(
            bidom_leq(P, A.members, hull_meet) for A in g.A_family
        ) and all(bidom_leq(P, hull_meet, B.members) for B in g.B_family)
        if not ok:
            out.append(_fail(P, "filling-separator", "hull does not separate"))
    return out


def suite_filling(max_n=6, seed=0, workers=1, samples=200):
    items = [
        (T, seed, samples)
        for n in range(1, max_n + 1)
        for T in enumerate_lattices(n)
    ]
    return _sweep("filling", items, _check_filling, workers)


# --- width-boolean -----------------------------------------------------------


def _check_width_boolean(args):
    P, k_max = args
    out = []
    IP = initial_segments(P)
    w = width(P)
    for k in range(1, k_max + 1):
        got = boolean_embedding_search(IP, k)
        if (got.found is not None) != (w >= k):
            out.append(_fail(P, "width-boolean", f"k={k} width={w}"))
    return out


def suite_width_boolean(max_n=5, seed=0, workers=1, k_max=3):
    items = [
        (P, k_max) for n in range(1, max_n + 1) for P in enumerate_posets(n)
    ]
    return _sweep("width-boolean", items, _check_width_boolean, workers)


# --- cl-algebra: representation formulas against the raw order --------------


def _literal_formula_join(T, cl, i, j):
    """Join by the containment formulas, evaluated from the definitions."""
    P = T.order
    prods = 0
    for a in bits(cl.downs[i]):
        for b in bits(cl.downs[j]):
            prods |= 1 << T.join(a, b)
    return P.downset(prods) & (cl.ups[i] & cl.ups[j])


def _literal_formula_meet(T, cl, i, j):
    P = T.order
    prods = 0
    for a in bits(cl.ups[i]):
        for b in bits(cl.ups[j]):
            prods |= 1 << T.meet(a, b)
    return (cl.downs[i] & cl.downs[j]) & P.upset(prods)


def _check_cl_algebra(T):
    P = T.order
    out = []
    cl = convex_sublattices(T)
    for i in range(len(cl.sets)):
        for j in range(len(cl.sets)):
            if cl.sets[cl.join(i, j)] != _literal_formula_join(T, cl, i, j):
                out.append(_fail(P, "cl-join-formula", f"{i},{j}"))
            if cl.sets[cl.meet(i, j)] != _literal_formula_meet(T, cl, i, j):
                out.append(_fail(P, "cl-meet-formula", f"{i},{j}"))
    id_lat, fi_lat = ideals_filters(T)
    for I in id_lat.sets:
        for F in fi_lat.sets:
            core = I & F
            if core == 0:
                continue
            if P.downset(core) != I or P.upset(core) != F:
                out.append(_fail(P, "k-pair-recovery", f"I={I:b} F={F:b}"))
    return out


def suite_cl_algebra(max_n=7, seed=0, workers=1, random_n=10, random_count=0):
    items = [T for n in range(1, max_n + 1) for T in enumerate_lattices(n)]
    for s in range(random_count):
        size = 2 + (s % (random_n - 1))
        items.append(random_structures("lattice", size, seed * 10_000 + s))
    return _sweep("cl-algebra", items, _check_cl_algebra, workers)


# --- embedding-criterion ------------------------------------------------------


def _check_embedding_criterion(args):
    T, k_max = args
    out = []
    for k in range(1, k_max + 1):
        seq = find_embedding_sequences(T, k)
        direct = boolean_embedding_search(T, k)
        if (seq.found is None) != (direct.found is None):
            out.append(
                _fail(T.order, "embedding-criterion", f"k={k} disagreement")
            )
    return out


def suite_embedding_criterion(max_n=8, seed=0, workers=1, k_max=3):
    items = [
        (T, k_max) for n in range(1, max_n + 1) for T in enumerate_lattices(n)
    ]
    return _sweep("embedding-criterion", items, _check_embedding_criterion, workers)


# --- selections: constructions and transfers ---------------------------------


def _check_selections(args):
    T, seed, full_enumerations, sample_count = args
    P = T.order
    out = []
    cl = convex_sublattices(T)
    ok, viol = verify_selection(min_selection(T, cl))
    if not ok:
        out.append(_fail(P, "min-selection", str(viol)))
    if full_enumerations:
        perms = itertools.permutations(range(P.n))
    else:
        rng = random.Random(f"selections:{seed}:{canonical_form(P).hex()}")
        perms = []
        base = list(range(P.n))
        for _ in range(sample_count):
            rng.shuffle(base)
            perms.append(tuple(base))
    for perm in perms:
        sel = weaving_selection(T, tuple(perm), cl)
        ok, viol = verify_selection(sel)
        if not ok:
            out.append(_fail(P, "weaving", f"perm={perm} {viol}"))
            break
    return out


def suite_selections(max_n=8, seed=0, workers=1, full_n=5, sample_count=5):
    items = []
    for n in range(1, max_n + 1):
        for T in enumerate_lattices(n):
            items.append((T, seed, n <= full_n, sample_count))
    report = _sweep("selections", items, _check_selections, workers)
    t0 = time.monotonic()
    report.failures.extend(_transfer_spotchecks(seed))
    report.elapsed += time.monotonic() - t0
    report.failures.sort()
    return report


def _transfer_spotchecks(seed):
    from .zoo import generate

    out = []
    chain2 = generate("chain", 2).structure
    chain3 = generate("chain", 3).structure
    b2 = generate("boolean", 2).structure
    prod = transfer_selection(
        "product",
        {
            "factors": (chain2, chain3),
            "selections": (min_selection(chain2), min_selection(chain3)),
        },
    )
    if not verify_selection(prod)[0]:
        out.append(("-", "product-transfer", "chain2 x chain3"))
    found = retract_search(b2.order, chain2.order)
    if found.holds:
        s, r = found.witness
        moved = transfer_selection(
            "retract",
            {
                "big": b2,
                "small": chain2,
                "selection": min_selection(b2),
                "s": s,
                "r": r,
            },
        )
        if not verify_selection(moved)[0]:
            out.append(("-", "retract-transfer", "boolean(2) onto chain2"))
    else:
        out.append(("-", "retract-transfer", "no retraction found"))
    return out


SUITES = {
    "walker": suite_walker,
    "cposet-fpp": suite_cposet_fpp,
    "csp-bipartite": suite_csp_bipartite,
    "clfpp-finite": suite_clfpp_finite,
    "quotient-retract": suite_quotient_retract,
    "pregaps": suite_pregaps,
    "filling": suite_filling,
    "width-boolean": suite_width_boolean,
    "cl-algebra": suite_cl_algebra,
    "embedding-criterion": suite_embedding_criterion,
    "selections": suite_selections,
}


def verify_suite(name, **kwargs):
    """Run a registered suite; unknown names are an error."""
    if name not in SUITES:
        raise UnknownSuite(f"no suite named {name!r}; try one of {sorted(SUITES)}")
    return SUITES[name](**kwargs)
