"""Named example structures, exhaustive enumeration, random generation.

Every generator is deterministic: the same key and parameters rebuild the
same labelled structure bit for bit.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .core import (
    Poset,
    canonical_form,
    canonical_relabel,
    poset_from_covers,
)
from .errors import BadParams, BudgetExceeded, UnknownKey
from .lattices import Lattice, as_lattice, downsets

ENUMERATION_SIZE_MAX = 7


@dataclass(frozen=True)
class NamedExample:
    key: str
    parameters: tuple
    structure: object  # Poset or Lattice
    element_labels: dict

    @property
    def poset(self):
        return (
            self.structure.order
            if isinstance(self.structure, Lattice)
            else self.structure
        )


def _chain(n):
    return poset_from_covers(n, [(i, i + 1) for i in range(n - 1)])


def _gen_chain(n):
    if n < 1:
        raise BadParams("chain needs at least one element")
    return as_lattice(_chain(n)), {i: str(i) for i in range(n)}


def _gen_antichain(n):
    if n < 1:
        raise BadParams("antichain needs at least one element")
    return poset_from_covers(n, []), {i: str(i) for i in range(n)}


def _gen_fence(n):
    if n < 2:
        raise BadParams("fence needs at least two elements")
    covers = []
    for i in range(n - 1):
        covers.append((i, i + 1) if i % 2 == 0 else (i + 1, i))
    return poset_from_covers(n, covers), {i: str(i) for i in range(n)}


def _gen_boolean(k):
    if k < 0:
        raise BadParams("boolean rank must be nonnegative")
    size = 1 << k
    covers = []
    for x in range(size):
        for b in range(k):
            if not (x >> b) & 1:
                covers.append((x, x | (1 << b)))
    labels = {
        x: "{" + ",".join(str(b) for b in range(k) if (x >> b) & 1) + "}"
        for x in range(size)
    }
    return as_lattice(poset_from_covers(size, covers)), labels


def _crown_covers(n):
    if n < 6 or n % 2:
        raise BadParams("crown size must be an even number >= 6")
    m = n // 2
    covers = []
    for i in range(m):
        covers.append((i, m + i))
        covers.append((i, m + (i + 1) % m))
    return m, covers


def _gen_crown(n):
    m, covers = _crown_covers(n)
    labels = {i: f"a{i}" for i in range(m)}
    labels.update({m + i: f"b{i}" for i in range(m)})
    return poset_from_covers(n, covers), labels


def _gen_crown_bounded(n):
    m, covers = _crown_covers(n)
    bot, top = n, n + 1
    covers = list(covers)
    covers.extend((bot, i) for i in range(m))
    covers.extend((m + i, top) for i in range(m))
    labels = {i: f"a{i}" for i in range(m)}
    labels.update({m + i: f"b{i}" for i in range(m)})
    labels[bot] = "⊥"
    labels[top] = "⊤"
    return as_lattice(poset_from_covers(n + 2, covers)), labels


def _gen_two_level():
    # Two minimal elements below two maximal ones; no irreducibles.
    covers = [(0, 2), (0, 3), (1, 2), (1, 3)]
    return poset_from_covers(4, covers), {0: "a", 1: "b", 2: "c", 3: "d"}


_NINE_LABELS = ["⊥", "a", "b", "0", "1", "c", "00", "01", "10", "11", "⊤"]


def _gen_nine_example():
    bot, a, b, z, o, c, zz, zo, oz, oo, top = range(11)
    covers = [
        (bot, a),
        (bot, b),
        (a, z),
        (a, c),
        (b, c),
        (b, o),
        (z, zz),
        (z, zo),
        (o, oz),
        (o, oo),
        (c, top),
        (zz, top),
        (zo, top),
        (oz, top),
        (oo, top),
    ]
    labels = dict(enumerate(_NINE_LABELS))
    return as_lattice(poset_from_covers(11, covers)), labels


def _gen_qbar(N):
    if N < 1:
        raise BadParams("truncation depth must be positive")
    step = N + 1
    a = lambda m: m
    b = lambda m: step + m
    c = lambda m: 2 * step + m
    bot = 3 * step
    top = 3 * step + 1
    pairs = []
    for m in range(step):
        pairs.append((a(m), b(m)))
        pairs.append((bot, a(m)))
        pairs.append((b(m), top))
        for k in range(m, step):
            pairs.append((c(m), b(k)))
    for m in range(N):
        pairs.append((c(m), c(m + 1)))
    pairs.append((bot, c(0)))
    labels = {}
    for m in range(step):
        labels[a(m)] = f"a{m}"
        labels[b(m)] = f"b{m}"
        labels[c(m)] = f"c{m}"
    labels[bot] = "0"
    labels[top] = "1"
    return as_lattice(poset_from_covers(3 * step + 2, pairs)), labels


def _all_strings(d):
    out = []
    for length in range(d + 1):
        for value in range(1 << length):
            out.append((length, value))
    return out


def _is_prefix(s, t):
    ls, vs = s
    lt, vt = t
    return ls <= lt and vt & ((1 << ls) - 1) == vs


def _string_label(s):
    length, value = s
    if length == 0:
        return "ε"
    return "".join(str((value >> i) & 1) for i in range(length))


def _gen_robert(d):
    if d < 1:
        raise BadParams("tree depth must be positive")
    strings = _all_strings(d)
    leaves = [s for s in strings if s[0] == d]
    S = len(strings)
    A0 = S
    U0 = S + len(leaves)
    total = U0 + S
    down_idx = {s: i for i, s in enumerate(strings)}
    leaf_idx = {s: A0 + i for i, s in enumerate(leaves)}
    up_idx = {s: U0 + i for i, s in enumerate(strings)}
    pairs = []
    for s in strings:
        for t in strings:
            if s != t and _is_prefix(s, t):
                pairs.append((down_idx[s], down_idx[t]))
                pairs.append((up_idx[t], up_idx[s]))
            if _is_prefix(s, t) or _is_prefix(t, s):
                pairs.append((down_idx[s], up_idx[t]))
        for t in leaves:
            if _is_prefix(s, t):
                pairs.append((down_idx[s], leaf_idx[t]))
                pairs.append((leaf_idx[t], up_idx[s]))
    labels = {}
    for s in strings:
        labels[down_idx[s]] = f"D:{_string_label(s)}"
        labels[up_idx[s]] = f"U:{_string_label(s)}"
    for s in leaves:
        labels[leaf_idx[s]] = f"A:{_string_label(s)}"
    return as_lattice(poset_from_covers(total, pairs)), labels


def robert_self_map(example):
    """The label-level involution swapping the two tree copies."""
    inverse = {lab: i for i, lab in example.element_labels.items()}
    values = []
    for i in range(example.poset.n):
        lab = example.element_labels[i]
        kind, _, body = lab.partition(":")
        if kind == "D":
            values.append(inverse["U:" + body])
        elif kind == "U":
            values.append(inverse["D:" + body])
        else:
            values.append(i)
    return tuple(values)


def _gen_powerset_plus(k):
    if k < 0:
        raise BadParams("rank must be nonnegative")
    size = 1 << k
    lat, labels = _gen_boolean(k)
    covers = lat.order.covers()
    covers.append((size - 1, size))
    labels = dict(labels)
    labels[size] = "⊤"
    return as_lattice(poset_from_covers(size + 1, covers)), labels


_GENERATORS = {
    "chain": (_gen_chain, 1),
    "antichain": (_gen_antichain, 1),
    "fence": (_gen_fence, 1),
    "boolean": (_gen_boolean, 1),
    "crown": (_gen_crown, 1),
    "crown_bounded": (_gen_crown_bounded, 1),
    "two_level": (_gen_two_level, 0),
    "nine_example": (_gen_nine_example, 0),
    "qbar": (_gen_qbar, 1),
    "robert": (_gen_robert, 1),
    "powerset_plus": (_gen_powerset_plus, 1),
}


def generate(key, *params):
    """Build a named example; unknown keys and bad parameters are errors."""
    if key not in _GENERATORS:
        raise UnknownKey(f"no generator named {key!r}")
    fn, arity = _GENERATORS[key]
    if len(params) != arity:
        raise BadParams(f"{key} expects {arity} parameter(s), got {len(params)}")
    structure, labels = fn(*params)
    return NamedExample(key, tuple(params), structure, labels)


def known_keys():
    return sorted(_GENERATORS)


# --- enumeration -----------------------------------------------------------


_POSET_CLASSES = {}


def _poset_classes(n):
    if n in _POSET_CLASSES:
        return _POSET_CLASSES[n]
    if n > ENUMERATION_SIZE_MAX:
        raise BudgetExceeded(ENUMERATION_SIZE_MAX, "poset enumeration size")
    if n < 1:
        raise BadParams("enumeration needs a positive size")
    if n == 1:
        out = [Poset(1, (1,))]
    else:
        seen = {}
        for smaller in _poset_classes(n - 1):
            for dset in downsets(smaller, budget=None):
                up = [row for row in smaller.up]
                new = n - 1
                new_row = 1 << new
                for y in range(n - 1):
                    if (dset >> y) & 1:
                        up[y] |= new_row
                up.append(new_row)
                cand = Poset(n, up, check=False)
                form = canonical_form(cand)
                if form not in seen:
                    seen[form] = canonical_relabel(cand)
        out = [seen[f] for f in sorted(seen)]
    _POSET_CLASSES[n] = out
    return out


def enumerate_posets(n):
    """One representative per isomorphism class of posets on ``n`` elements.

    Built by extending each smaller class with a new maximal element over
    every initial segment, deduplicated by canonical form.
    """
    yield from _poset_classes(n)


def count_posets(n):
    return len(_poset_classes(n))


_LATTICE_CLASSES = {}


def enumerate_lattices(n):
    """One representative per isomorphism class of lattices on ``n`` elements.

    Every lattice with at least two elements is its bounded middle: classes
    are obtained by adding bounds to each poset class two sizes down and
    keeping those where joins and meets exist.
    """
    if n in _LATTICE_CLASSES:
        return list(_LATTICE_CLASSES[n])
    if n < 1:
        raise BadParams("lattice enumeration needs a positive size")
    if n == 1:
        out = [as_lattice(Poset(1, (1,)))]
    elif n == 2:
        out = [as_lattice(_chain(2))]
    else:
        out = []
        for middle in _poset_classes(n - 2):
            covers = middle.covers()
            bot, top = n - 2, n - 1
            pairs = list(covers)
            pairs.extend((bot, x) for x in middle.minimal_elements())
            pairs.extend((x, top) for x in middle.maximal_elements())
            P = poset_from_covers(n, pairs)
            try:
                out.append(as_lattice(P))
            except Exception:
                continue
    _LATTICE_CLASSES[n] = out
    return list(out)


# --- random structures -------------------------------------------------------


def random_structures(kind, n, seed):
    """Deterministic random poset or lattice of the requested size."""
    if kind == "poset":
        return _random_poset(n, seed)
    if kind == "lattice":
        return _random_lattice(n, seed)
    raise UnknownKey(f"unknown random kind {kind!r}")


def _random_poset(n, seed):
    rng = random.Random(f"poset:{n}:{seed}")
    order = list(range(n))
    rng.shuffle(order)
    pairs = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.4:
                pairs.append((order[i], order[j]))
    return poset_from_covers(n, pairs)


def _random_lattice(n, seed):
    if n == 1:
        return as_lattice(Poset(1, (1,)))
    for attempt in range(10_000):
        rng = random.Random(f"lattice:{n}:{seed}:{attempt}")
        ground = max(2, n - 1)
        full = (1 << ground) - 1
        family = {full}
        while len(family) < n:
            draw = rng.randrange(0, full + 1)
            fresh = {draw}
            for m in family:
                fresh.add(m & draw)
            family |= fresh
            if len(family) > n:
                break
        if len(family) != n:
            continue
        sets = sorted(family)
        rows = []
        for a in sets:
            row = 0
            for j, b in enumerate(sets):
                if a & ~b == 0:
                    row |= 1 << j
            rows.append(row)
        # Meet-closed family with a top: always a lattice.
        return as_lattice(Poset(len(sets), rows, check=False))
    raise BadParams(f"could not hit a lattice of size {n} from seed {seed}")
