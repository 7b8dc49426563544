"""Backtracking kernel for monotone-map searches, with node budgets.

Every exact decider assigns values along a linear extension of its domain,
so constraints flow only upward; assigning an element prunes the candidate
domains of everything above it, and an emptied domain fails the branch
immediately.  Budgets make exhaustion an explicit outcome instead of a
silent hang; the ``ORDFIX_BUDGET`` environment variable overrides the
default limit.
"""

from __future__ import annotations

import os

from .core import bits
from .errors import BudgetExceeded

DEFAULT_NODE_BUDGET = 10_000_000
_MEMO_LIMIT = 250_000


def node_budget(override=None):
    if override is not None:
        return override
    env = os.environ.get("ORDFIX_BUDGET")
    return int(env) if env else DEFAULT_NODE_BUDGET


class Budget:
    """Counts search nodes and raises once the limit is passed."""

    __slots__ = ("limit", "nodes")

    def __init__(self, limit=None):
        self.limit = node_budget(limit)
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.nodes > self.limit:
            raise BudgetExceeded(self.limit, "search nodes")


def search_monotone_map(dom, val_up, candidates, budget, memo=True):
    """First assignment of one value per domain element, monotone upward.

    ``val_up[v]`` is the bitmask of values lying above ``v`` in the value
    order; ``candidates[x]`` lists admissible values for ``x`` in preferred
    order.  Returns a value tuple or None after exhausting the tree.
    Infeasible frontiers (values of assigned elements that still have
    unassigned successors) are memoised; they determine every remaining
    domain, so the cache is sound.
    """
    n = dom.n
    ext = dom.linear_extension()
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] | (1 << ext[i])
    # prefix_frontier[i]: assigned elements that still constrain ext[i:].
    prefix_frontier = [
        tuple(y for y in ext[:i] if dom.up[y] & ~(1 << y) & suffix[i])
        for i in range(n)
    ]
    strict_up = [dom.up[x] & ~(1 << x) for x in range(n)]
    cand_mask = []
    for x in range(n):
        m = 0
        for v in candidates[x]:
            m |= 1 << v
        cand_mask.append(m)
    domains = list(cand_mask)
    vals = [None] * n
    dead = set()

    def rec(i):
        if i == n:
            return True
        x = ext[i]
        key = None
        if memo:
            key = (i, tuple(vals[y] for y in prefix_frontier[i]))
            if key in dead:
                return False
        live = domains[x]
        for v in candidates[x]:
            if not (live >> v) & 1:
                continue
            budget.tick()
            row = val_up[v]
            touched = []
            feasible = True
            for y in bits(strict_up[x]):
                old = domains[y]
                new = old & row
                if new != old:
                    domains[y] = new
                    touched.append((y, old))
                    if new == 0:
                        feasible = False
                        break
            if feasible:
                vals[x] = v
                if rec(i + 1):
                    return True
                vals[x] = None
            for y, old in touched:
                domains[y] = old
        if memo and len(dead) < _MEMO_LIMIT:
            dead.add(key)
        return False

    if rec(0):
        return tuple(vals)
    return None


def search_monotone_map_dynamic(dom, val_up, val_dn, candidates, budget):
    """Monotone-map search choosing the most constrained element next.

    Assignments no longer follow a linear extension, so both value cones
    are needed and every unassigned comparable element is pruned on each
    assignment.  Pays off when the domain order has wide antichains whose
    conflicts sit far apart in any static order.
    """
    n = dom.n
    cand_order = candidates
    domains = []
    for x in range(n):
        m = 0
        for v in candidates[x]:
            m |= 1 << v
        domains.append(m)
    vals = [None] * n
    unassigned = set(range(n))

    def rec():
        if not unassigned:
            return True
        x = min(unassigned, key=lambda y: (bin(domains[y]).count("1"), y))
        live = domains[x]
        unassigned.discard(x)
        for v in cand_order[x]:
            if not (live >> v) & 1:
                continue
            budget.tick()
            touched = []
            feasible = True
            for y in unassigned:
                if dom.leq(x, y):
                    new = domains[y] & val_up[v]
                elif dom.leq(y, x):
                    new = domains[y] & val_dn[v]
                else:
                    continue
                if new != domains[y]:
                    touched.append((y, domains[y]))
                    domains[y] = new
                    if new == 0:
                        feasible = False
                        break
            if feasible:
                vals[x] = v
                if rec():
                    return True
                vals[x] = None
            for y, old in touched:
                domains[y] = old
        unassigned.add(x)
        return False

    if rec():
        return tuple(vals)
    return None
