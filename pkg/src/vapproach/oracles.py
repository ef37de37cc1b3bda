"""Brute-force reference enumerations.

Nothing here imports the rest of the package: every routine works from raw
tables (subsets as bitmasks, orders as boolean matrices) so that it can serve
as an independent cross-check of the main code paths.
"""
from __future__ import annotations

import itertools


def _subsets(n):
    return range(1 << n)


def kuratowski_closures(n):
    """All Kuratowski closure operators on an ``n``-point set.

    Each operator is returned as a tuple ``cl`` indexed by subset bitmask.
    Additivity means an operator is fixed by its values on singletons, so
    candidates are generated from those values and then checked against all
    four axioms on the full table.
    """
    full = (1 << n) - 1
    choices = [[m for m in _subsets(n) if m >> x & 1] for x in range(n)]
    found = []
    for singles in itertools.product(*choices):
        cl = []
        for a in _subsets(n):
            out = 0
            for x in range(n):
                if a >> x & 1:
                    out |= singles[x]
            cl.append(out)
        if cl[0] != 0:
            continue
        ok = True
        for a in _subsets(n):
            if a & ~cl[a] & full or cl[cl[a]] != cl[a]:
                ok = False
                break
            for b in _subsets(n):
                if cl[a | b] != cl[a] | cl[b]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            found.append(tuple(cl))
    return found


def finite_topologies(n):
    """All topologies on ``n`` points, as frozensets of open-set bitmasks."""
    full = (1 << n) - 1
    subsets = list(_subsets(n))
    found = []
    for bits in range(1 << len(subsets)):
        fam = {s for i, s in enumerate(subsets) if bits >> i & 1}
        if 0 not in fam or full not in fam:
            continue
        if all(a | b in fam and a & b in fam for a in fam for b in fam):
            found.append(frozenset(fam))
    return found


def moore_closures(n):
    """All closure operators (extensive, monotone, idempotent) on ``n`` points.

    Enumerated through Moore families: intersection-closed families that
    contain the whole set. ``cl(∅)`` need not be empty.
    """
    full = (1 << n) - 1
    subsets = list(_subsets(n))
    found = []
    for bits in range(1 << len(subsets)):
        fam = [s for i, s in enumerate(subsets) if bits >> i & 1]
        fs = set(fam)
        if full not in fs:
            continue
        if not all(a & b in fs for a in fam for b in fam):
            continue
        cl = []
        for a in subsets:
            out = full
            for f in fam:
                if a & f == a:
                    out &= f
            cl.append(out)
        found.append(tuple(cl))
    return found


def _join_by_search(leq, elems):
    n = len(leq)
    ubs = [c for c in range(n) if all(leq[e][c] for e in elems)]
    least = [c for c in ubs if all(leq[c][d] for d in ubs)]
    return least[0]


def totally_below_bruteforce(leq, u, v):
    """``u ≪ v`` by quantifying over every subset ``D`` of the carrier."""
    n = len(leq)
    for bits in range(1 << n):
        d = [i for i in range(n) if bits >> i & 1]
        if leq[v][_join_by_search(leq, d)] and not any(leq[u][x] for x in d):
            return False
    return True


def coprimes_bruteforce(leq):
    """Coprime elements: above bottom and prime for every finite join."""
    n = len(leq)
    bottom = _join_by_search(leq, [])
    out = set()
    for p in range(n):
        if p == bottom:
            continue
        ok = True
        for bits in range(1 << n):
            d = [i for i in range(n) if bits >> i & 1]
            if leq[p][_join_by_search(leq, d)] and not any(leq[p][x] for x in d):
                ok = False
                break
        if ok:
            out.add(p)
    return out


def galois_partners(leq_src, leq_tgt, f):
    """Search every map ``g`` with ``f(v) <= w  <=>  v <= g(w)``.

    Returns (lefts, rights): all tables ``h`` with ``h ⊣ f`` and all ``g``
    with ``f ⊣ g``. Only for tiny carriers.
    """
    ns, nt = len(leq_src), len(leq_tgt)
    rights, lefts = [], []
    for g in itertools.product(range(ns), repeat=nt):
        if all(leq_tgt[f[v]][w] == leq_src[v][g[w]] for v in range(ns) for w in range(nt)):
            rights.append(g)
        if all(leq_src[g[w]][v] == leq_tgt[w][f[v]] for v in range(ns) for w in range(nt)):
            lefts.append(g)
    return lefts, rights
