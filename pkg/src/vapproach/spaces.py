"""V-closure and V-approach structures on finite sets.

A structure is stored as an index table ``c[A, x]`` with rows indexed by
subset bitmasks (bit i is the i-th point of the carrier). Towers are
stored as ``ops[v, A]``, a bitmask for every quantale element v.
"""
from __future__ import annotations

import itertools
import random

import numpy as np

from .lattice import check_coprime_decomposition, coprimes, is_ccd
from .report import BudgetExceeded, CapabilityError, LawReport

DEFAULT_BOUND = 1 << 25


def mask_of(carrier, labels):
    m = 0
    for lab in labels:
        m |= 1 << carrier.pos[lab]
    return m


def subset_labels(carrier, mask):
    return [x for i, x in enumerate(carrier.items) if mask >> i & 1]


def _image(f, mask):
    out, i = 0, 0
    while mask:
        if mask & 1:
            out |= 1 << f[i]
        mask >>= 1
        i += 1
    return out


class DistanceStructure:
    """A table c: PX → V^X (no axioms assumed)."""

    def __init__(self, carrier, quantale, table):
        n = len(carrier)
        t = np.array(table, dtype=np.int64).reshape(1 << n, n)
        if t.size and (t.min() < 0 or t.max() >= quantale.size):
            raise ValueError("table entries must be quantale elements")
        t.setflags(write=False)
        self.carrier, self.quantale, self.table = carrier, quantale, t

    @property
    def n(self):
        return len(self.carrier)

    def __call__(self, subset, x):
        """``(cA)(x)`` for a label collection (or bitmask) A and a label x."""
        m = subset if isinstance(subset, (int, np.integer)) else mask_of(self.carrier, subset)
        return int(self.table[m, self.carrier.pos[x]])

    def __eq__(self, other):
        return (isinstance(other, DistanceStructure) and self.carrier == other.carrier
                and self.quantale == other.quantale and np.array_equal(self.table, other.table))

    def __hash__(self):
        return hash((self.carrier, self.table.tobytes()))

    def __repr__(self):
        return f"DistanceStructure({list(self.carrier.labels)}, {self.quantale.name})"

    def key(self):
        return self.table.tobytes()

    def leq(self, other):
        q = self.quantale
        return bool(q.leq[self.table, other.table].all())

    def to_labels(self):
        """Rows as [subset labels, {point: value label}]."""
        q = self.quantale
        return [[subset_labels(self.carrier, m),
                 {x: q.label(int(self.table[m, i])) for i, x in enumerate(self.carrier)}]
                for m in range(1 << self.n)]

    # constructors
    @classmethod
    def from_function(cls, carrier, q, fn):
        n = len(carrier)
        return cls(carrier, q, [[fn(m, i) for i in range(n)] for m in range(1 << n)])

    @classmethod
    def membership(cls, carrier, q, inside=None):
        """cA(x) = ``inside`` (default k) if x ∈ A, else ⊥."""
        v = q.unit if inside is None else inside
        return cls.from_function(carrier, q, lambda m, i: v if m >> i & 1 else q.bottom)

    @classmethod
    def constant(cls, carrier, q, value):
        return cls.from_function(carrier, q, lambda m, i: value)

    @classmethod
    def from_point_matrix(cls, carrier, q, a):
        """cA(x) = ⋁_{y∈A} a[y][x]; in particular c∅ = ⊥."""
        n = len(carrier)
        a = np.asarray(a, dtype=np.int64).reshape(n, n)
        t = np.full((1 << n, n), q.bottom, dtype=np.int64)
        jt = q.join_table
        for m in range(1, 1 << n):
            low = (m & -m).bit_length() - 1
            t[m] = jt[t[m & (m - 1)], a[low]]
        return cls(carrier, q, t)

    def point_matrix(self):
        """a[y][x] = c({y})(x)."""
        return np.array([self.table[1 << y] for y in range(self.n)], dtype=np.int64).reshape(
            self.n, self.n)


# -- (R'), (T') --------------------------------------------------------------------

def _subset_joins(q, t):
    """G[U] = ⋁_{A ⊆ U} c[A], pointwise."""
    g = np.array(t)
    jt = q.join_table
    n = t.shape[1]
    for i in range(n):
        bit = 1 << i
        for m in range(len(g)):
            if m & bit:
                g[m] = jt[g[m], g[m ^ bit]]
    return g


def _meets_over_b(q, g):
    """M[U, B] = ⋀_{y ∈ B} g[U, y]."""
    size = g.shape[0]
    mt = q.meet_table
    out = np.empty((size, size), dtype=np.int64)
    out[:, 0] = q.top
    for b in range(1, size):
        low = (b & -b).bit_length() - 1
        out[:, b] = mt[out[:, b & (b - 1)], g[:, low]]
    return out


def transitivity_lhs(q, t):
    """L[U, B, z] = (⋀_{y∈B} ⋁_{A⊆U} cA(y)) ⊗ cB(z).

    For a family 𝒜 with ⋃𝒜 = U the (T') left side is below the value for
    𝒜 = P(U), with the same right side c(U)(z); so checking these families
    decides (T') for all families.
    """
    g = _subset_joins(q, t)
    m = _meets_over_b(q, g)
    return q.tensor_table[m[:, :, None], t[None, :, :]]


def closure_ok(q, t):
    """Fast boolean for (R') and (T') on a raw table."""
    n = t.shape[1]
    k = q.unit
    if any(not q.le(k, int(t[1 << i, i])) for i in range(n)):
        return False
    lhs = transitivity_lhs(q, t)
    return bool(q.leq[lhs, t[:, None, :]].all())


def check_closure(s, naive=False, cap=20):
    """(R') and (T'), with witnesses.

    The default decides (T') through the family 𝒜 = P(U) for every union U
    (see ``transitivity_lhs``); ``naive=True`` loops over every family
    𝒜 ⊆ PX and is meant for cross-checking at |X| <= 4.
    """
    q, t, X = s.quantale, s.table, s.carrier
    n = len(X)
    rep = LawReport()
    for i, x in enumerate(X):
        if not q.le(q.unit, int(t[1 << i, i])):
            rep.fail("R'", {"x": x, "value": q.label(int(t[1 << i, i]))}, cap)
    rep.add("R'", n)
    sub = lambda m: subset_labels(X, m)  # noqa: E731
    if not naive:
        lhs = transitivity_lhs(q, t)
        bad = ~q.leq[lhs, t[:, None, :]]
        for u, b, z in zip(*np.nonzero(bad)):
            rep.fail("T'", {"family": [sub(a) for a in range(1 << n) if a & ~u == 0],
                            "B": sub(b), "z": X.items[z], "lhs": q.label(int(lhs[u, b, z])),
                            "rhs": q.label(int(t[u, z]))}, cap)
        rep.add("T'", (1 << n) * (1 << n) * n)
        return rep
    if n > 4:
        raise CapabilityError("naive (T') check is limited to |X| <= 4")
    size = 1 << n
    jt, mt, tt = q.join_table, q.meet_table, q.tensor_table
    for fam in range(1 << size):
        g = np.full(n, q.bottom, dtype=np.int64)
        union = 0
        for a in range(size):
            if fam >> a & 1:
                g = jt[g, t[a]]
                union |= a
        for b in range(size):
            mv = q.top
            for y in range(n):
                if b >> y & 1:
                    mv = mt[mv, g[y]]
            lhs = tt[mv, t[b]]
            ok = q.leq[lhs, t[union]]
            for z in np.nonzero(~ok)[0]:
                rep.fail("T'", {"family": [sub(a) for a in range(size) if fam >> a & 1],
                                "B": sub(b), "z": X.items[z], "lhs": q.label(int(lhs[z])),
                                "rhs": q.label(int(t[union, z]))}, cap)
    rep.add("T'", (1 << size) * size * n)
    return rep


def is_closure(s):
    return closure_ok(s.quantale, s.table)


def approach_ok(q, t):
    if (t[0] != q.bottom).any():
        return False
    size = t.shape[0]
    jt = q.join_table
    a = np.arange(size)
    unions = a[:, None] | a[None, :]
    return bool((t[unions] == jt[t[:, None, :], t[None, :, :]]).all())


def is_approach(s):
    """Finite-join preservation; returns (verdict, witness or None)."""
    q, t, X = s.quantale, s.table, s.carrier
    for i, x in enumerate(X):
        if t[0, i] != q.bottom:
            return False, {"law": "empty", "A": [], "x": x, "value": q.label(int(t[0, i]))}
    size = t.shape[0]
    for a in range(size):
        for b in range(a + 1, size):
            for i, x in enumerate(X):
                lhs = int(t[a | b, i])
                rhs = q.join(int(t[a, i]), int(t[b, i]))
                if lhs != rhs:
                    return False, {"law": "union", "A": subset_labels(X, a),
                                   "B": subset_labels(X, b), "x": x,
                                   "c(A∪B)": q.label(lhs), "cA∨cB": q.label(rhs)}
    return True, None


# -- towers ------------------------------------------------------------------------

class Tower:
    """A family of set operators c^v: PX → PX, one per quantale element."""

    def __init__(self, carrier, quantale, ops):
        n = len(carrier)
        o = np.array(ops, dtype=np.int64).reshape(quantale.size, 1 << n)
        if o.size and (o.min() < 0 or o.max() >= 1 << n):
            raise ValueError("tower values must be subsets of the carrier")
        o.setflags(write=False)
        self.carrier, self.quantale, self.ops = carrier, quantale, o

    def __call__(self, v, subset):
        q = self.quantale
        m = subset if isinstance(subset, (int, np.integer)) else mask_of(self.carrier, subset)
        return subset_labels(self.carrier, int(self.ops[q.index(v), m]))

    def __eq__(self, other):
        return (isinstance(other, Tower) and self.carrier == other.carrier
                and self.quantale == other.quantale and np.array_equal(self.ops, other.ops))

    def __hash__(self):
        return hash((self.carrier, self.ops.tobytes()))

    def to_labels(self):
        """{v label: [[A], [c^v A]] rows}."""
        q, X = self.quantale, self.carrier
        return {q.label(v): [[subset_labels(X, m), subset_labels(X, int(self.ops[v, m]))]
                             for m in range(1 << len(X))] for v in range(q.size)}


def to_tower(s):
    """c^v A = {x | v <= cA(x)}."""
    q, t = s.quantale, s.table
    n = s.n
    weights = (1 << np.arange(n, dtype=np.int64))
    ops = np.empty((q.size, 1 << n), dtype=np.int64)
    for v in range(q.size):
        ops[v] = (q.leq[v][t] * weights).sum(axis=1) if n else 0
    return Tower(s.carrier, q, ops)


def _tower_to_table(t):
    q, ops = t.quantale, t.ops
    n = len(t.carrier)
    table = np.full((1 << n, n), q.bottom, dtype=np.int64)
    jt = q.join_table
    for v in range(q.size):
        for i in range(n):
            inside = (ops[v] >> i) & 1
            table[:, i] = np.where(inside == 1, jt[table[:, i], v], table[:, i])
    return table


def from_tower(t, check=True):
    """cA(x) = ⋁{v | x ∈ c^v A}; rejects towers failing (C0)-(C3)."""
    if check:
        rep = check_tower(t, "closure")
        if not rep.ok:
            raise CapabilityError(f"tower fails {rep.laws_violated()[0]}: {rep.violations[0]}")
    return DistanceStructure(t.carrier, t.quantale, _tower_to_table(t))


def _is_sub(a, b):
    return a & ~b == 0


def check_tower(t, mode="closure", cap=20):
    """Tower axioms. ``mode``: closure | approach_ll | approach_coprime."""
    q, ops, X = t.quantale, t.ops, t.carrier
    n = len(X)
    size = 1 << n
    full = size - 1
    if mode not in ("closure", "approach_ll", "approach_coprime"):
        raise CapabilityError(f"unknown tower mode {mode!r}")
    if mode == "approach_ll" and not is_ccd(q):
        raise CapabilityError(f"{q.name} is not ccd; approach_ll needs ⇓-decompositions")
    if mode == "approach_coprime" and check_coprime_decomposition(q):
        raise CapabilityError(f"{q.name}: elements are not joins of coprimes")
    rep = LawReport()
    sub = lambda m: subset_labels(X, int(m))  # noqa: E731
    lab = q.label
    for v in range(q.size):
        for a in range(size):
            for b in range(size):
                if _is_sub(b, a) and not _is_sub(ops[v, b], ops[v, a]):
                    rep.fail("C0", {"v": lab(v), "B": sub(b), "A": sub(a)}, cap)
    rep.add("C0", q.size * size * size)
    for bits in range(1 << q.size):
        d = [u for u in range(q.size) if bits >> u & 1]
        jd = q.join_all(d)
        for a in range(size):
            inter = full
            for u in d:
                inter &= int(ops[u, a])
            for v in range(q.size):
                if q.le(v, jd) and not _is_sub(inter, ops[v, a]):
                    rep.fail("C1", {"v": lab(v), "family": [lab(u) for u in d], "A": sub(a)}, cap)
    rep.add("C1", (1 << q.size) * size * q.size)
    for a in range(size):
        if not _is_sub(a, ops[q.unit, a]):
            rep.fail("C2", {"A": sub(a), "ckA": sub(ops[q.unit, a])}, cap)
    rep.add("C2", size)
    c3 = True
    for u in range(q.size):
        for v in range(q.size):
            w = q.mul(v, u)
            for a in range(size):
                if not _is_sub(ops[u, ops[v, a]], ops[w, a]):
                    c3 = False
                    rep.fail("C3", {"u": lab(u), "v": lab(v), "A": sub(a)}, cap)
    rep.add("C3", q.size * q.size * size)
    # (C3') compared with (C3) whenever the tower is the threshold tower of its table
    table = _tower_to_table(t)
    if np.array_equal(to_tower(DistanceStructure(X, q, table)).ops, ops):
        c3p = True
        for v in range(q.size):
            for a in range(size):
                inner = int(ops[v, a])
                for i in range(n):
                    if not q.le(q.mul(v, int(table[inner, i])), int(table[a, i])):
                        c3p = False
                        rep.fail("C3'", {"v": lab(v), "A": sub(a), "x": X.items[i]}, cap)
        rep.add("C3'", q.size * size * n)
        if c3 != c3p:
            rep.fail("C3<=>C3'", {"C3": c3, "C3'": c3p}, cap)
        rep.add("C3<=>C3'")
    if mode == "approach_ll":
        wb = q.way_below
        for v in range(q.size):
            if v == q.bottom:
                continue
            if ops[v, 0] != 0:
                rep.fail("C4", {"v": lab(v), "cv∅": sub(ops[v, 0])}, cap)
            below = [u for u in range(q.size) if wb[u, v]]
            for a in range(size):
                for b in range(size):
                    inter = full
                    for u in below:
                        inter &= int(ops[u, a] | ops[u, b])
                    if ops[v, a | b] != inter:
                        rep.fail("C5", {"v": lab(v), "A": sub(a), "B": sub(b),
                                        "cv(A∪B)": sub(ops[v, a | b]), "meet": sub(inter)}, cap)
        rep.add("C4", q.size - 1)
        rep.add("C5", (q.size - 1) * size * size)
        # bottom case of (C4) in its ⋂_{u≪v} ∅ form
        inter = full
        for u in range(q.size):
            if wb[u, q.bottom]:
                inter = 0
        if ops[q.bottom, 0] != inter:
            rep.fail("C4(bottom)", {"c⊥∅": sub(ops[q.bottom, 0]), "expected": sub(inter)}, cap)
        rep.add("C4(bottom)")
    if mode == "approach_coprime":
        cps = sorted(coprimes(q))
        for p in cps:
            if ops[p, 0] != 0:
                rep.fail("C4'", {"p": lab(p), "cp∅": sub(ops[p, 0])}, cap)
            for a in range(size):
                for b in range(size):
                    if ops[p, a | b] != ops[p, a] | ops[p, b]:
                        rep.fail("C5'", {"p": lab(p), "A": sub(a), "B": sub(b)}, cap)
        rep.add("C4'", len(cps))
        rep.add("C5'", len(cps) * size * size)
    return rep


def _monotone_operators(n, extensive):
    size = 1 << n
    out = []

    def extend(ops, a):
        if a == size:
            out.append(tuple(ops))
            return
        lower = 0
        for i in range(n):
            if a >> i & 1:
                lower |= ops[a & ~(1 << i)]
        if extensive:
            lower |= a
        for img in range(size):
            if img & lower == lower:
                ops.append(img)
                extend(ops, a + 1)
                ops.pop()

    extend([], 0)
    return out


def enumerate_towers(carrier, q):
    """Every tower satisfying (C0)-(C3), by search over monotone operators.

    The search only uses consequences of the axioms: each c^v is monotone
    (C0); c^⊥ is constantly X and u <= v gives c^v ⊆ c^u (both from (C1));
    c^v is extensive for v <= k ((C2) with the previous point). Survivors
    pass the full :func:`check_tower`.
    """
    n = len(carrier)
    full = (1 << n) - 1
    plain, ext = _monotone_operators(n, False), _monotone_operators(n, True)
    order = sorted(range(q.size), key=lambda v: sum(q.le(u, v) for u in range(q.size)))
    chosen = {}
    out = []

    def extend(k):
        if k == len(order):
            t = Tower(carrier, q, [chosen[v] for v in range(q.size)])
            if check_tower(t).ok:
                out.append(t)
            return
        v = order[k]
        if v == q.bottom:
            pool = [(full,) * (1 << n)]
        else:
            pool = ext if q.le(v, q.unit) else plain
        for op in pool:
            if all(all(_is_sub(x, y) for x, y in zip(op, chosen[u]))
                   for u in chosen if q.le(u, v)):
                chosen[v] = op
                extend(k + 1)
                del chosen[v]

    extend(0)
    return out


# -- maps --------------------------------------------------------------------------

class SpaceMap:
    """A function between carriers, with source and target structures."""

    def __init__(self, source, target, mapping):
        if source.quantale != target.quantale:
            raise CapabilityError("structures live over different quantales")
        if isinstance(mapping, dict):
            f = tuple(target.carrier.pos[mapping[x]] for x in source.carrier)
        else:
            f = tuple(int(i) for i in mapping)
        if len(f) != source.n or any(not 0 <= i < target.n for i in f):
            raise CapabilityError("map is not total between the carriers")
        self.source, self.target, self.f = source, target, f

    def image(self, mask):
        return _image(self.f, mask)


def check_contractive(m):
    """(M'): cA(x) <= d(f(A))(fx) for all A, x."""
    s, d, f = m.source, m.target, m.f
    q = s.quantale
    for a in range(1 << s.n):
        fa = m.image(a)
        for i in range(s.n):
            lhs, rhs = int(s.table[a, i]), int(d.table[fa, f[i]])
            if not q.le(lhs, rhs):
                return False, {"A": subset_labels(s.carrier, a), "x": s.carrier.items[i],
                               "cA(x)": q.label(lhs), "d(fA)(fx)": q.label(rhs)}
    return True, None


def check_continuity(m, source_tower=None, target_tower=None):
    """f(c^v A) ⊆ d^v(f(A)) for all v, A."""
    ts = source_tower or to_tower(m.source)
    td = target_tower or to_tower(m.target)
    q = ts.quantale
    for v in range(q.size):
        for a in range(1 << m.source.n):
            img = m.image(int(ts.ops[v, a]))
            if not _is_sub(img, td.ops[v, m.image(a)]):
                return False, {"v": q.label(v), "A": subset_labels(m.source.carrier, a)}
    return True, None


# -- enumeration -------------------------------------------------------------------

class Enumeration:
    def __init__(self, structures, exhaustive, candidates):
        self.structures, self.exhaustive, self.candidates = structures, exhaustive, candidates

    @property
    def count(self):
        return len(self.structures)

    def __iter__(self):
        return iter(self.structures)

    def __len__(self):
        return len(self.structures)


def all_tables(carrier, q):
    """Every raw table PX × X → V, in lexicographic order."""
    n = len(carrier)
    cells = (1 << n) * n
    for vals in itertools.product(range(q.size), repeat=cells):
        yield DistanceStructure(carrier, q, vals)


def category_completion(q, a):
    """Least reflexive, transitive matrix above ``a``: a(x,y)⊗a(y,z) <= a(x,z)."""
    a = np.array(a, dtype=np.int64)
    n = a.shape[0]
    jt, tt = q.join_table, q.tensor_table
    for i in range(n):
        a[i, i] = jt[a[i, i], q.unit]
    while True:
        prod = tt[a[:, :, None], a[None, :, :]]
        new = a.copy()
        for y in range(n):
            new = jt[new, prod[:, y, :]]
        if np.array_equal(new, a):
            return a
        a = new


def closure_hull(q, table):
    """Least table above ``table`` satisfying (R') and (T').

    Iterates the inflationary step that raises c{x}(x) to k and joins every
    (T') left side into its right-hand entry; each step stays below any
    closure structure above the start, so the fixpoint is the least one.
    """
    t = np.array(table, dtype=np.int64)
    n = t.shape[1]
    jt = q.join_table
    while True:
        new = t.copy()
        for i in range(n):
            new[1 << i, i] = jt[new[1 << i, i], q.unit]
        lhs = transitivity_lhs(q, new)
        for b in range(lhs.shape[1]):
            new = jt[new, lhs[:, b, :]]
        if np.array_equal(new, t):
            return t
        t = new


def _search_space(q, n, filt):
    if filt == "approach":
        return q.size ** (n * n)
    return q.size ** ((1 << n) * n)


def enumerate_structures(carrier, q, filt="approach", bound=DEFAULT_BOUND, budget=None):
    """All structures of the given kind on ``carrier``, or a seeded sample.

    ``filt``: ``approach`` runs over point matrices (an approach structure is
    the join-extension of its values on singletons) and keeps those passing
    (R'), (T'); ``closure`` is a backtracking search over rows in bitmask
    order, pruned by monotonicity and extensivity (both consequences of
    (R'), (T')) and completed by the full check. When the search space
    exceeds ``bound``, ``budget`` must be given and ``budget.samples``
    distinct structures are drawn instead.
    """
    if filt not in ("approach", "closure"):
        raise CapabilityError(f"unknown filter {filt!r}")
    n = len(carrier)
    space = _search_space(q, n, filt)
    if space <= bound:
        found = _enum_approach(carrier, q) if filt == "approach" else _enum_closure(carrier, q)
        return Enumeration(found, True, space)
    if budget is None:
        raise BudgetExceeded(f"{space} candidates exceed the bound {bound}; pass a budget")
    return Enumeration(sample_structures(carrier, q, filt, budget.samples, budget.seed),
                       False, space)


def _enum_approach(carrier, q):
    n = len(carrier)
    above_k = [v for v in range(q.size) if q.le(q.unit, v)]
    cells = [(i, j) for i in range(n) for j in range(n)]
    choices = [above_k if i == j else range(q.size) for i, j in cells]
    out = []
    for vals in itertools.product(*choices):
        a = np.array(vals, dtype=np.int64).reshape(n, n)
        s = DistanceStructure.from_point_matrix(carrier, q, a)
        if closure_ok(q, s.table):
            out.append(s)
    return out


def _enum_closure(carrier, q):
    n = len(carrier)
    size = 1 << n
    vecs = list(itertools.product(range(q.size), repeat=n))
    le, mul, meet = q.le, q.mul, q.meet
    k, top = q.unit, q.top
    rows = [None] * size
    out = []

    def meet_over(row, b):
        mv = top
        for y in range(n):
            if b >> y & 1:
                mv = meet(mv, row[y])
        return mv

    def consistent(u):
        ru = rows[u]
        for b in range(u + 1):
            rb = rows[b]
            mv = meet_over(ru, b)
            if any(not le(mul(mv, rb[z]), ru[z]) for z in range(n)):
                return False
            if b < u:
                mv = meet_over(rows[b], u)
                if any(not le(mul(mv, ru[z]), rb[z]) for z in range(n)):
                    return False
        return True

    def extend(u):
        if u == size:
            t = np.array(rows, dtype=np.int64).reshape(size, n)
            if closure_ok(q, t):
                out.append(DistanceStructure(carrier, q, t))
            return
        preds = [rows[u & ~(1 << i)] for i in range(n) if u >> i & 1]
        for v in vecs:
            if any(u >> i & 1 and not le(k, v[i]) for i in range(n)):
                continue
            if any(not le(p[i], v[i]) for p in preds for i in range(n)):
                continue
            rows[u] = v
            if consistent(u):
                extend(u + 1)
        rows[u] = None

    extend(0)
    return out


def sample_structures(carrier, q, filt, count, seed):
    """Up to ``count`` distinct structures, drawn reproducibly from ``seed``.

    Approach structures come from completing random point matrices to
    V-categories; closure structures from closure hulls of random tables.
    """
    rng = random.Random(seed)
    n = len(carrier)
    seen, out = set(), []
    attempts = 0
    while len(out) < count and attempts < 50 * count:
        attempts += 1
        if filt == "approach":
            a = [[_biased(rng, q) for _ in range(n)] for _ in range(n)]
            s = DistanceStructure.from_point_matrix(carrier, q, category_completion(q, a))
        else:
            raw = [[_biased(rng, q) for _ in range(n)] for _ in range(1 << n)]
            s = DistanceStructure(carrier, q, closure_hull(q, raw))
        key = s.key()
        if key not in seen:
            seen.add(key)
            out.append(s)
    return out


def _biased(rng, q):
    """Random element, bottom-heavy so completions do not all saturate."""
    return q.bottom if rng.random() < 0.4 else rng.randrange(q.size)


# -- probabilistic approach axioms --------------------------------------------------

def check_probapp(s, cap=20):
    """(PD1)-(PD4) for a structure over a delta grid, δ(x, A) = (cA)(x)."""
    q, t, X = s.quantale, s.table, s.carrier
    if q.family != "delta_grid":
        raise CapabilityError(f"{q.name} is not a delta grid")
    n = s.n
    size = 1 << n
    kappa, zero = q.top, q.bottom
    rep = LawReport()
    lab = q.label
    sub = lambda m: subset_labels(X, m)  # noqa: E731
    for i, x in enumerate(X):
        if t[1 << i, i] != kappa:
            rep.fail("PD1", {"x": x, "value": lab(int(t[1 << i, i]))}, cap)
        if t[0, i] != zero:
            rep.fail("PD2", {"x": x, "value": lab(int(t[0, i]))}, cap)
    rep.add("PD1", n)
    rep.add("PD2", n)
    for a in range(size):
        for b in range(size):
            for i, x in enumerate(X):
                if t[a | b, i] != q.join(int(t[a, i]), int(t[b, i])):
                    rep.fail("PD3", {"x": x, "A": sub(a), "B": sub(b)}, cap)
    rep.add("PD3", size * size * n)
    for a in range(size):
        for phi in range(q.size):
            a_phi = 0
            for j in range(n):
                if q.le(phi, int(t[a, j])):
                    a_phi |= 1 << j
            for i, x in enumerate(X):
                rhs = q.mul(int(t[a_phi, i]), phi)
                if not q.le(rhs, int(t[a, i])):
                    rep.fail("PD4", {"x": x, "A": sub(a), "phi": lab(phi), "A^phi": sub(a_phi),
                                     "δ(x,A)": lab(int(t[a, i])), "δ(x,A^φ)⊙φ": lab(rhs)}, cap)
    rep.add("PD4", size * q.size * n)
    return rep
