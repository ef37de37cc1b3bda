"""Finite quantales, monotone maps between them, and derived order notions.

Elements are handled internally as integer indices into ``Quantale.labels``;
labels (strings) appear only at the edges: constructors, witnesses and files.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, reduce

import numpy as np

from .report import CapabilityError, NotMonotoneError, QuantaleStructureError, Violation


class Quantale:
    """A finite complete lattice with an associative, join-preserving tensor.

    ``leq[a][b]`` is True when ``a <= b``; ``tensor[a][b]`` is the index of
    ``a ⊗ b``; ``unit`` is the index of the tensor unit ``k``. The instance is
    immutable. Tables are accepted even if they break the quantale laws, so
    that ``check_quantale`` can report on them; operations that need lattice
    joins raise ``CapabilityError`` when the order is not a lattice.
    """

    def __init__(self, labels, leq, tensor, unit, *, name=None, family=None, params=None,
                 payload=None):
        labels = tuple(str(x) for x in labels)
        n = len(labels)
        if n == 0:
            raise QuantaleStructureError("a quantale needs at least one element")
        if len(set(labels)) != n:
            raise QuantaleStructureError("element labels must be distinct")
        leq = np.asarray(leq, dtype=bool)
        tensor = np.asarray(tensor)
        if leq.shape != (n, n):
            raise QuantaleStructureError(f"order table must be {n}x{n}, got {leq.shape}")
        if tensor.shape != (n, n):
            raise QuantaleStructureError(f"tensor table must be {n}x{n}, got {tensor.shape}")
        if not np.issubdtype(tensor.dtype, np.integer) or tensor.min() < 0 or tensor.max() >= n:
            raise QuantaleStructureError("tensor table refers to unknown elements")
        if not 0 <= int(unit) < n:
            raise QuantaleStructureError(f"unknown unit element {unit!r}")
        self.labels = labels
        self.size = n
        self.unit = int(unit)
        self.name = name or "quantale"
        self.family = family or "explicit"
        self.params = dict(params or {})
        # constructor-specific value per element (numbers, vectors, index sets)
        self.payload = tuple(payload) if payload is not None else None
        self.leq = leq
        self.leq.setflags(write=False)
        self.tensor_table = tensor.astype(np.int64)
        self.tensor_table.setflags(write=False)
        self._le = tuple(tuple(bool(x) for x in row) for row in leq)
        self._mul = tuple(tuple(int(x) for x in row) for row in tensor)
        self._index = {lab: i for i, lab in enumerate(labels)}
        self._lattice = self._build_lattice()

    @classmethod
    def from_tables(cls, elements, leq_pairs, tensor_triples, unit, **kw):
        """Build from label-level tables, as found in quantale files.

        ``leq_pairs`` lists every related pair ``[a, b]`` (``a <= b``) and is
        taken literally; ``tensor_triples`` lists ``[a, b, a⊗b]`` for every pair.
        """
        elements = [str(e) for e in elements]
        idx = {e: i for i, e in enumerate(elements)}
        if len(idx) != len(elements):
            raise QuantaleStructureError("duplicate element identifiers")

        def look(e, where):
            try:
                return idx[str(e)]
            except KeyError:
                raise QuantaleStructureError(f"unknown element {e!r} in {where}") from None

        n = len(elements)
        leq = np.zeros((n, n), dtype=bool)
        for pair in leq_pairs:
            if len(pair) != 2:
                raise QuantaleStructureError(f"order entry {pair!r} is not a pair")
            leq[look(pair[0], "leq"), look(pair[1], "leq")] = True
        tensor = np.full((n, n), -1, dtype=np.int64)
        for triple in tensor_triples:
            if len(triple) != 3:
                raise QuantaleStructureError(f"tensor entry {triple!r} is not a triple")
            a, b, c = (look(t, "tensor") for t in triple)
            tensor[a, b] = c
        missing = np.argwhere(tensor < 0)
        if len(missing):
            a, b = missing[0]
            raise QuantaleStructureError(
                f"tensor table has no entry for ({elements[a]}, {elements[b]})")
        return cls(elements, leq, tensor, look(unit, "unit"), **kw)

    def _build_lattice(self):
        n, le = self.size, self._le
        bottoms = [a for a in range(n) if all(le[a][b] for b in range(n))]
        tops = [a for a in range(n) if all(le[b][a] for b in range(n))]
        if len(bottoms) != 1 or len(tops) != 1:
            return None
        join = [[0] * n for _ in range(n)]
        meet = [[0] * n for _ in range(n)]
        for a in range(n):
            for b in range(n):
                ub = [c for c in range(n) if le[a][c] and le[b][c]]
                least = [c for c in ub if all(le[c][d] for d in ub)]
                lb = [c for c in range(n) if le[c][a] and le[c][b]]
                greatest = [c for c in lb if all(le[d][c] for d in lb)]
                if len(least) != 1 or len(greatest) != 1:
                    return None
                join[a][b] = least[0]
                meet[a][b] = greatest[0]
        return (bottoms[0], tops[0], tuple(map(tuple, join)), tuple(map(tuple, meet)))

    # -- lattice structure -------------------------------------------------
    @property
    def is_lattice(self):
        return self._lattice is not None

    def _need_lattice(self):
        if self._lattice is None:
            raise CapabilityError(f"{self.name}: order is not a complete lattice")
        return self._lattice

    @property
    def bottom(self):
        return self._need_lattice()[0]

    @property
    def top(self):
        return self._need_lattice()[1]

    @cached_property
    def join_table(self):
        t = np.array(self._need_lattice()[2], dtype=np.int64)
        t.setflags(write=False)
        return t

    @cached_property
    def meet_table(self):
        t = np.array(self._need_lattice()[3], dtype=np.int64)
        t.setflags(write=False)
        return t

    def le(self, a, b):
        return self._le[a][b]

    def lt(self, a, b):
        return a != b and self._le[a][b]

    def join(self, a, b):
        return self._lattice[2][a][b]

    def meet(self, a, b):
        return self._lattice[3][a][b]

    def mul(self, a, b):
        return self._mul[a][b]

    def join_all(self, items):
        j = self._need_lattice()[2]
        return reduce(lambda a, b: j[a][b], items, self.bottom)

    def meet_all(self, items):
        m = self._need_lattice()[3]
        return reduce(lambda a, b: m[a][b], items, self.top)

    def elements(self):
        return range(self.size)

    # -- labels ----------------------------------------------------------------
    def index(self, e):
        """Index of ``e``; accepts a label or an index."""
        if isinstance(e, (int, np.integer)) and not isinstance(e, bool):
            if 0 <= e < self.size:
                return int(e)
            raise QuantaleStructureError(f"{self.name}: no element with index {e}")
        try:
            return self._index[str(e)]
        except KeyError:
            raise QuantaleStructureError(f"{self.name}: unknown element {e!r}") from None

    def label(self, i):
        return self.labels[i]

    @property
    def is_integral(self):
        return self.unit == self.top

    def __repr__(self):
        return f"Quantale({self.name}, {self.size} elements)"

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Quantale):
            return NotImplemented
        return (self.labels == other.labels and self._le == other._le
                and self._mul == other._mul and self.unit == other.unit)

    def __hash__(self):
        return hash((self.labels, self._le, self._mul, self.unit))

    @cached_property
    def way_below(self):
        """Boolean matrix of ``u ≪ v``.

        Uses ``u ≪ v  iff  not v <= ⋁{d | not u <= d}``: any ``D`` refuting
        ``u ≪ v`` lies inside that set, and the set itself refutes it.
        """
        n = self.size
        out = np.zeros((n, n), dtype=bool)
        for u in range(n):
            j = self.join_all(d for d in range(n) if not self._le[u][d])
            for v in range(n):
                out[u, v] = not self._le[v][j]
        out.setflags(write=False)
        return out


def check_quantale(q):
    """Scan every quantale law; return the violations (empty when lawful)."""
    n, le, mul = q.size, q._le, q._mul
    lab = q.label
    out = []
    for a in range(n):
        if not le[a][a]:
            out.append(Violation("order.reflexive", {"a": lab(a)}))
    for a, b in itertools.product(range(n), repeat=2):
        if a != b and le[a][b] and le[b][a]:
            if a < b:
                out.append(Violation("order.antisymmetric", {"a": lab(a), "b": lab(b)}))
    for a, b, c in itertools.product(range(n), repeat=3):
        if le[a][b] and le[b][c] and not le[a][c]:
            out.append(Violation("order.transitive", {"a": lab(a), "b": lab(b), "c": lab(c)}))
    if out:
        return out
    if not q.is_lattice:
        bottoms = [a for a in range(n) if all(le[a][b] for b in range(n))]
        tops = [a for a in range(n) if all(le[b][a] for b in range(n))]
        if not bottoms:
            out.append(Violation("lattice.bottom", {}))
        if not tops:
            out.append(Violation("lattice.top", {}))
        for a, b in itertools.combinations(range(n), 2):
            ub = [c for c in range(n) if le[a][c] and le[b][c]]
            if not [c for c in ub if all(le[c][d] for d in ub)]:
                out.append(Violation("lattice.join", {"a": lab(a), "b": lab(b)}))
            lb = [c for c in range(n) if le[c][a] and le[c][b]]
            if not [c for c in lb if all(le[d][c] for d in lb)]:
                out.append(Violation("lattice.meet", {"a": lab(a), "b": lab(b)}))
        return out
    bot, k = q.bottom, q.unit
    for a in range(n):
        if mul[a][k] != a or mul[k][a] != a:
            out.append(Violation("tensor.unit", {"a": lab(a), "a*k": lab(mul[a][k]),
                                                 "k*a": lab(mul[k][a])}))
        if mul[a][bot] != bot:
            out.append(Violation("tensor.bottom_right", {"a": lab(a)}))
        if mul[bot][a] != bot:
            out.append(Violation("tensor.bottom_left", {"a": lab(a)}))
    for a, b, c in itertools.product(range(n), repeat=3):
        w = {"a": lab(a), "b": lab(b), "c": lab(c)}
        if mul[mul[a][b]][c] != mul[a][mul[b][c]]:
            out.append(Violation("tensor.associative", w))
        bc = q.join(b, c)
        if mul[a][bc] != q.join(mul[a][b], mul[a][c]):
            out.append(Violation("tensor.join_right", w))
        if mul[bc][a] != q.join(mul[b][a], mul[c][a]):
            out.append(Violation("tensor.join_left", w))
    for a, b, c in itertools.product(range(n), repeat=3):
        if le[b][c] and not (le[mul[a][b]][mul[a][c]] and le[mul[b][a]][mul[c][a]]):
            out.append(Violation("tensor.monotone", {"a": lab(a), "b": lab(b), "c": lab(c)}))
    return out


def totally_below(q, u, v):
    """``u ≪ v``: every ``D`` with ``v <= ⋁D`` has some ``d >= u``."""
    return bool(q.way_below[q.index(u), q.index(v)])


def is_ccd(q):
    """Whether every element is the join of the elements totally below it."""
    wb = q.way_below
    return all(q.join_all(u for u in range(q.size) if wb[u, v]) == v for v in range(q.size))


def is_coprime(q, p):
    if p == q.bottom:
        return False
    return all(q.le(p, a) or q.le(p, b)
               for a in range(q.size) for b in range(q.size) if q.le(p, q.join(a, b)))


def coprimes(q):
    """The coprime elements of ``q``; bottom is never coprime."""
    return frozenset(p for p in range(q.size) if is_coprime(q, p))


def check_coprime_decomposition(q):
    """Each element must be the join of the coprimes below it."""
    cps = coprimes(q)
    out = []
    for v in range(q.size):
        j = q.join_all(p for p in cps if q.le(p, v))
        if j != v:
            out.append(Violation("coprime.decomposition", {"v": q.label(v), "join": q.label(j)}))
    return out


@dataclass(frozen=True)
class MonotoneMap:
    """A map between quantales given by its table of target indices."""

    source: Quantale
    target: Quantale
    table: tuple
    name: str = "map"

    def __post_init__(self):
        table = tuple(int(x) for x in self.table)
        if len(table) != self.source.size:
            raise QuantaleStructureError(f"{self.name}: table must cover all source elements")
        if any(not 0 <= x < self.target.size for x in table):
            raise QuantaleStructureError(f"{self.name}: table refers to unknown target elements")
        object.__setattr__(self, "table", table)

    @classmethod
    def from_function(cls, source, target, fn, name="map"):
        return cls(source, target, tuple(fn(v) for v in range(source.size)), name)

    @classmethod
    def from_labels(cls, source, target, mapping, name="map"):
        missing = [lab for lab in source.labels if lab not in mapping]
        if missing:
            raise QuantaleStructureError(f"{name}: no image given for {missing[0]!r}")
        return cls(source, target, tuple(target.index(mapping[lab]) for lab in source.labels), name)

    def __call__(self, v):
        return self.table[v]

    def to_labels(self):
        return {self.source.label(v): self.target.label(w) for v, w in enumerate(self.table)}

    def monotonicity_violations(self):
        s, t = self.source, self.target
        return [Violation("map.monotone", {"u": s.label(a), "v": s.label(b)})
                for a in range(s.size) for b in range(s.size)
                if s.le(a, b) and not t.le(self.table[a], self.table[b])]

    def is_monotone(self):
        return not self.monotonicity_violations()

    def compose(self, other):
        """``self ∘ other``."""
        if other.target != self.source:
            raise CapabilityError("maps are not composable")
        return MonotoneMap(other.source, self.target,
                           tuple(self.table[x] for x in other.table),
                           f"{self.name}.{other.name}")

    def preserves_joins(self):
        s, t = self.source, self.target
        if self.table[s.bottom] != t.bottom:
            return False
        return all(self.table[s.join(a, b)] == t.join(self.table[a], self.table[b])
                   for a in range(s.size) for b in range(s.size))

    def preserves_meets(self):
        s, t = self.source, self.target
        if self.table[s.top] != t.top:
            return False
        return all(self.table[s.meet(a, b)] == t.meet(self.table[a], self.table[b])
                   for a in range(s.size) for b in range(s.size))


def is_adjoint_pair(left, right):
    """``left ⊣ right``: ``left(v) <= w  iff  v <= right(w)`` for all v, w."""
    v_q, w_q = left.source, left.target
    return all(w_q.le(left(v), w) == v_q.le(v, right(w))
               for v in range(v_q.size) for w in range(w_q.size))


def adjoints(f):
    """Left and right Galois adjoints of ``f`` (``None`` where none exists).

    The right adjoint is ``w ↦ ⋁{v | f(v) <= w}`` and exists exactly when
    ``f`` preserves joins; the left adjoint ``w ↦ ⋀{v | w <= f(v)}`` exists
    exactly when ``f`` preserves meets. Both are confirmed exhaustively.
    """
    viol = f.monotonicity_violations()
    if viol:
        raise NotMonotoneError(f"{f.name} is not monotone ({viol[0]})")
    s, t = f.source, f.target
    right = left = None
    if f.preserves_joins():
        g = MonotoneMap.from_function(
            t, s, lambda w: s.join_all(v for v in range(s.size) if t.le(f(v), w)),
            f"{f.name}.right")
        if not is_adjoint_pair(f, g):
            raise AssertionError("computed right adjoint fails the Galois condition")
        right = g
    if f.preserves_meets():
        h = MonotoneMap.from_function(
            t, s, lambda w: s.meet_all(v for v in range(s.size) if t.le(w, f(v))),
            f"{f.name}.left")
        if not is_adjoint_pair(h, f):
            raise AssertionError("computed left adjoint fails the Galois condition")
        left = h
    return left, right


@dataclass(frozen=True)
class QuantaleHomClass:
    is_lax_hom: bool
    is_hom: bool
    preserves_meets: bool
    preserves_joins: bool


def classify_hom(f):
    """Classify ``f`` by brute force.

    A lax homomorphism is monotone with ``l <= f(k)`` (``l`` the target unit)
    and ``f(u) ⊗ f(v) <= f(u ⊗ v)``. A homomorphism preserves all joins,
    the tensor and the unit.
    """
    if not f.is_monotone():
        raise NotMonotoneError(f"{f.name} is not monotone")
    s, t = f.source, f.target
    pairs = list(itertools.product(range(s.size), repeat=2))
    lax = t.le(t.unit, f(s.unit)) and all(
        t.le(t.mul(f(a), f(b)), f(s.mul(a, b))) for a, b in pairs)
    joins = f.preserves_joins()
    strict = (joins and f(s.unit) == t.unit
              and all(t.mul(f(a), f(b)) == f(s.mul(a, b)) for a, b in pairs))
    return QuantaleHomClass(is_lax_hom=lax, is_hom=strict,
                            preserves_meets=f.preserves_meets(), preserves_joins=joins)


def identity_map(q):
    return MonotoneMap(q, q, tuple(range(q.size)), "identity")


def constant_map(source, target, value, name=None):
    value = target.index(value)
    return MonotoneMap(source, target, (value,) * source.size,
                       name or f"const_{target.label(value)}")
