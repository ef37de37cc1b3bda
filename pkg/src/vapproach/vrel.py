"""V-valued maps and relations, the V-powerset monad and lax distributive laws.

Carriers (``FiniteSet``) hold arbitrary hashable items, so the same code
runs on a point set X, on PX, on V^X and on ultrafilters over any of them.
Quantale elements are indices into ``q.labels`` throughout.
"""
from __future__ import annotations

import itertools
import random
import string
from dataclasses import dataclass

import numpy as np

from .lattice import Quantale
from .report import Budget, CapabilityError, LawReport

# Enumerate all members of a principal ultrafilter when there are at most
# this many; otherwise fall back to a generating filter base.
MEMBER_LIMIT = 512


class FiniteSet:
    """An ordered finite carrier of hashable items."""

    def __init__(self, items):
        self.items = tuple(items)
        self.pos = {x: i for i, x in enumerate(self.items)}
        if len(self.pos) != len(self.items):
            raise ValueError("carrier items must be distinct")
        self._hash = hash(self.items)

    @classmethod
    def points(cls, n):
        """``n`` points labelled a, b, c, ... (x0, x1, ... beyond 26)."""
        if n <= 26:
            return cls(string.ascii_lowercase[:n])
        return cls(f"x{i}" for i in range(n))

    @property
    def size(self):
        return len(self.items)

    @property
    def labels(self):
        return tuple(render(x) for x in self.items)

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __contains__(self, x):
        return x in self.pos

    def __eq__(self, other):
        return self is other or (isinstance(other, FiniteSet) and self.items == other.items)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"FiniteSet({list(self.labels)})"

    def index(self, x):
        return self.pos[x]

    def subsets(self):
        """All subsets as frozensets, in bitmask order."""
        return [frozenset(x for i, x in enumerate(self.items) if bits >> i & 1)
                for bits in range(1 << len(self.items))]


def powerset(carrier):
    return FiniteSet(carrier.subsets())


def function_space(carrier, q):
    """V^X as a carrier of ``VMap`` values, in lexicographic order."""
    return FiniteSet(VMap(carrier, vals) for vals in itertools.product(range(q.size),
                                                                        repeat=len(carrier)))


class VMap:
    """An element of V^X: a total map from a carrier to quantale indices."""

    __slots__ = ("dom", "vals", "_hash")

    def __init__(self, dom, vals):
        self.dom = dom
        self.vals = tuple(int(v) for v in vals)
        if len(self.vals) != len(dom):
            raise ValueError("VMap must be total on its carrier")
        self._hash = hash(self.vals)

    def __call__(self, x):
        return self.vals[self.dom.pos[x]]

    def items(self):
        return zip(self.dom.items, self.vals)

    def __eq__(self, other):
        return (isinstance(other, VMap) and self.vals == other.vals
                and (self.dom is other.dom or self.dom == other.dom))

    def __hash__(self):
        return self._hash

    def __le__(self, other):
        raise TypeError("compare VMaps with leq_maps(q, ...)")

    def __repr__(self):
        return f"VMap({list(self.vals)})"


def leq_maps(q, f, g):
    return all(q.le(a, b) for a, b in zip(f.vals, g.vals))


@dataclass(frozen=True)
class VFunction:
    """A labelled V-valued function on a ``FiniteSet``."""

    domain: FiniteSet
    quantale: Quantale
    values: tuple

    def __post_init__(self):
        if len(self.values) != len(self.domain):
            raise ValueError("VFunction must be total on its domain")

    def __call__(self, x):
        return self.values[self.domain.pos[x]]

    def as_map(self):
        return VMap(self.domain, self.values)

    def to_labels(self):
        return {render(x): self.quantale.label(v) for x, v in zip(self.domain, self.values)}


class VRelation:
    """A V-relation r: X ↛ Y stored as an index matrix ``m[x, y]``."""

    def __init__(self, source, target, quantale, matrix):
        self.source, self.target, self.quantale = source, target, quantale
        m = np.asarray(matrix, dtype=np.int64).reshape(len(source), len(target))
        if m.size and (m.min() < 0 or m.max() >= quantale.size):
            raise ValueError("relation entries must be quantale elements")
        m.setflags(write=False)
        self.matrix = m

    def __call__(self, x, y):
        return int(self.matrix[self.source.pos[x], self.target.pos[y]])

    def __eq__(self, other):
        return (isinstance(other, VRelation) and self.source == other.source
                and self.target == other.target and self.quantale == other.quantale
                and np.array_equal(self.matrix, other.matrix))

    def __hash__(self):
        return hash((self.source, self.target, self.matrix.tobytes()))

    def __repr__(self):
        return f"VRelation({self.source.labels} -> {self.target.labels})"

    def forward(self, x):
        """The map x ↦ r(x, -) in V^Y."""
        return VMap(self.target, self.matrix[self.source.pos[x]])

    def converse(self):
        return VRelation(self.target, self.source, self.quantale, self.matrix.T)

    def to_labels(self):
        q = self.quantale
        return [[render(x), render(y), q.label(int(self.matrix[i, j]))]
                for i, x in enumerate(self.source) for j, y in enumerate(self.target)]


def _join_reduce(q, arr, axis):
    """Fold the join table along ``axis`` of an index array."""
    jt = q.join_table
    arr = np.moveaxis(arr, axis, 0)
    out = np.full(arr.shape[1:], q.bottom, dtype=np.int64)
    for layer in arr:
        out = jt[out, layer]
    return out


def rel_compose(s, r):
    """``(s∘r)(x,z) = ⋁_y s(y,z) ⊗ r(x,y)``."""
    if r.target != s.source:
        raise CapabilityError("relations are not composable: carrier mismatch")
    if r.quantale != s.quantale:
        raise CapabilityError("relations are not composable: quantale mismatch")
    q = r.quantale
    prod = q.tensor_table[s.matrix[None, :, :], r.matrix[:, :, None]]
    return VRelation(r.source, s.target, q, _join_reduce(q, prod, 1))


def graph(f, source, target, q):
    """The graph f∘ of a map f: k on (x, f(x)), ⊥ elsewhere."""
    m = np.full((len(source), len(target)), q.bottom, dtype=np.int64)
    for i, x in enumerate(source):
        m[i, target.pos[f(x)]] = q.unit
    return VRelation(source, target, q, m)


def identity_relation(carrier, q):
    return graph(lambda x: x, carrier, carrier, q)


# -- the V-powerset monad ------------------------------------------------------

class PVMonad:
    """P_V over a fixed quantale: f_!, y_X and s_X."""

    def __init__(self, q):
        self.q = q

    def shriek(self, f, sigma, target):
        """``f_!(σ)(y) = ⋁{σ(x) | f(x) = y}``."""
        q = self.q
        out = [q.bottom] * len(target)
        for x, v in sigma.items():
            i = target.pos[f(x)]
            out[i] = q.join(out[i], v)
        return VMap(target, out)

    def yoneda(self, x, carrier):
        q = self.q
        return VMap(carrier, [q.unit if y == x else q.bottom for y in carrier])

    def mult(self, big_sigma, carrier):
        """``s_X(Σ)(x) = ⋁_σ Σ(σ) ⊗ σ(x)``.

        ``Σ`` is a VMap over V^X or a sparse mapping σ ↦ value (absent = ⊥).
        """
        q = self.q
        pairs = big_sigma.items()
        out = [q.bottom] * len(carrier)
        for sigma, w in pairs:
            if w == q.bottom:
                continue
            for i, v in enumerate(sigma.vals):
                out[i] = q.join(out[i], q.mul(w, v))
        return VMap(carrier, out)


def pv_components(q):
    return PVMonad(q)


# -- ultrafilters ----------------------------------------------------------------

class Ultrafilter:
    """A principal ultrafilter ẋ on ``universe``.

    Membership is the literal test ``A ∈ ẋ  iff  x ∈ A``. ``universe`` may be
    None for carriers too large to enumerate; such filters still answer
    membership but only expose their generating base {{x}}.
    """

    __slots__ = ("gen", "universe", "_hash")

    def __init__(self, gen, universe=None):
        if universe is not None and gen not in universe:
            raise CapabilityError("ultrafilter generator is not in its universe")
        self.gen = gen
        self.universe = universe
        self._hash = hash(("U", gen))

    def contains(self, subset):
        return self.gen in subset

    __contains__ = contains

    def members(self, limit=MEMBER_LIMIT):
        """Sets to quantify over in meet-over-filter formulas.

        All members when there are at most ``limit`` of them, otherwise the
        base {{x}} together with the universe. Formulas of the shape
        ⋀_{A ∈ 𝔵} F(A) with F monotone take the same value on both, since
        every member contains {x}.
        """
        u = self.universe
        if u is not None and (1 << max(len(u) - 1, 0)) <= limit:
            rest = [y for y in u.items if y != self.gen]
            for bits in range(1 << len(rest)):
                yield frozenset([self.gen] + [y for i, y in enumerate(rest) if bits >> i & 1])
        else:
            yield frozenset([self.gen])
            if u is not None:
                yield frozenset(u.items)

    def __eq__(self, other):
        return isinstance(other, Ultrafilter) and self.gen == other.gen

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"U({render(self.gen)})"


def ultrafilters(carrier):
    """UX: on a finite carrier, exactly the principal ultrafilters."""
    return FiniteSet(Ultrafilter(x, carrier) for x in carrier)


def principal_generator(members_test, universe):
    """Recover the generator of an ultrafilter given only its membership test."""
    found = [y for y in universe if members_test(frozenset([y]))]
    if len(found) != 1:
        raise CapabilityError("membership test does not describe a principal ultrafilter")
    return found[0]


class PowersetMonad:
    name = "powerset"

    def carrier(self, x):
        return powerset(x)

    def fmap(self, f, t, target=None):
        return frozenset(f(x) for x in t)

    def unit(self, x, carrier=None):
        return frozenset([x])

    def mult(self, tt, carrier=None):
        return frozenset().union(*tt)


class UltrafilterMonad:
    name = "ultrafilter"

    def carrier(self, x):
        return ultrafilters(x)

    def fmap(self, f, u, target=None):
        """f[𝔵] = {B | f⁻¹B ∈ 𝔵}; the generator is found through that test."""
        if target is None:
            return Ultrafilter(f(u.gen))

        def member(b):
            return u.contains(_Preimage(f, b))

        return Ultrafilter(principal_generator(member, target), target)

    def unit(self, x, carrier=None):
        return Ultrafilter(x, carrier)

    def mult(self, big, carrier=None):
        """Σ𝔛: A ∈ Σ𝔛 iff {𝔵 ∈ UX | A ∈ 𝔵} ∈ 𝔛."""
        ux = big.universe
        if ux is None:
            return big.gen
        inner = carrier if carrier is not None else big.gen.universe

        def member(a):
            return big.contains(frozenset(v for v in ux if v.contains(a)))

        return Ultrafilter(principal_generator(member, inner), inner)


class _Preimage:
    """Lazy f⁻¹(B), usable as the argument of a membership test."""

    __slots__ = ("f", "b")

    def __init__(self, f, b):
        self.f, self.b = f, b

    def __contains__(self, x):
        return self.f(x) in self.b


# -- lax distributive laws -------------------------------------------------------

class LaxLaw:
    """A family λ_X: T(V^X) → V^{TX}, evaluated pointwise as ``law(t, u)``.

    ``t`` is an element of T(V^X) (a frozenset or ultrafilter of VMaps) and
    ``u`` an element of TX.
    """

    def __init__(self, name, monad, q, fn):
        self.name, self.monad, self.q, self._fn = name, monad, q, fn

    def __call__(self, t, u):
        return self._fn(self.q, t, u)

    def table(self, t, tx):
        """λ_X(t) as a VMap over the carrier ``tx`` = TX."""
        return VMap(tx, [self._fn(self.q, t, u) for u in tx])

    def __repr__(self):
        return f"LaxLaw({self.name} over {self.q.name})"


def _alpha(q, s, a):
    return q.meet_all(q.join_all(sigma(x) for sigma in s) for x in a)


def _alpha_corrupted(q, s, a):
    return q.join_all(q.join_all(sigma(x) for sigma in s) for x in a)


def _beta(q, s, u):
    return q.meet_all(q.join_all(sigma(x) for sigma in big for x in small)
                      for big in s.members() for small in u.members())


def _beta_shortcut(q, s, u):
    return s.gen(u.gen)


def alpha(q):
    """α_X(S)(A) = ⋀_{x∈A} ⋁_{σ∈S} σ(x)."""
    return LaxLaw("alpha", PowersetMonad(), q, _alpha)


def beta(q, shortcut=False):
    """β_X(𝔰)(𝔵) = ⋀_{S∈𝔰, A∈𝔵} ⋁_{σ∈S, x∈A} σ(x), over filter members.

    ``shortcut=True`` evaluates σ(x) at the generators directly; it is a
    fast path that must agree with the literal formula.
    """
    return LaxLaw("beta_shortcut" if shortcut else "beta", UltrafilterMonad(), q,
                  _beta_shortcut if shortcut else _beta)


def corrupted_alpha(q):
    """α with its outer meet replaced by a join; not a lax law."""
    return LaxLaw("alpha_corrupted", PowersetMonad(), q, _alpha_corrupted)


# -- checking (a)-(f) ------------------------------------------------------------

def _maps(x, y):
    for image in itertools.product(y.items, repeat=len(x)):
        table = dict(zip(x.items, image))
        yield table.__getitem__, table


def _space_or_sample(size, budget, rng, enumerate_all, draw):
    """All inputs when ``size`` fits the budget, else seeded draws."""
    if size <= budget.max_candidates:
        return list(enumerate_all()), True
    return [draw(rng) for _ in range(budget.samples)], False


def _random_map(rng, q, dom):
    return VMap(dom, [rng.randrange(q.size) for _ in dom])


def _t_elements(law, carrier, rng, budget, draw_item, size_hint):
    """Elements of T(carrier); ``carrier`` may be None when too large."""
    if isinstance(law.monad, PowersetMonad):
        if carrier is not None and size_hint <= 12 and (1 << size_hint) <= budget.max_candidates:
            return carrier.subsets(), True

        def draw(r):
            return frozenset(draw_item(r) for _ in range(r.randrange(4)))

        return [draw(rng) for _ in range(budget.samples)], False
    if carrier is not None and size_hint <= budget.max_candidates:
        return [Ultrafilter(x, carrier) for x in carrier], True
    return [Ultrafilter(draw_item(rng), carrier) for _ in range(budget.samples)], False


def check_lax_law(law, budget=None, sizes=(0, 1, 2)):
    """Check conditions (a)-(f) for ``law`` on carriers of the given sizes.

    Inputs ranging over first-order spaces (maps, TX, T(V^X)) are enumerated
    when they fit ``budget.max_candidates``; higher-order inputs (T(V^{V^X}),
    TT(V^X), pairs g <= h) are drawn with ``budget.seed``, ``budget.samples``
    per condition and carrier.
    """
    budget = budget or Budget()
    q, mon = law.q, law.monad
    pv = PVMonad(q)
    rng = random.Random(budget.seed)
    rep = LawReport()
    le = q.le

    def fail(cond, **w):
        rep.fail(cond, {k: render(v, q) for k, v in w.items()})

    for n in sizes:
        x = FiniteSet.points(n)
        tx = mon.carrier(x)
        vx = function_space(x, q)
        t_vx, ex = _t_elements(law, vx, rng, budget, lambda r: _random_map(r, q, x), len(vx))

        # (a) lax naturality, over all maps f: X -> Y
        for m in sizes:
            y = FiniteSet.points(m)
            ty, vy = mon.carrier(y), function_space(y, q)
            for f, ftab in _maps(x, y):
                def f_shriek(sigma, f=f):
                    return pv.shriek(f, sigma, y)
                tf = {u: mon.fmap(f, u, y) for u in tx}
                for t in t_vx:
                    lam = law.table(t, tx)
                    rhs_t = mon.fmap(f_shriek, t, vy)
                    for w in ty:
                        lhs = q.join_all(lam(u) for u in tx if tf[u] == w)
                        rhs = law(rhs_t, w)
                        if not le(lhs, rhs):
                            fail("a", f=ftab, t=t, w=w, lhs=lhs, rhs=rhs)
                    rep.add("a", len(ty), ex)

        # (b) lax P_V-unit law
        for u in tx:
            tyx = mon.fmap(lambda p: pv.yoneda(p, x), u, vx)
            for v in tx:
                lhs = q.unit if v == u else q.bottom
                rhs = law(tyx, v)
                if not le(lhs, rhs):
                    fail("b", u=u, v=v, lhs=lhs, rhs=rhs)
            rep.add("b", len(tx))

        # (d) lax T-unit law
        for sigma in vx:
            t = mon.unit(sigma, vx)
            for u in tx:
                lhs = q.join_all(sigma(p) for p in x if mon.unit(p, x) == u)
                rhs = law(t, u)
                if not le(lhs, rhs):
                    fail("d", sigma=sigma, u=u, lhs=lhs, rhs=rhs)
            rep.add("d", len(tx))

        # (c) lax P_V-multiplication law; inputs in T(V^{V^X}) are sampled
        lam_tables = {t: law.table(t, tx) for t in _all_t(law, vx, budget)}
        samples = _sample_tvvx(law, vx, rng, budget)
        for big in samples:
            pushed = {}
            for t, tau in lam_tables.items():
                phi = law(big, t)
                if phi != q.bottom:
                    pushed[tau] = q.join(pushed.get(tau, q.bottom), phi)
            lhs_map = pv.mult(pushed, tx)
            ts = mon.fmap(lambda bs: pv.mult(bs, x), big, vx)
            for u in tx:
                lhs, rhs = lhs_map(u), law(ts, u)
                if not le(lhs, rhs):
                    fail("c", input=big, u=u, lhs=lhs, rhs=rhs)
            rep.add("c", len(tx), False)

        # (e) lax T-multiplication law
        ttx = mon.carrier(tx)
        v_tx = function_space(tx, q) if q.size ** len(tx) <= 4096 else None
        m_of = {w: mon.mult(w, x) for w in ttx}
        for big, exhaustive in _tt_elements(law, vx, rng, budget, t_vx):
            lifted = mon.fmap(lambda t: law.table(t, tx), big, v_tx)
            flat = mon.mult(big, vx)
            for u in tx:
                lhs = q.join_all(law(lifted, w) for w in ttx if m_of[w] == u)
                rhs = law(flat, u)
                if not le(lhs, rhs):
                    fail("e", input=big, u=u, lhs=lhs, rhs=rhs)
            rep.add("e", len(tx), exhaustive)

        # (f) monotonicity, for g <= h: Z -> V^X
        for k in sizes:
            z = FiniteSet.points(k)
            tz = mon.carrier(z)
            pairs, exf = _monotone_pairs(q, z, vx, rng, budget)
            for g, h in pairs:
                for c in tz:
                    tg, th = mon.fmap(g.get, c, vx), mon.fmap(h.get, c, vx)
                    for u in tx:
                        lhs, rhs = law(tg, u), law(th, u)
                        if not le(lhs, rhs):
                            fail("f", g=g, h=h, input=c, u=u, lhs=lhs, rhs=rhs)
                rep.add("f", len(tz) * len(tx), exf)
    return rep


def _all_t(law, vx, budget):
    if isinstance(law.monad, PowersetMonad):
        if len(vx) > 12:
            raise CapabilityError("P(V^X) too large to enumerate for condition (c)")
        return vx.subsets()
    return [Ultrafilter(s, vx) for s in vx]


def _sample_tvvx(law, vx, rng, budget):
    q = law.q

    def big_sigma(r):
        return VMap(vx, [r.randrange(q.size) for _ in vx])

    if isinstance(law.monad, PowersetMonad):
        return [frozenset(big_sigma(rng) for _ in range(rng.randrange(4)))
                for _ in range(budget.samples)]
    return [Ultrafilter(big_sigma(rng)) for _ in range(budget.samples)]


def _tt_elements(law, vx, rng, budget, t_vx):
    if isinstance(law.monad, PowersetMonad):
        for _ in range(budget.samples):
            k = rng.randrange(4)
            yield frozenset(rng.choice(t_vx) for _ in range(k)), False
        return
    uvx = FiniteSet(Ultrafilter(s, vx) for s in vx)
    if len(uvx) <= budget.max_candidates:
        for t in uvx:
            yield Ultrafilter(t, uvx), True
    else:
        for _ in range(budget.samples):
            yield Ultrafilter(rng.choice(uvx.items), uvx), False


def _monotone_pairs(q, z, vx, rng, budget):
    """Pairs g <= h of maps Z -> V^X, as dicts."""
    items = vx.items
    total = len(items) ** len(z)
    if total * total <= budget.max_candidates:
        maps = [dict(zip(z.items, img)) for img in itertools.product(items, repeat=len(z))]
        return [(g, h) for g in maps for h in maps
                if all(leq_maps(q, g[p], h[p]) for p in z)], True
    out = []
    for _ in range(budget.samples):
        g, h = {}, {}
        for p in z:
            lo = rng.choice(items)
            ups = [s for s in items if leq_maps(q, lo, s)]
            g[p], h[p] = lo, rng.choice(ups)
        out.append((g, h))
    return out, False


# -- lax extensions --------------------------------------------------------------

def lax_extension(law, r):
    """T̂r: TX ↛ TY from the law, T̂r(t, w) = λ_Y(T r⃗ (t))(w).

    r⃗ sends x to r(x, -) in V^Y.
    """
    mon, q = law.monad, law.q
    tx, ty = mon.carrier(r.source), mon.carrier(r.target)
    vy = function_space(r.target, q) if q.size ** len(r.target) <= 4096 else None
    m = np.empty((len(tx), len(ty)), dtype=np.int64)
    for i, t in enumerate(tx):
        lifted = mon.fmap(r.forward, t, vy)
        for j, w in enumerate(ty):
            m[i, j] = law(lifted, w)
    return VRelation(tx, ty, q, m)


def evaluation_relation(carrier, q):
    """ε_X: V^X ↛ X, ε(σ, x) = σ(x)."""
    vx = function_space(carrier, q)
    return VRelation(vx, carrier, q, [s.vals for s in vx])


def law_from_extension(extension, monad, q, name="from_extension", carrier=None):
    """λ_X(t)(u) = T̂ε_X(t, u); ``extension(r)`` must return T̂r.

    X is read off ``t``; ``carrier`` supplies it when ``t`` is empty.
    """
    cache = {}

    def fn(q_, t, u):
        dom = _carrier_of(t, carrier)
        if dom not in cache:
            cache[dom] = extension(evaluation_relation(dom, q))
        return cache[dom](t, u)

    return LaxLaw(name, monad, q, fn)


def _carrier_of(t, default=None):
    if isinstance(t, Ultrafilter):
        return t.gen.dom
    for sigma in t:
        return sigma.dom
    if default is not None:
        return default
    raise CapabilityError("cannot infer the carrier of an empty set of V-maps")


def powerset_extension(r):
    """P̂r(A, B) = ⋀_{y∈B} ⋁_{x∈A} r(x, y)."""
    q = r.quantale
    px, py = powerset(r.source), powerset(r.target)
    m = [[q.meet_all(q.join_all(r(x, y) for x in a) for y in b) for b in py] for a in px]
    return VRelation(px, py, q, m)


def ultrafilter_extension(r):
    """Ūr(𝔵, 𝔶) = ⋀_{A∈𝔵, B∈𝔶} ⋁_{x∈A, y∈B} r(x, y)."""
    q = r.quantale
    ux, uy = ultrafilters(r.source), ultrafilters(r.target)
    m = [[q.meet_all(q.join_all(r(x, y) for x in a for y in b)
                     for a in u.members() for b in w.members()) for w in uy] for u in ux]
    return VRelation(ux, uy, q, m)


# -- rendering -------------------------------------------------------------------

def render(obj, q=None):
    """JSON-friendly labels for witnesses: never bare indices for elements."""
    if isinstance(obj, str):
        return obj
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, (int, np.integer)):
        return q.label(int(obj)) if q is not None else int(obj)
    if isinstance(obj, frozenset):
        parts = [render(x, q) for x in obj]
        return sorted(parts, key=_sort_key)
    if isinstance(obj, Ultrafilter):
        return {"principal": render(obj.gen, q)}
    if isinstance(obj, VMap):
        return {_key(render(x)): (q.label(v) if q is not None else v) for x, v in obj.items()}
    if isinstance(obj, dict):
        return {_key(render(k)): render(v, q) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [render(x, q) for x in obj]
    return str(obj)


def _key(x):
    if isinstance(x, str):
        return x
    import json
    return json.dumps(x, sort_keys=True, ensure_ascii=False)


def _sort_key(x):
    import json
    return x if isinstance(x, str) else json.dumps(x, sort_keys=True, ensure_ascii=False)
