"""Ultrafilter convergence structures and the functors A_ε and R.

On a finite carrier every ultrafilter is principal, so ℓ: UX → V^X is an
|X| × |X| table with ``ell[i, j] = ℓ(ẋ_i)(x_j)``. The checkers below still
quantify over ultrafilter members and use the monad operations literally.
"""
from __future__ import annotations

import itertools
import random

import numpy as np

from .lattice import is_ccd
from .report import Budget, BudgetExceeded, CapabilityError, LawReport
from .spaces import (DistanceStructure, _biased, category_completion, check_probapp,
                     enumerate_structures, is_approach, subset_labels)
from .vrel import (FiniteSet, UltrafilterMonad, VRelation, graph, powerset,
                   powerset_extension, rel_compose, render, ultrafilter_extension,
                   ultrafilters)


class ConvergenceStructure:
    """A table ℓ: UX → V^X over principal ultrafilters (no axioms assumed)."""

    def __init__(self, carrier, quantale, ell):
        n = len(carrier)
        e = np.array(ell, dtype=np.int64).reshape(n, n)
        if e.size and (e.min() < 0 or e.max() >= quantale.size):
            raise ValueError("table entries must be quantale elements")
        e.setflags(write=False)
        self.carrier, self.quantale, self.ell = carrier, quantale, e

    @property
    def n(self):
        return len(self.carrier)

    def __call__(self, u, y):
        """ℓ(𝔵)(y) for an ultrafilter (or its generator label) and a point."""
        g = u.gen if hasattr(u, "gen") else u
        return int(self.ell[self.carrier.pos[g], self.carrier.pos[y]])

    def __eq__(self, other):
        return (isinstance(other, ConvergenceStructure) and self.carrier == other.carrier
                and self.quantale == other.quantale and np.array_equal(self.ell, other.ell))

    def __hash__(self):
        return hash((self.carrier, self.ell.tobytes()))

    def key(self):
        return self.ell.tobytes()

    def relation(self):
        """a: UX ↛ X with a(𝔵, y) = ℓ(𝔵)(y)."""
        return VRelation(ultrafilters(self.carrier), self.carrier, self.quantale, self.ell)

    def to_labels(self):
        q, X = self.quantale, self.carrier
        return [[x, y, q.label(int(self.ell[i, j]))]
                for i, x in enumerate(X) for j, y in enumerate(X)]

    @classmethod
    def discrete(cls, carrier, q, inside=None):
        v = q.unit if inside is None else inside
        n = len(carrier)
        return cls(carrier, q, [[v if i == j else q.bottom for j in range(n)] for i in range(n)])


class UltrafilterOps:
    """U on a fixed finite carrier: Uf, the unit ẋ and the multiplication Σ."""

    def __init__(self, carrier):
        self.carrier = carrier
        self.ux = ultrafilters(carrier)
        self.uux = ultrafilters(self.ux)
        self._m = UltrafilterMonad()

    def dot(self, x):
        return self._m.unit(x, self.carrier)

    def image(self, f, u, target):
        """f[𝔵]: B ∈ f[𝔵] iff f⁻¹B ∈ 𝔵."""
        return self._m.fmap(f, u, target)

    def sigma(self, big):
        return self._m.mult(big, self.carrier)


def ultrafilter_monad(carrier):
    return UltrafilterOps(carrier)


def check_beta_algebra(s, cap=20):
    """(R'') k <= ℓ(ẋ)(x); (T'') Ūa(𝔛, 𝔶) ⊗ ℓ(𝔶)(z) <= ℓ(Σ𝔛)(z)."""
    q, X = s.quantale, s.carrier
    ops = UltrafilterOps(X)
    rep = LawReport()
    for x in X:
        v = s(ops.dot(x), x)
        if not q.le(q.unit, v):
            rep.fail("R''", {"x": x, "value": q.label(v)}, cap)
    rep.add("R''", len(X))
    ubar = ultrafilter_extension(s.relation())
    for big in ops.uux:
        target = ops.sigma(big)
        for u in ops.ux:
            left = ubar(big, u)
            for z in X:
                lhs = q.mul(left, s(u, z))
                rhs = s(target, z)
                if not q.le(lhs, rhs):
                    rep.fail("T''", {"X": render(big), "y": render(u), "z": z,
                                     "lhs": q.label(lhs), "rhs": q.label(rhs)}, cap)
    rep.add("T''", len(ops.uux) * len(ops.ux) * len(X))
    return rep


def beta_algebra_ok(q, ell):
    """Fast path for principal carriers: reflexive and transitive ℓ."""
    ell = np.asarray(ell)
    n = ell.shape[0]
    if any(not q.le(q.unit, int(ell[i, i])) for i in range(n)):
        return False
    prod = q.tensor_table[ell[:, :, None], ell[None, :, :]]
    return bool(q.leq[prod, ell[:, None, :]].all())


def epsilon_relation(carrier, q):
    """ε_X: PX ↛ UX, k when A ∈ 𝔵 and ⊥ otherwise."""
    px, ux = powerset(carrier), ultrafilters(carrier)
    return VRelation(px, ux, q, [[q.unit if u.contains(a) else q.bottom for u in ux]
                                 for a in px])


def a_epsilon(s):
    """A_ε(X, ℓ) = (X, a∘ε_X), i.e. c_ℓ(A)(x) = ⋁_{𝔵 ∋ A} ℓ(𝔵)(x)."""
    comp = rel_compose(s.relation(), epsilon_relation(s.carrier, s.quantale))
    return DistanceStructure(s.carrier, s.quantale, comp.matrix)


def r_functor(d):
    """R(X, c) = (X, ℓ_c), ℓ_c(𝔵)(x) = ⋀_{A ∈ 𝔵} (cA)(x)."""
    q, X = d.quantale, d.carrier
    ux = ultrafilters(X)
    ell = [[q.meet_all(d(a, x) for a in u.members()) for x in X] for u in ux]
    return ConvergenceStructure(X, q, ell)


def check_m2(m_source, m_target, f):
    """(M''): ℓ(𝔵)(y) <= ℓ'(f[𝔵])(fy), with f an index tuple."""
    q, X, Y = m_source.quantale, m_source.carrier, m_target.carrier
    ops = UltrafilterOps(X)
    fx = {x: Y.items[f[i]] for i, x in enumerate(X)}
    for u in ops.ux:
        image = ops.image(fx.__getitem__, u, Y)
        for i, y in enumerate(X):
            lhs, rhs = m_source(u, y), m_target(image, fx[y])
            if not q.le(lhs, rhs):
                return False, {"x": render(u), "y": y, "lhs": q.label(lhs), "rhs": q.label(rhs)}
    return True, None


def enumerate_beta_algebras(carrier, q, bound=1 << 22, budget=None):
    """All lax (β,V)-algebras on a finite carrier (or a seeded sample)."""
    n = len(carrier)
    space = q.size ** (n * n)
    if space <= bound:
        above_k = [v for v in range(q.size) if q.le(q.unit, v)]
        choices = [above_k if i == j else range(q.size) for i in range(n) for j in range(n)]
        out = []
        for vals in itertools.product(*choices):
            ell = np.array(vals, dtype=np.int64).reshape(n, n)
            if beta_algebra_ok(q, ell):
                out.append(ConvergenceStructure(carrier, q, ell))
        return out, True
    if budget is None:
        raise BudgetExceeded(f"{space} candidate tables exceed the bound {bound}; pass a budget")
    rng = random.Random(budget.seed)
    seen, out = set(), []
    for _ in range(50 * budget.samples):
        if len(out) >= budget.samples:
            break
        a = [[_biased(rng, q) for _ in range(n)] for _ in range(n)]
        s = ConvergenceStructure(carrier, q, category_completion(q, a))
        if s.key() not in seen:
            seen.add(s.key())
            out.append(s)
    return out, False


def _image_masks(f, m):
    img = np.zeros(1 << m, dtype=np.int64)
    for a in range(1 << m):
        for i in range(m):
            if a >> i & 1:
                img[a] |= 1 << f[i]
    return img


def contractive_fast(q, source_table, target_table, f):
    """Vectorized (M') for a map given as an index tuple."""
    farr = np.array(f, dtype=np.int64)
    img = _image_masks(f, len(f))
    rhs = target_table[img[:, None], farr[None, :]]
    return bool(q.leq[source_table, rhs].all())


def m2_fast(q, source_ell, target_ell, f):
    """Principal form of (M''): ℓ(ẋ)(y) <= ℓ'(fx)˙(fy)."""
    farr = np.array(f, dtype=np.int64)
    return bool(q.leq[source_ell, target_ell[farr[:, None], farr[None, :]]].all())


def _hom_block(q, c_tabs, r_ells, a_tabs, b_ells, f, chunk=1 << 22):
    """(M') for A_ε(t) → s and (M'') for t → R(s), over all (s, t) at one map f.

    Returns two boolean matrices indexed [closure, beta]; they must agree.
    """
    farr = np.array(f, dtype=np.int64)
    img = _image_masks(f, len(f))
    rhs_c = c_tabs[:, img[:, None], farr[None, :]]
    rhs_r = r_ells[:, farr[:, None], farr[None, :]]
    nb = len(a_tabs)
    cells = max(1, a_tabs[0].size, b_ells[0].size)
    step = max(1, chunk // (nb * cells))
    left = np.empty((len(c_tabs), nb), dtype=bool)
    right = np.empty((len(c_tabs), nb), dtype=bool)
    for lo in range(0, len(c_tabs), step):
        sl = slice(lo, lo + step)
        left[sl] = q.leq[a_tabs[None], rhs_c[sl, None]].all(axis=(2, 3))
        right[sl] = q.leq[b_ells[None], rhs_r[sl, None]].all(axis=(2, 3))
    return left, right


def _structures(X, q, exhaustive, budget):
    b = Budget(samples=budget.samples, seed=budget.seed + len(X))
    bound = float("inf") if exhaustive else 0
    closures = enumerate_structures(X, q, "closure", bound=bound, budget=b)
    approaches = enumerate_structures(X, q, "approach", bound=bound, budget=b)
    betas, beta_ex = enumerate_beta_algebras(X, q, bound=bound, budget=b)
    return closures, approaches, betas, beta_ex


def verify_main_theorem(q, budget=None, sizes=(0, 1, 2), max_pairs=50_000_000, cap=20):
    """Desk-scale check that A_ε ⊣ R restricts to V-App ≅ (β,V)-Alg.

    Carriers of size up to ``budget.max_exhaustive_size`` are enumerated
    exhaustively; larger ones contribute ``budget.samples`` seeded structures
    of each kind. Checks: (i) for closure s on X, β-algebra t on Y and
    f: Y → X, f is contractive A_ε(t) → s iff (M'') holds for t → R(s);
    (ii) A_ε(R(s)) <= s for closure s, with equality iff s is approach;
    (iii) R(A_ε(t)) = t and A_ε(t) is approach for every β-algebra t.
    When a size pair has more than ``max_pairs`` triples, a seeded subset of
    the maps is checked against every structure pair.
    """
    if not is_ccd(q):
        raise CapabilityError(f"{q.name} is not ccd")
    budget = budget or Budget()
    rng = random.Random(budget.seed)
    rep = LawReport()
    counts, pools = {}, {}
    for n in sizes:
        X = FiniteSet.points(n)
        exhaustive = n <= budget.max_exhaustive_size
        closures, approaches, betas, beta_ex = _structures(X, q, exhaustive, budget)
        counts[n] = {"closure": closures.count, "approach": approaches.count,
                     "beta": len(betas), "exhaustive": exhaustive}
        if exhaustive and approaches.count != len(betas):
            rep.fail("counts", {"n": n, "approach": approaches.count, "beta": len(betas)}, cap)
        rep.add("counts", 1, exhaustive)
        r_of = []
        for s in closures:
            r = r_functor(s)
            r_of.append(r.ell)
            back = a_epsilon(r)
            appr = is_approach(s)[0]
            if not back.leq(s):
                rep.fail("counit", {"structure": s.to_labels()}, cap)
            if (back == s) != appr:
                rep.fail("A_eps.R=id iff approach", {"structure": s.to_labels(),
                                                      "approach": appr}, cap)
        rep.add("counit", closures.count, exhaustive)
        rep.add("A_eps.R=id iff approach", closures.count, exhaustive)
        for s in approaches:
            if a_epsilon(r_functor(s)) != s:
                rep.fail("A_eps.R=id", {"structure": s.to_labels()}, cap)
        rep.add("A_eps.R=id", approaches.count, exhaustive)
        a_of = []
        for t in betas:
            d = a_epsilon(t)
            a_of.append(d.table)
            if r_functor(d) != t:
                rep.fail("R.A_eps=id", {"structure": t.to_labels()}, cap)
            if not is_approach(d)[0]:
                rep.fail("A_eps lands in App", {"structure": t.to_labels()}, cap)
        rep.add("R.A_eps=id", len(betas), exhaustive)
        rep.add("A_eps lands in App", len(betas), exhaustive)
        pools[n] = (X, closures.structures, r_of, betas, a_of, exhaustive)
    # (i) hom-set bijection for f: Y -> X, all structure pairs at once per map
    for m in sizes:
        Y, _, _, betas, a_of, ex_t = pools[m]
        for n in sizes:
            X, closures, r_of, _, _, ex_s = pools[n]
            maps = list(itertools.product(range(n), repeat=m))
            total = len(closures) * len(betas) * len(maps)
            if not total:
                continue
            if total <= max_pairs:
                chosen, exhaustive = maps, ex_t and ex_s
            else:
                k = max(1, max_pairs // (len(closures) * len(betas)))
                chosen, exhaustive = rng.sample(maps, min(k, len(maps))), False
            c_tabs = np.stack([c.table for c in closures])
            r_ells = np.stack(r_of)
            a_tabs = np.stack(a_of)
            b_ells = np.stack([t.ell for t in betas])
            for f in chosen:
                left, right = _hom_block(q, c_tabs, r_ells, a_tabs, b_ells, f)
                for i, j in zip(*np.nonzero(left != right)):
                    rep.fail("hom-set", {"closure": closures[i].to_labels(),
                                         "beta": betas[j].to_labels(),
                                         "map": {y: X.items[k] for y, k in zip(Y, f)},
                                         "contractive": bool(left[i, j]),
                                         "M''": bool(right[i, j])}, cap)
            rep.add("hom-set", len(closures) * len(betas) * len(chosen), exhaustive)
    return rep, counts


def non_approach_witness(q, n=1):
    """The constant-⊤ closure structure, where A_ε(R(s)) is strictly smaller."""
    X = FiniteSet.points(n)
    s = DistanceStructure.constant(X, q, q.top)
    back = a_epsilon(r_functor(s))
    diff = [[subset_labels(X, m), x, q.label(int(s.table[m, i])), q.label(int(back.table[m, i]))]
            for m in range(1 << n) for i, x in enumerate(X)
            if s.table[m, i] != back.table[m, i]]
    return s, back, diff


def check_algebraic_morphism_epsilon(q, budget=None, sizes=(0, 1, 2), cap=20):
    """Conditions a-e for ε: (P, P̂) → (U, Ū), as inequalities of V-relations."""
    budget = budget or Budget()
    rng = random.Random(budget.seed)
    rep = LawReport()

    def leq_rel(lhs, rhs, law, extra):
        bad = ~q.leq[lhs.matrix, rhs.matrix]
        for i, j in zip(*np.nonzero(bad)):
            rep.fail(law, dict(extra, at=[render(lhs.source.items[i]),
                                          render(lhs.target.items[j])],
                               lhs=q.label(int(lhs.matrix[i, j])),
                               rhs=q.label(int(rhs.matrix[i, j]))), cap)

    def relations(src, tgt):
        cells = len(src) * len(tgt)
        if q.size ** cells <= budget.max_candidates:
            for vals in itertools.product(range(q.size), repeat=cells):
                yield VRelation(src, tgt, q, vals), True
        else:
            for _ in range(budget.samples):
                yield VRelation(src, tgt, q, [rng.randrange(q.size) for _ in range(cells)]), False

    for n in sizes:
        X = FiniteSet.points(n)
        px, ux = powerset(X), ultrafilters(X)
        eps_x = epsilon_relation(X, q)
        # a. Uf∘ε_X <= ε_Y∘Pf
        for m in sizes:
            Y = FiniteSet.points(m)
            eps_y = epsilon_relation(Y, q)
            py, uy = powerset(Y), ultrafilters(Y)
            mon = UltrafilterMonad()
            for image in itertools.product(Y.items, repeat=n):
                f = dict(zip(X.items, image))
                uf = graph(lambda u: mon.fmap(f.__getitem__, u, Y), ux, uy, q)
                pf = graph(lambda a: frozenset(f[x] for x in a), px, py, q)
                leq_rel(rel_compose(uf, eps_x), rel_compose(eps_y, pf), "a", {"f": f})
                rep.add("a")
        # b. dot <= ε_X∘{-}
        dot = graph(lambda x: UltrafilterMonad().unit(x, X), X, ux, q)
        single = graph(lambda x: frozenset([x]), X, px, q)
        leq_rel(dot, rel_compose(eps_x, single), "b", {"n": n})
        rep.add("b")
        # c. Σ∘ε_{UX}∘P̂ε_X <= ε_X∘⋃
        if n <= 2:
            ops = UltrafilterOps(X)
            ppx = powerset(px)
            eps_ux = epsilon_relation(ux, q)
            sig = graph(ops.sigma, ops.uux, ux, q)
            union = graph(lambda fam: frozenset().union(*fam), ppx, px, q)
            lhs = rel_compose(sig, rel_compose(eps_ux, powerset_extension(eps_x)))
            leq_rel(lhs, rel_compose(eps_x, union), "c", {"n": n})
            rep.add("c")
        # d. ε_Y∘P̂r <= Ūr∘ε_X
        for m in sizes:
            Y = FiniteSet.points(m)
            eps_y = epsilon_relation(Y, q)
            for r, ex in relations(X, Y):
                leq_rel(rel_compose(eps_y, powerset_extension(r)),
                        rel_compose(ultrafilter_extension(r), eps_x), "d", {"r": r.to_labels()})
                rep.add("d", 1, ex)
        # e. P̂(a∘ε_X) <= P̂a∘P̂ε_X
        if n <= 2:
            pe = powerset_extension(eps_x)
            for a, ex in relations(ux, X):
                leq_rel(powerset_extension(rel_compose(a, eps_x)),
                        rel_compose(powerset_extension(a), pe), "e", {"a": a.to_labels()})
                rep.add("e", 1, ex)
    return rep


def check_probapp_convergence(s, cap=20):
    """Probabilistic approach structure in convergence form, plus round trips."""
    q = s.quantale
    if q.family != "delta_grid":
        raise CapabilityError(f"{q.name} is not a delta grid")
    rep = check_beta_algebra(s, cap)
    if rep.ok:
        d = a_epsilon(s)
        rep.merge(check_probapp(d, cap), "distance.")
        if r_functor(d) != s:
            rep.fail("round-trip", {"structure": s.to_labels()}, cap)
        rep.add("round-trip")
    return rep
