"""(T,V)-graphs, change of base along monotone maps, and the reflector.

A graph is a raw table: ``powerset`` graphs are c: PX → V^X (rows in bitmask
order), ``ultrafilter`` graphs are ℓ: UX → V^X over principal ultrafilters,
and ``category`` graphs are point tables a: X × X → V, the finite stand-in
for V-Cat. No axioms are assumed until :func:`reflect`.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import asdict
from fractions import Fraction

import numpy as np

from .convergence import (ConvergenceStructure, beta_algebra_ok,
                          check_beta_algebra, contractive_fast, enumerate_beta_algebras,
                          m2_fast, r_functor)
from .lattice import (MonotoneMap, adjoints, classify_hom, is_adjoint_pair, is_ccd,
                      totally_below)
from .quantales import INF, delta_sigma, downset, parse_builtin, parse_number, two_chain
from .report import Budget, CapabilityError, LawReport
from .spaces import (DistanceStructure, category_completion, check_closure, closure_hull,
                     closure_ok, enumerate_structures, is_approach)
from .vrel import (FiniteSet, Ultrafilter, UltrafilterMonad, VMap, beta, function_space,
                   ultrafilters)

KINDS = ("powerset", "ultrafilter", "category")


class Graph:
    def __init__(self, carrier, quantale, kind, table):
        if kind not in KINDS:
            raise CapabilityError(f"unknown graph kind {kind!r}")
        n = len(carrier)
        rows = 1 << n if kind == "powerset" else n
        t = np.array(table, dtype=np.int64).reshape(rows, n)
        if t.size and (t.min() < 0 or t.max() >= quantale.size):
            raise ValueError("table entries must be quantale elements")
        t.setflags(write=False)
        self.carrier, self.quantale, self.kind, self.table = carrier, quantale, kind, t

    @classmethod
    def from_structure(cls, s, kind=None):
        if isinstance(s, DistanceStructure):
            return cls(s.carrier, s.quantale, kind or "powerset", s.table)
        if isinstance(s, ConvergenceStructure):
            return cls(s.carrier, s.quantale, kind or "ultrafilter", s.ell)
        raise CapabilityError(f"cannot view {type(s).__name__} as a graph")

    @classmethod
    def constant(cls, carrier, q, kind, value):
        n = len(carrier)
        rows = 1 << n if kind == "powerset" else n
        return cls(carrier, q, kind, np.full((rows, n), q.index(value), dtype=np.int64))

    def structure(self):
        if self.kind == "powerset":
            return DistanceStructure(self.carrier, self.quantale, self.table)
        return ConvergenceStructure(self.carrier, self.quantale, self.table)

    @property
    def n(self):
        return len(self.carrier)

    def __eq__(self, other):
        return (isinstance(other, Graph) and self.kind == other.kind
                and self.carrier == other.carrier and self.quantale == other.quantale
                and np.array_equal(self.table, other.table))

    def __hash__(self):
        return hash((self.kind, self.carrier, self.table.tobytes()))

    def __repr__(self):
        return f"Graph({self.kind}, n={self.n}, over {self.quantale.name})"

    def leq(self, other):
        return bool(self.quantale.leq[self.table, other.table].all())

    def to_labels(self):
        q, X = self.quantale, self.carrier
        if self.kind == "powerset":
            return self.structure().to_labels()
        return [[x, y, q.label(int(self.table[i, j]))]
                for i, x in enumerate(X) for j, y in enumerate(X)]


def check_lax_algebra(g, cap=20):
    """The kind's axioms: (R'),(T') / (R''),(T'') / reflexive and transitive."""
    if g.kind == "powerset":
        return check_closure(g.structure(), cap=cap)
    if g.kind == "ultrafilter":
        return check_beta_algebra(g.structure(), cap)
    rep = LawReport()
    if not beta_algebra_ok(g.quantale, g.table):
        rep.fail("V-Cat", {"table": g.to_labels()}, cap)
    rep.add("V-Cat")
    return rep


def is_lax_algebra(g):
    if g.kind == "powerset":
        return closure_ok(g.quantale, g.table)
    return beta_algebra_ok(g.quantale, g.table)


class BaseChangeMap:
    """A monotone map φ: V → W with its classification and adjoints."""

    def __init__(self, phi):
        self.phi = phi
        self.classification = classify_hom(phi)
        self._adjoints = None

    @property
    def source(self):
        return self.phi.source

    @property
    def target(self):
        return self.phi.target

    @property
    def name(self):
        return self.phi.name

    @property
    def table(self):
        return self.phi.table

    def __call__(self, v):
        return self.phi(v)

    @property
    def adjoints(self):
        if self._adjoints is None:
            self._adjoints = adjoints(self.phi)
        return self._adjoints


def _as_map(phi):
    return phi.phi if isinstance(phi, BaseChangeMap) else phi


def b_phi(g, phi):
    """B_φ: postcompose every table entry with φ."""
    phi = _as_map(phi)
    if g.quantale != phi.source:
        raise CapabilityError(f"graph lives over {g.quantale.name}, "
                              f"map {phi.name} starts at {phi.source.name}")
    tab = np.array(phi.table, dtype=np.int64)[g.table]
    return Graph(g.carrier, phi.target, g.kind, tab)


def reflect(g):
    """Least lax algebra of the same kind above ``g``.

    Powerset graphs go through :func:`closure_hull`. For the other kinds the
    axioms say the point table is reflexive and transitive, so the least one
    above is the V-category completion.
    """
    if g.kind == "powerset":
        return Graph(g.carrier, g.quantale, g.kind, closure_hull(g.quantale, g.table))
    return Graph(g.carrier, g.quantale, g.kind, category_completion(g.quantale, g.table))


def lax_algebras(carrier, q, kind, budget=None, exhaustive=True):
    """All lax algebras of ``kind`` on ``carrier`` (or a seeded sample)."""
    bound = float("inf") if exhaustive else 0
    if kind == "powerset":
        found = enumerate_structures(carrier, q, "closure", bound=bound, budget=budget)
        return [Graph.from_structure(s) for s in found], found.exhaustive
    found, ex = enumerate_beta_algebras(carrier, q, bound=bound, budget=budget)
    return [Graph(carrier, q, kind, s.ell) for s in found], ex


def reflect_bruteforce(g, algebras=None):
    """Meet of every lax algebra above ``g``, by exhaustive enumeration."""
    q = g.quantale
    pool = algebras if algebras is not None else lax_algebras(g.carrier, q, g.kind)[0]
    above = [a.table for a in pool if g.leq(a)]
    out = np.full(g.table.shape, q.top, dtype=np.int64)
    mt = q.meet_table
    for t in above:
        out = mt[out, t]
    return Graph(g.carrier, q, g.kind, out)


def b_bar_phi(g, phi):
    """B̄_φ = reflect ∘ B_φ."""
    return reflect(b_phi(g, phi))


def is_graph_morphism(src, tgt, f):
    """(M) for the graphs' kind, with ``f`` an index tuple."""
    if src.kind != tgt.kind or src.quantale != tgt.quantale:
        raise CapabilityError("graphs of different kinds or over different quantales")
    if src.kind == "powerset":
        return contractive_fast(src.quantale, src.table, tgt.table, f)
    return m2_fast(src.quantale, src.table, tgt.table, f)


def _hom_triples(left, right, rng, max_pairs):
    """(i, j, f) with f from the carrier of left[i] to that of right[j]."""
    groups = []
    for i, a in enumerate(left):
        for j, b in enumerate(right):
            groups.append((i, j, a.n, b.n))
    total = sum(n_b ** n_a for _, _, n_a, n_b in groups)
    if total <= max_pairs:
        for i, j, n_a, n_b in groups:
            for f in itertools.product(range(n_b), repeat=n_a):
                yield i, j, f
        return
    nonempty = [grp for grp in groups if grp[3] or not grp[2]]
    for _ in range(max_pairs):
        i, j, n_a, n_b = rng.choice(nonempty)
        yield i, j, tuple(rng.randrange(n_b) for _ in range(n_a))


def check_graph_adjunction(phi, psi, left_graphs, right_graphs, reflected=False,
                           max_pairs=100_000, seed=0, cap=5):
    """f: B_φ(g) → h iff f: g → B_ψ(h), over all given pairs and maps.

    With ``reflected`` the left side is B̄_φ(g) instead of B_φ(g). Returns a
    report whose witnesses are the triples where the two sides disagree.
    """
    rng = random.Random(seed)
    rep = LawReport()
    lifted = [b_bar_phi(g, phi) if reflected else b_phi(g, phi) for g in left_graphs]
    pulled = [b_phi(h, psi) for h in right_graphs]
    count = 0
    for i, j, f in _hom_triples(left_graphs, right_graphs, rng, max_pairs):
        count += 1
        lhs = is_graph_morphism(lifted[i], right_graphs[j], f)
        rhs = is_graph_morphism(left_graphs[i], pulled[j], f)
        if lhs != rhs:
            g, h = left_graphs[i], right_graphs[j]
            rep.fail("hom-set", {"source": g.to_labels(), "target": h.to_labels(),
                                 "map": {x: h.carrier.items[k] for x, k in zip(g.carrier, f)},
                                 "left side": lhs, "right side": rhs}, cap)
    rep.add("hom-set", count)
    return rep


def _check_hypotheses(phi, psi):
    for q in (phi.source, phi.target):
        if not is_ccd(q):
            raise CapabilityError(f"{q.name} is not ccd")
        if not q.is_integral:
            raise CapabilityError(f"{q.name} is not integral")
    if psi.source != phi.target or psi.target != phi.source:
        raise CapabilityError(f"{phi.name} and {psi.name} do not run in opposite directions")
    if not classify_hom(psi).is_lax_hom:
        raise CapabilityError(f"{psi.name} is not a lax homomorphism")


def verify_adjunction_theorem(phi, psi, budget=None, sizes=(1, 2), max_pairs=100_000):
    """Compare (i) φ ⊣ ψ, (ii) B̄_φ ⊣ B_ψ on (β,V)-Alg, (iii) the same on V-Cat.

    Returns ``(report, summary)``. The report fails only when the three
    verdicts disagree; ``summary`` holds each verdict and, for a failed
    hom-set clause, its first counterexample.
    """
    phi, psi = _as_map(phi), _as_map(psi)
    _check_hypotheses(phi, psi)
    budget = budget or Budget()
    summary = {"i": is_adjoint_pair(phi, psi)}
    for clause, kind in (("ii", "ultrafilter"), ("iii", "category")):
        left, right = [], []
        exhaustive = True
        for n in sizes:
            X = FiniteSet.points(n)
            ex = n <= budget.max_exhaustive_size
            b = Budget(samples=budget.samples, seed=budget.seed + n)
            gs, e1 = lax_algebras(X, phi.source, kind, b, ex)
            hs, e2 = lax_algebras(X, phi.target, kind, b, ex)
            left += gs
            right += hs
            exhaustive = exhaustive and e1 and e2
        sub = check_graph_adjunction(phi, psi, left, right, reflected=True,
                                     max_pairs=max_pairs, seed=budget.seed)
        summary[clause] = sub.ok
        summary[clause + "_checked"] = sub.checked.get("hom-set", 0)
        summary[clause + "_exhaustive"] = exhaustive
        if not sub.ok:
            summary[clause + "_counterexample"] = sub.violations[0].witness
    rep = LawReport()
    if len({summary["i"], summary["ii"], summary["iii"]}) != 1:
        rep.fail("equivalence", {"i": summary["i"], "ii": summary["ii"],
                                 "iii": summary["iii"]})
    rep.add("equivalence")
    return rep, summary


# -- standard maps -----------------------------------------------------------------

def _delta_times(q):
    return [parse_number(t) for t in q.params["times"]]


def _cost_of_delta(q):
    times = q.params["times"]
    if times == [str(i) for i in range(len(times))]:
        return parse_builtin(f"cost_chain:{len(times) - 1}")
    return parse_builtin("cost_grid:" + ",".join(times))


def _values_of_delta(q):
    return parse_builtin("value_chain:" + ",".join(q.params["values"]) + ":" + q.params["tnorm"])


def _rho(q, cost):
    """Least grid time beyond which φ is constantly 1, else ∞."""
    times = _delta_times(q)

    def rho(i):
        vec = q.payload[i]
        for k in range(len(times)):
            if all(v == 1 for v in vec[k:]):
                return cost.payload.index(times[k])
        return cost.payload.index(INF)
    return rho


def _lambda(q, cost):
    """Greatest grid time up to which φ is constantly 0 (∞ if φ = 0)."""
    times = _delta_times(q)

    def lam(i):
        vec = q.payload[i]
        zeros = next((k for k, v in enumerate(vec) if v != 0), len(vec))
        return cost.payload.index(INF if zeros == len(vec) else times[zeros])
    return lam


def standard_maps(kind, q):
    """Named MonotoneMaps of a standard family built around ``q``.

    ``iota_pi_o``: ι: 2 → q, π, o: q → 2 (q integral). ``sigma_tau_rho_lambda``:
    q a delta grid; σ, ρ, λ against the cost grid on its time points and τ
    from its value chain. ``downset_triple``: ⇓, ↓: q → Dn q and sup back,
    named ``downset.up``, ``downset.down`` and ``downset.sup``.
    """
    if kind == "iota_pi_o":
        if not q.is_integral:
            raise CapabilityError(f"{q.name} is not integral")
        two = two_chain()
        return {
            "iota": MonotoneMap(two, q, (q.bottom, q.unit), "iota"),
            "pi": MonotoneMap.from_function(q, two, lambda v: 1 if q.le(q.unit, v) else 0, "pi"),
            "o": MonotoneMap.from_function(q, two, lambda v: 0 if v == q.bottom else 1, "o"),
        }
    if kind == "sigma_tau_rho_lambda":
        if q.family != "delta_grid":
            raise CapabilityError(f"{q.name} is not a delta grid")
        cost, vals = _cost_of_delta(q), _values_of_delta(q)
        n = len(q.params["times"])
        return {
            "sigma": MonotoneMap.from_function(
                cost, q, lambda a: delta_sigma(q, cost.payload[a]), "sigma"),
            "tau": MonotoneMap.from_function(
                vals, q, lambda u: q.payload.index((Fraction(vals.payload[u]),) * n), "tau"),
            "rho": MonotoneMap.from_function(q, cost, _rho(q, cost), "rho"),
            "lambda": MonotoneMap.from_function(q, cost, _lambda(q, cost), "lambda"),
        }
    if kind == "downset_triple":
        if not is_ccd(q):
            raise CapabilityError(f"{q.name} is not ccd")
        dn = downset(q)
        idx = {s: i for i, s in enumerate(dn.payload)}
        return {
            "downset.up": MonotoneMap.from_function(
                q, dn, lambda v: idx[frozenset(u for u in range(q.size)
                                               if totally_below(q, u, v))], "downset.up"),
            "downset.sup": MonotoneMap.from_function(
                dn, q, lambda s: q.join_all(dn.payload[s]), "downset.sup"),
            "downset.down": MonotoneMap.from_function(
                q, dn, lambda v: idx[frozenset(u for u in range(q.size) if q.le(u, v))],
                "downset.down"),
        }
    raise CapabilityError(f"unknown family {kind!r}")


FAMILY_OF = {"iota": "iota_pi_o", "pi": "iota_pi_o", "o": "iota_pi_o",
             "sigma": "sigma_tau_rho_lambda", "tau": "sigma_tau_rho_lambda",
             "rho": "sigma_tau_rho_lambda", "lambda": "sigma_tau_rho_lambda",
             "downset.up": "downset_triple", "downset.sup": "downset_triple",
             "downset.down": "downset_triple"}

# (left, right) pairs and the expected classification of each map
ADJUNCTIONS = {"iota_pi_o": [("o", "iota"), ("iota", "pi")],
               "sigma_tau_rho_lambda": [("lambda", "sigma"), ("sigma", "rho")],
               "downset_triple": [("downset.up", "downset.sup"),
                                  ("downset.sup", "downset.down")]}
# "lax" accepts strict homomorphisms too; on chains π and ρ happen to be strict
EXPECTED = {"iota_pi_o": {"iota": "hom", "pi": "lax"},
            "sigma_tau_rho_lambda": {"sigma": "hom", "tau": "hom", "rho": "lax"},
            "downset_triple": {"downset.sup": "hom", "downset.down": "lax"}}


def verify_standard_maps(kind, q, cap=20):
    """Adjunctions and classifications of a standard family, elementwise."""
    maps = standard_maps(kind, q)
    rep = LawReport()
    for left, right in ADJUNCTIONS[kind]:
        law = f"{left} -| {right}"
        if not is_adjoint_pair(maps[left], maps[right]):
            rep.fail(law, {"left": maps[left].to_labels(), "right": maps[right].to_labels()}, cap)
        rep.add(law)
    for name, expect in EXPECTED[kind].items():
        cls = classify_hom(maps[name])
        ok = cls.is_hom if expect == "hom" else cls.is_lax_hom
        if not ok:
            rep.fail(f"{name} is {expect}", {"classification": asdict(cls)}, cap)
        rep.add(f"{name} is {expect}")
    if kind == "sigma_tau_rho_lambda":
        sig, rho, lam = maps["sigma"], maps["rho"], maps["lambda"]
        for a in range(sig.source.size):
            if rho(sig(a)) != a:
                rep.fail("rho.sigma=id", {"alpha": sig.source.label(a)}, cap)
            if lam(sig(a)) != a:
                rep.fail("lambda.sigma=id", {"alpha": sig.source.label(a)}, cap)
        rep.add("rho.sigma=id", sig.source.size)
        rep.add("lambda.sigma=id", sig.source.size)
        for name, m in (("rho", rho), ("lambda", lam)):
            if adjoints(sig)[1 if name == "rho" else 0].table != m.table:
                rep.fail(f"{name} formula = adjoint", {"formula": m.to_labels()}, cap)
            rep.add(f"{name} formula = adjoint")
    if kind == "downset_triple":
        up, sup = maps["downset.up"], maps["downset.sup"]
        for v in range(q.size):
            if sup(up(v)) != v:
                rep.fail("sup.up=id", {"v": q.label(v)}, cap)
        rep.add("sup.up=id", q.size)
    if kind == "iota_pi_o":
        pi, iota = maps["pi"], maps["iota"]
        for b in range(2):
            if pi(iota(b)) != b:
                rep.fail("pi.iota=id", {"b": b}, cap)
        rep.add("pi.iota=id", 2)
    return rep


def right_adjoint_is_lax(phi):
    """For a homomorphism into an integral quantale, the right adjoint is lax."""
    right = adjoints(phi)[1]
    return right is not None and classify_hom(right).is_lax_hom


def check_beta_compatibility(phi, sizes=(0, 1, 2), cap=20):
    """φ^{UX} ∘ β_X = β_X ∘ U(φ^X), compared literally over filter members."""
    phi = _as_map(phi)
    v, w = phi.source, phi.target
    bv, bw = beta(v), beta(w)
    mon = UltrafilterMonad()
    rep = LawReport()
    for n in sizes:
        X = FiniteSet.points(n)
        fv, fw = function_space(X, v), function_space(X, w)
        ux = ultrafilters(X)
        for g in fv:
            big = Ultrafilter(g, fv)
            pushed = mon.fmap(lambda s: VMap(X, [phi(i) for i in s.vals]), big, fw)
            for u in ux:
                lhs, rhs = phi(bv(big, u)), bw(pushed, u)
                if lhs != rhs:
                    rep.fail("beta-compatibility", {"n": n, "sigma": [v.label(i) for i in g.vals],
                                                    "x": u.gen, "lhs": w.label(lhs),
                                                    "rhs": w.label(rhs)}, cap)
            rep.add("beta-compatibility", len(ux))
    return rep


# -- the embedding corollaries -----------------------------------------------------

def verify_embedding_corollaries(budget=None, q=None, delta=None, sizes=(0, 1, 2, 3),
                                 delta_sizes=(0, 1, 2), cap=20):
    """Top ↪ V-App via ι (with B_π, B̄_o), and App ↪ ProbApp via σ, ρ, λ."""
    budget = budget or Budget()
    q = q or parse_builtin("three_chain")
    delta = delta or parse_builtin("delta_grid:0,1:0,1/2,1:lukasiewicz")
    rep = LawReport()
    m = standard_maps("iota_pi_o", q)
    iota, pi, o = m["iota"], m["pi"], m["o"]
    two = iota.source
    for n in sizes:
        X = FiniteSet.points(n)
        for s in enumerate_structures(X, two, "approach", bound=float("inf")):
            g = Graph.from_structure(s)
            up = b_phi(g, iota)
            if not is_approach(up.structure())[0]:
                rep.fail("iota-image approach", {"topology": g.to_labels()}, cap)
            if b_phi(up, pi) != g:
                rep.fail("B_pi.B_iota=id", {"topology": g.to_labels()}, cap)
            if b_bar_phi(up, o) != g:
                rep.fail("Bbar_o.B_iota=id", {"topology": g.to_labels()}, cap)
            for law in ("iota-image approach", "B_pi.B_iota=id", "Bbar_o.B_iota=id"):
                rep.add(law)
    # coreflection counit and reflection unit on V-approach structures
    for n in sizes[:3]:
        X = FiniteSet.points(n)
        for s in enumerate_structures(X, q, "approach", bound=float("inf")):
            g = Graph.from_structure(s)
            if not b_phi(b_phi(g, pi), iota).leq(g):
                rep.fail("B_iota.B_pi<=id", {"structure": g.to_labels()}, cap)
            if not g.leq(b_phi(b_bar_phi(g, o), iota)):
                rep.fail("id<=B_iota.Bbar_o", {"structure": g.to_labels()}, cap)
            rep.add("B_iota.B_pi<=id")
            rep.add("id<=B_iota.Bbar_o")
    d = standard_maps("sigma_tau_rho_lambda", delta)
    sig, rho, lam = d["sigma"], d["rho"], d["lambda"]
    cost = sig.source
    costs, deltas = [], []
    for n in delta_sizes:
        X = FiniteSet.points(n)
        for s in enumerate_structures(X, cost, "approach", bound=float("inf")):
            g = Graph.from_structure(s)
            img = b_phi(g, sig)
            if not is_approach(img.structure())[0]:
                rep.fail("sigma-image approach", {"structure": g.to_labels()}, cap)
            if b_phi(img, rho) != g:
                rep.fail("B_rho.B_sigma=id", {"structure": g.to_labels()}, cap)
            rep.add("sigma-image approach")
            rep.add("B_rho.B_sigma=id")
            costs.append(Graph.from_structure(r_functor(s)))
        for s in enumerate_structures(X, delta, "approach", bound=float("inf")):
            deltas.append(Graph.from_structure(r_functor(s)))
    # hom-set bijections, on (β,V)-algebras ≅ V-App
    rep.merge(check_graph_adjunction(lam, sig, deltas, costs, reflected=True,
                                     seed=budget.seed), "lambda-|sigma.")
    rep.merge(check_graph_adjunction(sig, rho, costs, deltas, reflected=True,
                                     seed=budget.seed), "sigma-|rho.")
    # B̄_σ = B_σ on algebras: σ is a homomorphism, no reflection needed
    for g in costs:
        if b_bar_phi(g, sig) != b_phi(g, sig):
            rep.fail("Bbar_sigma=B_sigma", {"structure": g.to_labels()}, cap)
        rep.add("Bbar_sigma=B_sigma")
    return rep


def check_monotone_preserved(phi, graphs_pairs, cap=20):
    """B_φ sends graph morphisms to graph morphisms (φ monotone)."""
    rep = LawReport()
    for g, h, f in graphs_pairs:
        if is_graph_morphism(g, h, f) and not is_graph_morphism(b_phi(g, phi), b_phi(h, phi), f):
            rep.fail("functorial", {"source": g.to_labels(), "target": h.to_labels()}, cap)
        rep.add("functorial")
    return rep


__all__ = ["Graph", "BaseChangeMap", "b_phi", "reflect", "reflect_bruteforce", "b_bar_phi",
           "is_graph_morphism", "check_graph_adjunction", "verify_adjunction_theorem",
           "standard_maps", "verify_standard_maps", "verify_embedding_corollaries",
           "check_beta_compatibility", "right_adjoint_is_lax", "lax_algebras",
           "check_lax_algebra", "is_lax_algebra", "check_monotone_preserved", "KINDS",
           "FAMILY_OF"]
