"""The named verification suites behind ``vapproach verify``.

A suite is a list of independent cases. Each case is a module-level function
plus keyword arguments, so it can run in a worker process; results are
collected in case order, which keeps reports deterministic.
"""
from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import oracles
from .base_change import (Graph, b_phi, check_beta_compatibility, lax_algebras, reflect,
                          reflect_bruteforce, right_adjoint_is_lax, standard_maps,
                          verify_adjunction_theorem, verify_embedding_corollaries,
                          verify_standard_maps)
from .convergence import (a_epsilon, check_probapp_convergence, non_approach_witness,
                          r_functor, verify_main_theorem)
from .lattice import check_quantale, classify_hom, constant_map, identity_map, is_ccd
from .quantales import downset, parse_builtin, small_delta_grid
from .report import Budget, CapabilityError, LawReport
from .spaces import (DistanceStructure, all_tables, category_completion, check_probapp,
                     check_tower, closure_hull, closure_ok, enumerate_structures,
                     enumerate_towers, from_tower, is_approach, to_tower)
from .vrel import FiniteSet, alpha, beta, check_lax_law, corrupted_alpha

SUITE_NAMES = ("quantale-laws", "lax-laws", "tower-bijection", "approach-equivalence",
               "main-theorem", "topology-counts", "reflector", "base-change", "probapp")


@dataclass(frozen=True)
class WorkbenchConfig:
    """Budget knobs shared by all suites; ``None`` keeps a suite's own default."""

    max_exhaustive_size: int | None = None
    sample_count: int | None = None
    seed: int = 0
    output_format: str = "text"

    def __post_init__(self):
        if self.sample_count is not None and self.sample_count < 1:
            raise ValueError("sample_count must be >= 1")
        if self.max_exhaustive_size is not None and self.max_exhaustive_size < 0:
            raise ValueError("max_exhaustive_size must be >= 0")
        if self.output_format not in ("text", "json"):
            raise ValueError("output_format is text or json")

    def size(self, default):
        return default if self.max_exhaustive_size is None else self.max_exhaustive_size

    def samples(self, default):
        return default if self.sample_count is None else self.sample_count


@dataclass
class CaseResult:
    title: str
    report: LawReport
    info: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def ok(self):
        return self.report.ok


@dataclass
class SuiteResult:
    name: str
    cases: list

    @property
    def ok(self):
        return all(c.ok for c in self.cases)

    @property
    def seconds(self):
        return sum(c.seconds for c in self.cases)

    def to_dict(self, timing=False):
        out = {"suite": self.name, "ok": self.ok, "cases": []}
        for c in self.cases:
            entry = {"title": c.title, "ok": c.ok, "info": c.info, **c.report.to_dict()}
            if timing:
                entry["seconds"] = round(c.seconds, 3)
            out["cases"].append(entry)
        return out


def _expect(rep, law, cond, witness=None):
    if not cond:
        rep.fail(law, witness or {})
    rep.add(law)


# -- 1. quantale laws ----------------------------------------------------------------

QUANTALE_SUITE = ("two_chain", "chain_frame:3", "cost_chain:3", "unit_grid:4:lukasiewicz",
                  "delta_grid:0,1:0,1/2,1:lukasiewicz", "downset:chain_frame:3")


def case_quantale(desc):
    q = parse_builtin(desc)
    rep = LawReport()
    for v in check_quantale(q):
        rep.fail(v.law, v.witness)
    rep.add("quantale laws")
    ccd = is_ccd(q)
    _expect(rep, "ccd", ccd)
    _expect(rep, "integral", q.is_integral)
    return rep, {"quantale": q.name, "size": q.size, "ccd": ccd, "integral": q.is_integral}


def case_downset_integrality():
    rep = LawReport()
    info = {}
    for desc in ("chain_frame:3", "cost_chain:1", "diamond"):
        base = parse_builtin(desc)
        dn = downset(base)
        info[desc] = {"base": base.is_integral, "downset": dn.is_integral}
        _expect(rep, "downset integral iff base integral", dn.is_integral == base.is_integral,
                {"base": base.name})
    return rep, info


def case_corrupted_caught():
    rep = LawReport()
    info = {}
    for desc in ("corrupted_three_chain", "diamond_meet"):
        found = check_quantale(parse_builtin(desc))
        info[desc] = sorted({v.law for v in found})
        _expect(rep, "violation detected", bool(found), {"quantale": desc})
    return rep, info


# -- 2. lax laws ---------------------------------------------------------------------

LAWS = {"alpha": alpha, "beta": beta, "alpha_corrupted": corrupted_alpha}


def case_lax_law(law, desc, samples, seed):
    q = parse_builtin(desc)
    rep = check_lax_law(LAWS[law](q), Budget(samples=samples, seed=seed), sizes=(0, 1, 2))
    return rep, {"law": law, "quantale": q.name}


def case_corrupted_law(desc, samples, seed):
    q = parse_builtin(desc)
    inner = check_lax_law(corrupted_alpha(q), Budget(samples=samples, seed=seed), sizes=(0, 1, 2))
    rep = LawReport()
    _expect(rep, "corrupted law caught", not inner.ok)
    return rep, {"quantale": q.name, "violated": inner.laws_violated(),
                 "violation_counts": dict(sorted(inner.failed.items()))}


# -- 3./4. towers and approach ---------------------------------------------------------

TOWER_AXIOMS = ("C0", "C1", "C2", "C3")


def case_tower_bijection(desc, n):
    q = parse_builtin(desc)
    X = FiniteSet.points(n)
    rep = LawReport()
    closures = 0
    tables = 0
    for s in all_tables(X, q):
        tables += 1
        tw = to_tower(s)
        trep = check_tower(tw)
        if "C3<=>C3'" in trep.failed:
            rep.fail("C3<=>C3'", {"table": s.to_labels()})
        rep.add("C3<=>C3'")
        tower_ok = not any(law in trep.failed for law in TOWER_AXIOMS)
        is_cl = closure_ok(q, s.table)
        if tower_ok != is_cl:
            rep.fail("tower axioms <=> closure", {"table": s.to_labels(), "closure": is_cl})
        rep.add("tower axioms <=> closure")
        if is_cl:
            closures += 1
            if from_tower(tw, check=False) != s:
                rep.fail("from_tower.to_tower=id", {"table": s.to_labels()})
            rep.add("from_tower.to_tower=id")
    towers = enumerate_towers(X, q)
    for t in towers:
        if to_tower(from_tower(t)) != t:
            rep.fail("to_tower.from_tower=id", {"tower": t.to_labels()})
        rep.add("to_tower.from_tower=id")
    _expect(rep, "#towers = #closure structures", len(towers) == closures,
            {"towers": len(towers), "closures": closures})
    return rep, {"quantale": q.name, "n": n, "tables": tables, "closure structures": closures,
                 "towers": len(towers)}


def case_approach_equivalence(desc, n):
    q = parse_builtin(desc)
    X = FiniteSet.points(n)
    rep = LawReport()
    closures = approaches = 0
    for s in all_tables(X, q):
        if not closure_ok(q, s.table):
            continue
        closures += 1
        tw = to_tower(s)
        appr = is_approach(s)[0]
        ll = not any(k in check_tower(tw, "approach_ll").failed
                     for k in ("C4", "C5", "C4(bottom)"))
        cp = not any(k in check_tower(tw, "approach_coprime").failed for k in ("C4'", "C5'"))
        approaches += appr
        if not appr == ll == cp:
            rep.fail("is_approach <=> C4+C5 <=> C4'+C5'",
                     {"table": s.to_labels(), "is_approach": appr, "C4+C5": ll, "C4'+C5'": cp})
        rep.add("is_approach <=> C4+C5 <=> C4'+C5'")
    return rep, {"quantale": q.name, "n": n, "closure structures": closures,
                 "approach structures": approaches}


# -- 5. topology counts ------------------------------------------------------------------

def case_topology_counts(max_n):
    q = parse_builtin("two_chain")
    rep = LawReport()
    counts = {}
    expected = [1, 1, 4, 29, 355]
    for n in range(max_n + 1):
        X = FiniteSet.points(n)
        found = enumerate_structures(X, q, "approach", bound=float("inf"))
        ours = {tuple(int(sum(1 << i for i in range(n) if s.table[a, i] == q.top))
                      for a in range(1 << n)) for s in found}
        kur = set(oracles.kuratowski_closures(n))
        tops = len(oracles.finite_topologies(n)) if n <= 3 else None
        counts[n] = {"approach": found.count, "kuratowski": len(kur), "topologies": tops}
        _expect(rep, "count = oracle", found.count == len(kur), {"n": n})
        _expect(rep, "closure operators = oracle", ours == kur, {"n": n})
        if tops is not None:
            _expect(rep, "count = topologies", found.count == tops, {"n": n})
        if n < len(expected):
            _expect(rep, "count = known value", found.count == expected[n],
                    {"n": n, "count": found.count, "expected": expected[n]})
    return rep, {"counts": counts}


# -- 6. main theorem -----------------------------------------------------------------

def case_main_theorem(desc, max_exhaustive, samples, seed, sizes):
    q = parse_builtin(desc)
    rep, counts = verify_main_theorem(
        q, Budget(max_exhaustive_size=max_exhaustive, samples=samples, seed=seed),
        sizes=tuple(sizes))
    return rep, {"quantale": q.name, "counts": {str(k): v for k, v in counts.items()}}


def case_coreflection_gap(desc):
    q = parse_builtin(desc)
    s, back, diff = non_approach_witness(q, 1)
    rep = LawReport()
    _expect(rep, "closure, not approach", closure_ok(q, s.table) and not is_approach(s)[0])
    _expect(rep, "A_eps.R(s) < s", back.leq(s) and back != s)
    return rep, {"quantale": q.name, "differences [A, x, c, A_eps.R(c)]": diff}


# -- 7. reflector --------------------------------------------------------------------

def _random_graph(rng, X, q, kind):
    rows = 1 << len(X) if kind == "powerset" else len(X)
    return Graph(X, q, kind, [rng.randrange(q.size) for _ in range(rows * len(X))])


def case_reflector(desc, kind, n, samples, seed):
    q = parse_builtin(desc)
    X = FiniteSet.points(n)
    rng = random.Random(seed)
    algebras, _ = lax_algebras(X, q, kind)
    graphs = [Graph.constant(X, q, kind, q.bottom), Graph.constant(X, q, kind, q.top)]
    graphs += [_random_graph(rng, X, q, kind) for _ in range(samples)]
    rep = LawReport()
    jt = q.join_table
    for g in graphs:
        r = reflect(g)
        _expect(rep, "reflect = brute-force minimum", r == reflect_bruteforce(g, algebras),
                {"graph": g.to_labels()})
        _expect(rep, "lax algebra", any(r == a for a in algebras), {"graph": g.to_labels()})
        _expect(rep, "inflationary", g.leq(r), {"graph": g.to_labels()})
        _expect(rep, "idempotent", reflect(r) == r, {"graph": g.to_labels()})
        h = Graph(X, q, kind, jt[g.table, _random_graph(rng, X, q, kind).table])
        _expect(rep, "monotone", r.leq(reflect(h)), {"graph": g.to_labels(),
                                                     "larger": h.to_labels()})
    return rep, {"quantale": q.name, "kind": kind, "n": n, "graphs": len(graphs),
                 "lax algebras": len(algebras)}


# -- 8. change of base ------------------------------------------------------------------

def case_standard_maps(kind, desc):
    q = parse_builtin(desc)
    rep = verify_standard_maps(kind, q)
    maps = standard_maps(kind, q)
    return rep, {"family": kind, "quantale": q.name,
                 "maps": {k: m.to_labels() for k, m in maps.items()}}


def case_theorem(kind, desc, samples, seed, max_exhaustive):
    q = parse_builtin(desc)
    budget = Budget(samples=samples, seed=seed, max_exhaustive_size=max_exhaustive)
    if kind == "iota_pi":
        m = standard_maps("iota_pi_o", q)
        phi, psi = m["iota"], m["pi"]
    elif kind == "sigma_rho":
        m = standard_maps("sigma_tau_rho_lambda", q)
        phi, psi = m["sigma"], m["rho"]
    elif kind == "lambda_sigma":
        m = standard_maps("sigma_tau_rho_lambda", q)
        phi, psi = m["lambda"], m["sigma"]
    else:
        phi, psi = identity_map(q), constant_map(q, q, q.top)
    rep, summary = verify_adjunction_theorem(phi, psi, budget)
    positive = kind != "identity_top"
    for clause in ("i", "ii", "iii"):
        _expect(rep, f"({clause}) {'holds' if positive else 'fails'}",
                summary[clause] == positive)
    if not positive:
        _expect(rep, "counterexample exhibited", "iii_counterexample" in summary)
    return rep, {"phi": phi.name, "psi": psi.name, **summary}


def case_embeddings(seed):
    rep = verify_embedding_corollaries(Budget(seed=seed))
    return rep, {}


def case_rho_sigma(samples, seed):
    d = small_delta_grid()
    m = standard_maps("sigma_tau_rho_lambda", d)
    sig, rho = m["sigma"], m["rho"]
    cost = sig.source
    rep = LawReport()
    drawn = 0
    for n in (1, 2, 3):
        X = FiniteSet.points(n)
        found = enumerate_structures(X, cost, "closure", bound=0,
                                     budget=Budget(samples=samples, seed=seed + n))
        for s in found:
            drawn += 1
            g = Graph.from_structure(s)
            _expect(rep, "rho.sigma=id", b_phi(b_phi(g, sig), rho) == g, {"structure": g.to_labels()})
    return rep, {"structures": drawn}


def case_beta_compatibility():
    rep = LawReport()
    names = []
    c3, d = parse_builtin("chain_frame:3"), small_delta_grid()
    maps = list(standard_maps("iota_pi_o", c3).values())
    maps += [standard_maps("sigma_tau_rho_lambda", d)[k] for k in ("sigma", "rho", "lambda")]
    maps += [constant_map(c3, c3, c3.top), identity_map(c3)]
    for m in maps:
        names.append(m.name)
        rep.merge(check_beta_compatibility(m, sizes=(0, 1, 2)), f"{m.name}.")
    return rep, {"maps": names}


def case_right_adjoints():
    rep = LawReport()
    checked = []
    c3, d = parse_builtin("chain_frame:3"), small_delta_grid()
    candidates = list(standard_maps("iota_pi_o", c3).values())
    candidates += list(standard_maps("sigma_tau_rho_lambda", d).values())
    candidates += list(standard_maps("downset_triple", c3).values())
    for m in candidates:
        if classify_hom(m).is_hom and m.target.is_integral:
            checked.append(m.name)
            _expect(rep, "right adjoint of hom is lax hom", right_adjoint_is_lax(m),
                    {"map": m.name})
    return rep, {"homomorphisms": checked}


# -- 9. probabilistic approach spaces --------------------------------------------------

def _probapp_agrees(rep, s):
    q = s.quantale
    pd = check_probapp(s).ok
    ca = closure_ok(q, s.table) and is_approach(s)[0]
    _expect(rep, "check_probapp <=> closure and approach", pd == ca,
            {"table": s.to_labels(), "probapp": pd, "closure and approach": ca})
    return ca


def case_probapp_exhaustive():
    q = small_delta_grid()
    X = FiniteSet.points(1)
    rep = LawReport()
    total = good = 0
    for s in all_tables(X, q):
        total += 1
        good += _probapp_agrees(rep, s)
    return rep, {"n": 1, "tables": total, "probabilistic approach": good}


def case_probapp_sampled(samples, seed):
    q = small_delta_grid()
    X = FiniteSet.points(2)
    rng = random.Random(seed)
    rep = LawReport()
    good = 0
    n = len(X)
    for k in range(samples):
        flavour = k % 3
        raw = [rng.randrange(q.size) for _ in range((1 << n) * n)]
        if flavour == 0:
            s = DistanceStructure(X, q, raw)
        elif flavour == 1:
            s = DistanceStructure(X, q, closure_hull(q, np.array(raw).reshape(1 << n, n)))
        else:
            a = category_completion(q, np.array(raw[:n * n]).reshape(n, n))
            s = DistanceStructure.from_point_matrix(X, q, a)
        if _probapp_agrees(rep, s):
            good += 1
            conv = r_functor(s)
            sub = check_probapp_convergence(conv)
            _expect(rep, "convergence form passes", sub.ok, {"table": s.to_labels()})
            _expect(rep, "A_eps.R=id", a_epsilon(conv) == s, {"table": s.to_labels()})
    return rep, {"n": 2, "samples": samples, "probabilistic approach": good}


# -- registry ------------------------------------------------------------------------

def suite_cases(name, cfg=None):
    """(title, function, kwargs) triples for a named suite."""
    cfg = cfg or WorkbenchConfig()
    seed = cfg.seed
    if name == "quantale-laws":
        return ([(f"quantale {d}", case_quantale, {"desc": d}) for d in QUANTALE_SUITE]
                + [("downset integrality", case_downset_integrality, {}),
                   ("corrupted tables caught", case_corrupted_caught, {})])
    if name == "lax-laws":
        samples = max(200, cfg.samples(200))
        out = [(f"{law} over {d}", case_lax_law,
                {"law": law, "desc": d, "samples": samples, "seed": seed})
               for law in ("alpha", "beta") for d in ("two_chain", "chain_frame:3")]
        return out + [("corrupted alpha caught", case_corrupted_law,
                       {"desc": "two_chain", "samples": samples, "seed": seed})]
    if name == "tower-bijection":
        n = cfg.size(2)
        return [(f"towers over {d}, |X|={n}", case_tower_bijection, {"desc": d, "n": n})
                for d in ("two_chain", "chain_frame:3")]
    if name == "approach-equivalence":
        n = cfg.size(2)
        return [(f"approach characterizations over {d}, |X|={n}", case_approach_equivalence,
                 {"desc": d, "n": n}) for d in ("two_chain", "chain_frame:3")]
    if name == "topology-counts":
        return [("topology counts", case_topology_counts, {"max_n": max(3, cfg.size(3))})]
    if name == "main-theorem":
        samples = max(500, cfg.samples(500))
        out = [("main theorem over two_chain", case_main_theorem,
                {"desc": "two_chain", "max_exhaustive": max(3, cfg.size(3)), "samples": samples,
                 "seed": seed, "sizes": [0, 1, 2, 3]})]
        out += [(f"main theorem over {d}", case_main_theorem,
                 {"desc": d, "max_exhaustive": cfg.size(2), "samples": samples, "seed": seed,
                  "sizes": [0, 1, 2, 3]})
                for d in ("chain_frame:3", "cost_chain:2", "delta_grid:0,1:0,1/2,1:lukasiewicz")]
        return out + [("coreflection is proper", case_coreflection_gap, {"desc": "chain_frame:3"})]
    if name == "reflector":
        samples = max(1000, cfg.samples(1000))
        n = cfg.size(2)
        return [(f"reflect {kind} graphs over {d}, |X|={n}", case_reflector,
                 {"desc": d, "kind": kind, "n": n, "samples": samples, "seed": seed})
                for d in ("two_chain", "chain_frame:3") for kind in ("powerset", "ultrafilter")]
    if name == "base-change":
        samples = cfg.samples(200)
        delta = "delta_grid:0,1:0,1/2,1:lukasiewicz"
        return [
            ("o -| iota -| pi", case_standard_maps, {"kind": "iota_pi_o", "desc": "chain_frame:3"}),
            ("lambda -| sigma -| rho", case_standard_maps,
             {"kind": "sigma_tau_rho_lambda", "desc": delta}),
            ("down-way -| sup -| down", case_standard_maps,
             {"kind": "downset_triple", "desc": "chain_frame:3"}),
            ("equivalences for (iota, pi)", case_theorem,
             {"kind": "iota_pi", "desc": "chain_frame:3", "samples": samples, "seed": seed,
              "max_exhaustive": cfg.size(2)}),
            ("equivalences for (sigma, rho)", case_theorem,
             {"kind": "sigma_rho", "desc": delta, "samples": samples, "seed": seed,
              "max_exhaustive": cfg.size(2)}),
            ("equivalences for (lambda, sigma)", case_theorem,
             {"kind": "lambda_sigma", "desc": delta, "samples": samples, "seed": seed,
              "max_exhaustive": cfg.size(2)}),
            ("equivalences fail for (identity, constant top)", case_theorem,
             {"kind": "identity_top", "desc": "chain_frame:3", "samples": samples, "seed": seed,
              "max_exhaustive": cfg.size(2)}),
            ("embedding corollaries", case_embeddings, {"seed": seed}),
            ("rho.sigma = id on sampled structures", case_rho_sigma,
             {"samples": samples, "seed": seed}),
            ("beta-compatibility", case_beta_compatibility, {}),
            ("right adjoints of homomorphisms", case_right_adjoints, {}),
        ]
    if name == "probapp":
        return [("probapp, |X|=1 exhaustive", case_probapp_exhaustive, {}),
                ("probapp, |X|=2 sampled", case_probapp_sampled,
                 {"samples": max(500, cfg.samples(500)), "seed": seed})]
    raise CapabilityError(f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)}")


def _run_case(fn, kwargs):
    start = time.perf_counter()
    rep, info = fn(**kwargs)
    return rep, info, time.perf_counter() - start


def run_suite(name, cfg=None, workers=1):
    cases = suite_cases(name, cfg)
    if workers > 1 and len(cases) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_case, fn, kw) for _, fn, kw in cases]
            outcomes = [f.result() for f in futures]
    else:
        outcomes = [_run_case(fn, kw) for _, fn, kw in cases]
    return SuiteResult(name, [CaseResult(title, rep, info, secs)
                              for (title, _, _), (rep, info, secs) in zip(cases, outcomes)])
