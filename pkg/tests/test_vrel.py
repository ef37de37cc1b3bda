import itertools
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from vapproach.quantales import chain_frame, cost_chain, two_chain, parse_builtin
from vapproach.report import Budget, CapabilityError
from vapproach.vrel import (FiniteSet, PVMonad, PowersetMonad, Ultrafilter, UltrafilterMonad,
                            VFunction, VMap, VRelation, alpha, beta, check_lax_law,
                            corrupted_alpha, evaluation_relation, function_space, graph,
                            identity_relation, lax_extension, law_from_extension,
                            powerset, powerset_extension, principal_generator,
                            rel_compose, render, ultrafilter_extension, ultrafilters)

QUANTALES = ["two_chain", "chain_frame:3", "cost_chain:2", "unit_grid:2:lukasiewicz",
             "delta_grid:0,1:0,1/2,1:lukasiewicz"]


def relations(q, n, m):
    return st.lists(st.integers(0, q.size - 1), min_size=n * m, max_size=n * m).map(
        lambda v: np.array(v).reshape(n, m))


def rel(q, src, tgt, m):
    return VRelation(src, tgt, q, m)


@st.composite
def quantale_and_triple(draw):
    q = parse_builtin(draw(st.sampled_from(QUANTALES)))
    sizes = [draw(st.integers(0, 3)) for _ in range(4)]
    sets = [FiniteSet(f"{c}{i}" for i in range(k)) for c, k in zip("wxyz", sizes)]
    mats = [draw(relations(q, len(a), len(b))) for a, b in zip(sets, sets[1:])]
    return q, sets, mats


@given(quantale_and_triple())
def test_composition_associative_and_unital(data):
    q, (w, x, y, z), (m1, m2, m3) = data
    r, s, t = rel(q, w, x, m1), rel(q, x, y, m2), rel(q, y, z, m3)
    assert rel_compose(t, rel_compose(s, r)) == rel_compose(rel_compose(t, s), r)
    assert rel_compose(r, identity_relation(w, q)) == r
    assert rel_compose(identity_relation(x, q), r) == r


def test_composition_formula_over_cost_chain():
    q = cost_chain(3)
    x, y, z = FiniteSet(["x"]), FiniteSet(["y"]), FiniteSet(["z"])
    r = rel(q, x, y, [[q.index("2")]])
    s = rel(q, y, z, [[q.index("1")]])
    assert q.label(rel_compose(s, r)("x", "z")) == "3"


def test_composition_mismatch_refused():
    q = two_chain()
    a, b = FiniteSet.points(1), FiniteSet.points(2)
    with pytest.raises(CapabilityError):
        rel_compose(identity_relation(a, q), identity_relation(b, q))


def test_empty_carriers():
    q = chain_frame(3)
    e = FiniteSet([])
    assert len(powerset(e)) == 1 and len(ultrafilters(e)) == 0
    r = rel_compose(rel(q, FiniteSet.points(2), e, np.zeros((2, 0))),
                    rel(q, FiniteSet.points(2), FiniteSet.points(2), np.zeros((2, 2))))
    assert r.matrix.shape == (2, 0)
    t = rel_compose(rel(q, e, FiniteSet.points(2), np.zeros((0, 2))),
                    rel(q, FiniteSet.points(1), e, np.zeros((1, 0))))
    assert (t.matrix == q.bottom).all()


def test_vfunction_total():
    q = two_chain()
    X = FiniteSet.points(2)
    f = VFunction(X, q, (0, 1))
    assert f("b") == 1 and f.to_labels() == {"a": "0", "b": "1"}
    with pytest.raises(ValueError):
        VFunction(X, q, (0,))


def test_carriers_distinct():
    with pytest.raises(ValueError):
        FiniteSet(["a", "a"])


# -- the V-powerset monad ------------------------------------------------------------

def brute_mult(q, big, carrier):
    return [q.join_all(q.mul(w, s.vals[i]) for s, w in big.items()) for i in range(len(carrier))]


@pytest.mark.parametrize("desc", ["two_chain", "chain_frame:3", "cost_chain:1"])
def test_monad_laws_exhaustive(desc):
    q = parse_builtin(desc)
    pv = PVMonad(q)
    X = FiniteSet.points(2)
    vx = function_space(X, q)
    for sigma in vx:
        assert pv.mult(pv.yoneda(sigma, vx), X) == sigma
        assert pv.mult(pv.shriek(lambda x: pv.yoneda(x, X), sigma, vx), X) == sigma


@given(st.sampled_from(["two_chain", "chain_frame:3"]), st.randoms(use_true_random=False))
def test_monad_associativity_sampled(desc, rnd):
    q = parse_builtin(desc)
    pv = PVMonad(q)
    X = FiniteSet.points(2)
    vx = function_space(X, q)
    # a sparse element of V^(V^(V^X)): absent assignments are bottom
    mapping = {VMap(vx, [rnd.randrange(q.size) for _ in vx]): rnd.randrange(q.size)
               for _ in range(3)}
    lhs = pv.mult(pv.shriek(lambda s: pv.mult(s, X), mapping, vx), X)
    rhs = pv.mult(pv.mult(mapping, vx), X)
    assert lhs == rhs


def test_mult_matches_formula_over_three_chain():
    q = chain_frame(3)
    pv = PVMonad(q)
    X = FiniteSet.points(2)
    vx = function_space(X, q)
    for s1, s2 in itertools.product(vx, repeat=2):
        for w1, w2 in itertools.product(range(q.size), repeat=2):
            if s1 == s2:
                continue
            big = VMap(vx, [w1 if s == s1 else w2 if s == s2 else q.bottom for s in vx])
            assert list(pv.mult(big, X).vals) == brute_mult(q, big, X)


# -- ultrafilters --------------------------------------------------------------------

def test_principal_membership():
    X = FiniteSet.points(3)
    u = Ultrafilter("b", X)
    for a in X.subsets():
        assert (a in u) == ("b" in a)
    assert len(list(u.members())) == 4
    assert principal_generator(u.contains, X) == "b"


def test_ultrafilter_generator_must_belong():
    with pytest.raises(CapabilityError):
        Ultrafilter("z", FiniteSet.points(2))


def test_ultrafilter_naturality_all_maps():
    X = FiniteSet.points(3)
    mon = UltrafilterMonad()
    for image in itertools.product(X.items, repeat=3):
        f = dict(zip(X.items, image)).__getitem__
        for x in X:
            assert mon.fmap(f, mon.unit(x, X), X) == mon.unit(f(x), X)


def test_ultrafilter_multiplication():
    X = FiniteSet.points(2)
    ux = ultrafilters(X)
    mon = UltrafilterMonad()
    for u in ux:
        big = Ultrafilter(u, ux)
        assert mon.mult(big, X) == u


# -- alpha and beta ------------------------------------------------------------------

def test_alpha_examples():
    q = chain_frame(3)
    X = FiniteSet.points(2)
    sigma = VMap(X, [1, 2])
    a = alpha(q)
    assert a(frozenset([sigma]), frozenset(["a"])) == 1
    assert a(frozenset([sigma]), frozenset()) == q.top
    assert a(frozenset(), frozenset(["a"])) == q.bottom


@pytest.mark.parametrize("desc", ["two_chain", "chain_frame:3", "cost_chain:1"])
def test_beta_principal_value(desc):
    q = parse_builtin(desc)
    X = FiniteSet.points(2)
    vx = function_space(X, q)
    b = beta(q)
    for sigma in vx:
        for x in X:
            assert b(Ultrafilter(sigma, vx), Ultrafilter(x, X)) == sigma(x)


def test_beta_over_two_chain_is_boolean_extension():
    q = two_chain()
    for n in range(4):
        X = FiniteSet.points(n)
        vx = function_space(X, q)
        b = beta(q)
        for sigma in vx:
            for u in ultrafilters(X):
                members = {frozenset(y for y in X if sigma(y) == 1)}
                boolean = 1 if any(a in u for a in members) else 0
                assert b(Ultrafilter(sigma, vx), u) == boolean


@given(st.sampled_from(QUANTALES), st.integers(0, 3), st.randoms(use_true_random=False))
def test_beta_shortcut_agrees_with_literal(desc, n, rnd):
    q = parse_builtin(desc)
    X = FiniteSet.points(n)
    if n == 0:
        return
    vx = function_space(X, q) if q.size ** n <= 4096 else None
    sigma = VMap(X, [rnd.randrange(q.size) for _ in X])
    s = Ultrafilter(sigma, vx)
    for u in ultrafilters(X):
        assert beta(q)(s, u) == beta(q, shortcut=True)(s, u)


@pytest.mark.parametrize("desc", ["two_chain", "chain_frame:3"])
def test_alpha_lax_law(desc):
    rep = check_lax_law(alpha(parse_builtin(desc)), Budget(samples=200, seed=1))
    assert rep.ok, rep.violations[:2]
    assert all(v >= 1 for v in rep.checked.values())


def test_beta_lax_law():
    rep = check_lax_law(beta(two_chain()), Budget(samples=200, seed=1), sizes=(0, 1, 2))
    assert rep.ok, rep.violations[:2]


def test_corrupted_alpha_caught():
    rep = check_lax_law(corrupted_alpha(two_chain()), Budget(samples=200, seed=0))
    assert not rep.ok
    laws = set(rep.laws_violated())
    assert any(law.startswith(("c", "e", "(c", "(e")) for law in laws), laws
    assert rep.violations and rep.violations[0].witness


def test_lax_law_checker_deterministic():
    law = alpha(chain_frame(3))
    a = check_lax_law(law, Budget(samples=50, seed=3)).to_dict()
    b = check_lax_law(law, Budget(samples=50, seed=3)).to_dict()
    assert a == b


# -- lax extensions ------------------------------------------------------------------

def test_powerset_extension_of_identity():
    q = chain_frame(3)
    X = FiniteSet.points(3)
    ext = powerset_extension(identity_relation(X, q))
    for a in X.subsets():
        for b in X.subsets():
            assert (ext(a, b) == q.unit) == (b <= a)


@pytest.mark.parametrize("desc", ["two_chain", "chain_frame:3"])
def test_extension_matches_law(desc):
    q = parse_builtin(desc)
    rng = random.Random(0)
    for n, m in [(0, 1), (1, 2), (2, 2), (2, 1)]:
        X, Y = FiniteSet.points(n), FiniteSet(f"y{i}" for i in range(m))
        for _ in range(5):
            r = rel(q, X, Y, [[rng.randrange(q.size) for _ in Y] for _ in X])
            assert lax_extension(alpha(q), r) == powerset_extension(r)
            if n:
                assert lax_extension(beta(q), r) == ultrafilter_extension(r)


@pytest.mark.parametrize("desc", ["two_chain", "chain_frame:3"])
def test_law_round_trip(desc):
    q = parse_builtin(desc)
    for n in (1, 2):
        X = FiniteSet.points(n)
        back_alpha = law_from_extension(powerset_extension, PowersetMonad(), q, carrier=X)
        back_beta = law_from_extension(ultrafilter_extension, UltrafilterMonad(), q)
        vx = function_space(X, q)
        for s in powerset(vx):
            for a in X.subsets():
                assert back_alpha(s, a) == alpha(q)(s, a)
        for sigma in vx:
            for u in ultrafilters(X):
                assert back_beta(Ultrafilter(sigma, vx), u) == beta(q)(Ultrafilter(sigma, vx), u)


def test_round_trip_needs_carrier_for_empty_set():
    back = law_from_extension(powerset_extension, PowersetMonad(), two_chain())
    with pytest.raises(CapabilityError):
        back(frozenset(), frozenset())


def test_evaluation_relation():
    q = two_chain()
    X = FiniteSet.points(2)
    e = evaluation_relation(X, q)
    for sigma in function_space(X, q):
        for x in X:
            assert e(sigma, x) == sigma(x)


def test_graph_relation():
    q = chain_frame(3)
    X, Y = FiniteSet.points(2), FiniteSet(["u"])
    g = graph(lambda x: "u", X, Y, q)
    assert g("a", "u") == q.unit and g.converse()("u", "b") == q.unit


def test_render_uses_labels():
    q = chain_frame(3)
    X = FiniteSet.points(2)
    assert render(VMap(X, [0, 2]), q) == {"a": "0", "b": "2"}
    assert render(frozenset(["b", "a"])) == ["a", "b"]
    assert render(Ultrafilter("a", X)) == {"principal": "a"}
