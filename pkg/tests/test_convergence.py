import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from vapproach import oracles
from vapproach.convergence import (ConvergenceStructure, a_epsilon, beta_algebra_ok,
                                   check_algebraic_morphism_epsilon, check_beta_algebra,
                                   check_m2, check_probapp_convergence, contractive_fast,
                                   enumerate_beta_algebras, m2_fast, non_approach_witness,
                                   r_functor, ultrafilter_monad, verify_main_theorem)
from vapproach.quantales import (chain_frame, cost_chain, delta_tau, parse_builtin,
                                 small_delta_grid, two_chain)
from vapproach.report import Budget, BudgetExceeded, CapabilityError
from vapproach.spaces import (DistanceStructure, SpaceMap, check_closure, check_contractive,
                              closure_hull, enumerate_structures, is_approach)
from vapproach.vrel import FiniteSet, Ultrafilter

Q_SMALL = ["two_chain", "chain_frame:3", "cost_chain:2", "delta_grid:0,1:0,1/2,1:lukasiewicz"]


@st.composite
def ell_tables(draw, descs=Q_SMALL, max_n=3):
    q = parse_builtin(draw(st.sampled_from(descs)))
    n = draw(st.integers(0, max_n))
    vals = draw(st.lists(st.integers(0, q.size - 1), min_size=n * n, max_size=n * n))
    return q, FiniteSet.points(n), np.array(vals, dtype=np.int64).reshape(n, n)


@st.composite
def closure_structures(draw, descs=Q_SMALL, max_n=2):
    q = parse_builtin(draw(st.sampled_from(descs)))
    n = draw(st.integers(0, max_n))
    cells = (1 << n) * n
    vals = draw(st.lists(st.integers(0, q.size - 1), min_size=cells, max_size=cells))
    raw = np.array(vals, dtype=np.int64).reshape(1 << n, n)
    return DistanceStructure(FiniteSet.points(n), q, closure_hull(q, raw))


# -- the ultrafilter monad -----------------------------------------------------------

def test_naturality_of_dot_for_all_maps():
    X = FiniteSet.points(3)
    ops = ultrafilter_monad(X)
    for image in itertools.product(X.items, repeat=3):
        f = dict(zip(X.items, image)).__getitem__
        for x in X:
            assert ops.image(f, ops.dot(x), X) == ops.dot(f(x))


def test_monad_laws_on_principal_filters():
    X = FiniteSet.points(2)
    ops = ultrafilter_monad(X)
    for u in ops.ux:
        assert ops.sigma(Ultrafilter(u, ops.ux)) == u
        assert ops.sigma(ops.image(ops.dot, u, ops.ux)) == u


# -- (R''), (T'') --------------------------------------------------------------------

def test_discrete_passes():
    for q in (two_chain(), chain_frame(3), cost_chain(3), small_delta_grid()):
        assert check_beta_algebra(ConvergenceStructure.discrete(FiniteSet.points(2), q)).ok


def test_all_bottom_fails_reflexivity():
    q = chain_frame(3)
    s = ConvergenceStructure(FiniteSet.points(2), q, np.zeros((2, 2)))
    assert "R''" in check_beta_algebra(s).laws_violated()


def test_triangle_violation_over_cost_chain():
    q = cost_chain(3)
    X = FiniteSet(["x", "y", "z"])
    d = [["0", "1", "inf"], ["1", "0", "1"], ["inf", "1", "0"]]
    s = ConvergenceStructure(X, q, [[q.index(v) for v in row] for row in d])
    rep = check_beta_algebra(s)
    assert rep.laws_violated() == ["T''"]
    assert {"X", "y", "z", "lhs", "rhs"} <= set(rep.violations[0].witness)


def test_two_point_triangle_violation():
    q = cost_chain(3)
    s = ConvergenceStructure(FiniteSet.points(2), q, [[q.index("1"), 0], [0, 0]])
    assert not check_beta_algebra(s).ok


@given(ell_tables())
def test_fast_beta_check_matches_literal(data):
    q, X, ell = data
    assert check_beta_algebra(ConvergenceStructure(X, q, ell)).ok == beta_algebra_ok(q, ell)


# -- A_eps and R ---------------------------------------------------------------------

def test_a_epsilon_of_discrete_is_membership():
    for q in (chain_frame(3), cost_chain(2)):
        X = FiniteSet.points(3)
        assert a_epsilon(ConvergenceStructure.discrete(X, q)) == \
            DistanceStructure.membership(X, q)


@given(ell_tables())
def test_a_epsilon_empty_set_is_bottom(data):
    q, X, ell = data
    d = a_epsilon(ConvergenceStructure(X, q, ell))
    assert (d.table[0] == q.bottom).all()


def test_a_epsilon_over_cost_chain_is_minimum():
    q = cost_chain(3)
    X = FiniteSet.points(3)
    ell = [[0, 2, 3], [1, 0, 4], [4, 2, 0]]
    d = a_epsilon(ConvergenceStructure(X, q, ell))
    num = lambda i: float("inf") if q.label(i) == "inf" else int(q.label(i))  # noqa: E731
    for a in X.subsets():
        for j, x in enumerate(X):
            expected = min((num(ell[X.pos[y]][j]) for y in a), default=float("inf"))
            assert num(d(a, x)) == expected


def test_r_of_membership_is_discrete():
    q = chain_frame(3)
    X = FiniteSet.points(2)
    assert r_functor(DistanceStructure.membership(X, q)) == ConvergenceStructure.discrete(X, q)


def test_sierpinski_convergence():
    q = two_chain()
    X = FiniteSet(["open", "closed"])
    # {open} is not closed: its closure is X; {closed} is closed
    s = DistanceStructure.from_point_matrix(X, q, [[1, 1], [0, 1]])
    ell = r_functor(s)
    for y in X:
        closure = {x for x in X if s([y], x) == 1}
        for x in X:
            assert (ell(y, x) == 1) == (x in closure)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_two_chain_convergence_is_topological(n):
    X = FiniteSet.points(n)
    for s in enumerate_structures(X, two_chain(), "approach"):
        ell = r_functor(s)
        for y in X:
            for x in X:
                assert (ell(y, x) == 1) == (s([y], x) == 1)


@given(closure_structures(descs=["chain_frame:3", "cost_chain:2"]))
def test_r_of_closure_is_beta_algebra(s):
    assert check_beta_algebra(r_functor(s)).ok


@given(closure_structures())
def test_coreflection_inequality(s):
    back = a_epsilon(r_functor(s))
    assert back.leq(s)
    assert (back == s) == is_approach(s)[0]


@given(ell_tables(max_n=3))
def test_r_after_a_epsilon_is_identity_on_algebras(data):
    q, X, ell = data
    if not beta_algebra_ok(q, ell):
        return
    t = ConvergenceStructure(X, q, ell)
    assert r_functor(a_epsilon(t)) == t
    assert is_approach(a_epsilon(t))[0]


def test_non_approach_witness_is_strict():
    q = chain_frame(3)
    s, back, diff = non_approach_witness(q)
    assert check_closure(s).ok and not is_approach(s)[0]
    assert back.leq(s) and back != s
    assert diff == [[[], "a", "2", "0"]]


# -- morphisms -----------------------------------------------------------------------

@st.composite
def map_instances(draw):
    desc = draw(st.sampled_from(Q_SMALL))
    s = draw(closure_structures(descs=[desc]))
    t = draw(closure_structures(descs=[desc]).filter(lambda t: t.n or not s.n))
    f = tuple(draw(st.integers(0, t.n - 1)) for _ in range(s.n))
    return s, t, f


@given(map_instances())
def test_fast_contractive_matches_literal(data):
    s, t, f = data
    assert contractive_fast(s.quantale, s.table, t.table, f) == \
        check_contractive(SpaceMap(s, t, f))[0]


@given(map_instances())
def test_fast_m2_matches_literal(data):
    s, t, f = data
    a, b = r_functor(s), r_functor(t)
    assert m2_fast(s.quantale, a.ell, b.ell, f) == check_m2(a, b, f)[0]


@given(map_instances())
def test_hom_set_bijection(data):
    s, t, f = data
    conv = r_functor(s)
    assert check_contractive(SpaceMap(a_epsilon(conv), t, f))[0] == \
        check_m2(conv, r_functor(t), f)[0]


# -- enumeration and the main theorem ------------------------------------------------

@pytest.mark.parametrize("n,count", [(0, 1), (1, 1), (2, 4), (3, 29)])
def test_beta_algebra_counts_over_two_chain(n, count):
    found, exhaustive = enumerate_beta_algebras(FiniteSet.points(n), two_chain())
    assert exhaustive and len(found) == count == len(oracles.finite_topologies(n))


def test_beta_enumeration_budget():
    with pytest.raises(BudgetExceeded):
        enumerate_beta_algebras(FiniteSet.points(3), chain_frame(3), bound=10)
    found, exhaustive = enumerate_beta_algebras(FiniteSet.points(3), chain_frame(3), bound=10,
                                                budget=Budget(samples=25, seed=2))
    assert not exhaustive and 0 < len(found) <= 25
    assert all(check_beta_algebra(s).ok for s in found)


def test_main_theorem_two_chain():
    rep, counts = verify_main_theorem(two_chain(), Budget(max_exhaustive_size=3),
                                      sizes=(0, 1, 2, 3))
    assert rep.ok, rep.violations[:2]
    assert counts[3]["approach"] == counts[3]["beta"] == 29
    assert counts[2]["approach"] == counts[2]["beta"] == 4


def test_main_theorem_three_chain_exhaustive():
    rep, counts = verify_main_theorem(chain_frame(3), Budget(max_exhaustive_size=2),
                                      sizes=(0, 1, 2))
    assert rep.ok and all(rep.exhaustive.values())


def test_main_theorem_deterministic():
    args = (cost_chain(1), Budget(max_exhaustive_size=1, samples=20, seed=7), (1, 2))
    assert verify_main_theorem(*args)[0].to_dict() == verify_main_theorem(*args)[0].to_dict()


def test_algebraic_morphism_conditions():
    rep = check_algebraic_morphism_epsilon(chain_frame(3), Budget(samples=50, seed=1),
                                           sizes=(0, 1, 2))
    assert rep.ok, rep.violations[:2]
    assert set(rep.checked) == {"a", "b", "c", "d", "e"}
    rep2 = check_algebraic_morphism_epsilon(two_chain(), Budget(samples=50, seed=1),
                                            sizes=(0, 1, 2))
    assert rep2.ok and rep2.exhaustive["e"]


# -- probabilistic approach, convergence form ----------------------------------------

def test_probapp_convergence_examples():
    q = small_delta_grid()
    X = FiniteSet.points(2)
    assert check_probapp_convergence(ConvergenceStructure.discrete(X, q)).ok
    half = delta_tau(q, "1/2")
    s = ConvergenceStructure(X, q, [[q.top, half], [half, q.top]])
    assert check_probapp_convergence(s).ok
    d = a_epsilon(s)
    assert d == DistanceStructure.from_point_matrix(X, q, [[q.top, half], [half, q.top]])


def test_probapp_convergence_rejects_intransitive():
    q = small_delta_grid()
    X = FiniteSet.points(3)
    ell = [[q.top, q.top, q.bottom], [q.bottom, q.top, q.top], [q.bottom, q.bottom, q.top]]
    rep = check_probapp_convergence(ConvergenceStructure(X, q, ell))
    assert rep.laws_violated() == ["T''"]


def test_probapp_convergence_needs_delta():
    with pytest.raises(CapabilityError):
        check_probapp_convergence(ConvergenceStructure.discrete(FiniteSet.points(1), two_chain()))


@pytest.mark.parametrize("desc", ["chain_frame:3", "cost_chain:1"])
def test_vectorized_hom_block_matches_literal(desc):
    from vapproach.convergence import _hom_block
    q = parse_builtin(desc)
    X, Y = FiniteSet.points(2), FiniteSet.points(2)
    closures = list(enumerate_structures(X, q, "closure"))[:12]
    betas = enumerate_beta_algebras(Y, q)[0][:12]
    r_of = [r_functor(s) for s in closures]
    a_of = [a_epsilon(t) for t in betas]
    for f in itertools.product(range(2), repeat=2):
        left, right = _hom_block(q, np.stack([c.table for c in closures]),
                                 np.stack([r.ell for r in r_of]),
                                 np.stack([d.table for d in a_of]),
                                 np.stack([t.ell for t in betas]), f, chunk=64)
        for i, s in enumerate(closures):
            for j, t in enumerate(betas):
                assert left[i, j] == check_contractive(SpaceMap(a_of[j], s, f))[0]
                assert right[i, j] == check_m2(t, r_of[i], f)[0]
