from fractions import Fraction
import itertools

import pytest
from hypothesis import given, strategies as st

from vapproach import oracles
from vapproach.lattice import (MonotoneMap, Quantale, adjoints, check_coprime_decomposition,
                               check_quantale, classify_hom, constant_map, coprimes,
                               identity_map, is_ccd, totally_below)
from vapproach.quantales import (chain_frame, corrupted_three_chain, cost_chain, cost_grid,
                                 delta_grid, delta_sigma, delta_tau, describe, diamond,
                                 diamond_meet, downset, parse_builtin, small_delta_grid,
                                 terminal, two_chain, unit_grid)
from vapproach.report import NotMonotoneError, QuantaleStructureError
from vapproach.base_change import standard_maps

BUILTINS = ["terminal", "two_chain", "chain_frame:3", "chain_frame:4", "cost_chain:1",
            "cost_chain:3", "cost_grid:0,1,2", "unit_grid:2:min", "unit_grid:4:lukasiewicz",
            "value_chain:0,1/3,1:min", "delta_grid:0,1:0,1/2,1:lukasiewicz",
            "delta_grid:0,1,2:0,1:min", "downset:chain_frame:3", "downset:cost_chain:1",
            "diamond"]


def leq_matrix(q):
    return [[q.le(a, b) for b in range(q.size)] for a in range(q.size)]


def el(q, label):
    return q.index(label)


@pytest.mark.parametrize("desc", BUILTINS)
def test_builtins_are_quantales(desc):
    assert check_quantale(parse_builtin(desc)) == []


@pytest.mark.parametrize("desc", [d for d in BUILTINS if d != "diamond"])
def test_builtins_ccd_and_integral(desc):
    q = parse_builtin(desc)
    assert is_ccd(q)
    assert q.is_integral


def test_two_chain_tables():
    q = two_chain()
    assert q.labels == ("0", "1")
    assert [[q.mul(a, b) for b in range(2)] for a in range(2)] == [[0, 0], [0, 1]]
    assert q.unit == q.top


def test_cost_chain_reversed_order_and_truncated_sum():
    q = cost_chain(3)
    assert q.labels == ("0", "1", "2", "3", "inf")
    assert q.label(q.top) == "0" and q.label(q.bottom) == "inf"
    assert q.label(q.unit) == "0"
    assert q.le(el(q, "3"), el(q, "1"))
    assert q.label(q.mul(el(q, "1"), el(q, "2"))) == "3"
    assert q.label(q.mul(el(q, "2"), el(q, "2"))) == "inf"
    assert q.label(q.join(el(q, "1"), el(q, "2"))) == "1"


def test_corrupted_tensor_reported_with_witness():
    found = check_quantale(corrupted_three_chain())
    laws = {v.law for v in found}
    assert laws & {"tensor.monotone", "tensor.join_left", "tensor.join_right"}
    w = found[0].witness
    assert set(w) >= {"a", "b"} and all(isinstance(v, str) for v in w.values())


def test_malformed_table_is_structural_error():
    with pytest.raises(QuantaleStructureError):
        Quantale.from_tables(["a", "b"], [["a", "b"]], [["a", "a", "a"]], "b")
    with pytest.raises(QuantaleStructureError):
        Quantale.from_tables(["a"], [], [["a", "zzz", "a"]], "a")


def test_explicit_tables_round_trip():
    q = Quantale.from_tables(["0", "1"], [["0", "0"], ["0", "1"], ["1", "1"]],
                             [["0", "0", "0"], ["0", "1", "0"], ["1", "0", "0"],
                              ["1", "1", "1"]], "1")
    assert check_quantale(q) == []
    assert q.leq.tolist() == two_chain().leq.tolist()


def test_totally_below_examples():
    q = chain_frame(3)
    assert not totally_below(q, el(q, "0"), el(q, "0"))
    assert totally_below(q, el(q, "1"), el(q, "2"))
    t = two_chain()
    assert totally_below(t, 1, 1)


@pytest.mark.parametrize("desc", ["two_chain", "chain_frame:3", "cost_chain:2", "diamond",
                                  "diamond_meet", "downset:chain_frame:3",
                                  "delta_grid:0,1:0,1/2,1:lukasiewicz"])
def test_totally_below_matches_bruteforce(desc):
    q = parse_builtin(desc)
    leq = leq_matrix(q)
    for u, v in itertools.product(range(q.size), repeat=2):
        assert totally_below(q, u, v) == oracles.totally_below_bruteforce(leq, u, v), (u, v)


def test_m3_not_ccd():
    q = diamond()
    assert not is_ccd(q)
    below_top = [u for u in range(q.size) if totally_below(q, u, q.top)]
    assert q.join_all(below_top) == q.bottom


@pytest.mark.parametrize("desc", ["two_chain", "chain_frame:3", "cost_chain:3", "diamond",
                                  "downset:chain_frame:3", "unit_grid:3:min",
                                  "delta_grid:0,1:0,1/2,1:lukasiewicz"])
def test_coprimes_match_bruteforce(desc):
    q = parse_builtin(desc)
    assert set(coprimes(q)) == oracles.coprimes_bruteforce(leq_matrix(q))


def test_coprime_examples():
    q = chain_frame(3)
    assert {q.label(p) for p in coprimes(q)} == {"1", "2"}
    assert [two_chain().label(p) for p in coprimes(two_chain())] == ["1"]


def test_delta_coprimes_are_single_jumps():
    q = small_delta_grid()
    cost = parse_builtin("cost_chain:1")
    expected = set()
    for a in range(cost.size):
        alpha = Fraction(int(cost.label(a))) if cost.label(a) != "inf" else float("inf")
        for u in (Fraction(1, 2), Fraction(1)):
            expected.add(q.mul(delta_sigma(q, alpha), delta_tau(q, u)))
    expected.discard(q.bottom)
    assert set(coprimes(q)) == expected


@pytest.mark.parametrize("desc", [d for d in BUILTINS if d != "diamond"])
def test_coprime_decomposition(desc):
    assert not check_coprime_decomposition(parse_builtin(desc))


def test_delta_presentation_by_sigma_tau():
    q = small_delta_grid()
    times = [Fraction(t) for t in q.params["times"]]
    for i, vec in enumerate(q.payload):
        parts = [q.mul(delta_sigma(q, a), delta_tau(q, vec[k])) for k, a in enumerate(times)]
        assert q.join_all(parts) == i


def test_delta_grid_examples():
    q = parse_builtin("delta_grid:0,1,inf:0,1/2,1:lukasiewicz")
    s1, half = delta_sigma(q, 1), delta_tau(q, Fraction(1, 2))
    assert q.label(q.mul(s1, half)) == "(0,1/2)"
    assert q.mul(s1, s1) == q.bottom
    assert q.label(q.unit) == "(1,1)"


def test_delta_grid_refuses_open_time_grid():
    with pytest.raises(QuantaleStructureError, match="1 \\+ 1"):
        delta_grid([0, 1, 3], [0, 1])


def test_unit_grid_refuses_product():
    with pytest.raises(QuantaleStructureError):
        unit_grid(3, "product")


def test_downset_of_chain_is_longer_chain():
    d = downset(chain_frame(3))
    assert d.size == 4
    assert d.label(d.unit) == "{0,1,2}"
    assert all(d.le(a, b) or d.le(b, a) for a in range(4) for b in range(4))


def test_downset_integral_iff_base():
    for base in (chain_frame(3), cost_chain(2), diamond()):
        assert downset(base).is_integral == base.is_integral
    assert not diamond().is_integral


def test_terminal_is_one_point():
    q = terminal()
    assert q.size == 1 and check_quantale(q) == []


def test_iota_adjoints():
    for q in (chain_frame(3), cost_chain(2), small_delta_grid()):
        maps = standard_maps("iota_pi_o", q)
        left, right = adjoints(maps["iota"])
        assert right.table == maps["pi"].table
        assert left.table == maps["o"].table
        for v in range(q.size):
            assert right(v) == (1 if q.le(q.unit, v) else 0)
            assert left(v) == (0 if v == q.bottom else 1)


def test_constant_top_has_no_right_adjoint():
    # it sends the bottom to the top, so no join-preservation; meets are kept
    q = chain_frame(3)
    left, right = adjoints(constant_map(q, q, "2"))
    assert right is None
    assert left.table == (q.bottom,) * q.size
    lefts, rights = oracles.galois_partners(leq_matrix(q), leq_matrix(q), [q.top] * q.size)
    assert rights == [] and lefts == [left.table]


def test_reflexive_pairs_are_required():
    bad = Quantale.from_tables(["0", "1"], [["0", "1"]],
                               [["0", "0", "0"], ["0", "1", "0"], ["1", "0", "0"],
                                ["1", "1", "1"]], "1")
    assert {v.law for v in check_quantale(bad)} == {"order.reflexive"}


@pytest.mark.parametrize("desc", ["two_chain", "chain_frame:3", "cost_chain:2"])
def test_adjoints_match_galois_search(desc):
    q = parse_builtin(desc)
    leq = leq_matrix(q)
    for table in itertools.product(range(q.size), repeat=q.size):
        f = MonotoneMap(q, q, table, "f")
        if not f.is_monotone():
            with pytest.raises(NotMonotoneError):
                adjoints(f)
            continue
        lefts, rights = oracles.galois_partners(leq, leq, table)
        left, right = adjoints(f)
        assert ([left.table] if left else []) == lefts
        assert ([right.table] if right else []) == rights


def test_classify_examples():
    delta = small_delta_grid()
    fam = standard_maps("sigma_tau_rho_lambda", delta)
    assert classify_hom(fam["sigma"]).is_hom
    down = standard_maps("downset_triple", chain_frame(3))["downset.down"]
    c = classify_hom(down)
    assert c.is_lax_hom and not c.is_hom
    pi = standard_maps("iota_pi_o", chain_frame(3))["pi"]
    assert classify_hom(pi).is_lax_hom
    assert classify_hom(identity_map(delta)).is_hom


@pytest.mark.parametrize("desc", ["two_chain", "chain_frame:3", "cost_chain:1"])
def test_classify_flags_agree_with_bruteforce(desc):
    q = parse_builtin(desc)
    pairs = list(itertools.product(range(q.size), repeat=2))
    for table in itertools.product(range(q.size), repeat=q.size):
        f = MonotoneMap(q, q, table, "f")
        if not f.is_monotone():
            continue
        c = classify_hom(f)
        joins = all(f(q.join(a, b)) == q.join(f(a), f(b)) for a, b in pairs) and \
            f(q.bottom) == q.bottom
        lax = q.le(q.unit, f(q.unit)) and all(q.le(q.mul(f(a), f(b)), f(q.mul(a, b)))
                                               for a, b in pairs)
        strict = joins and f(q.unit) == q.unit and all(
            q.mul(f(a), f(b)) == f(q.mul(a, b)) for a, b in pairs)
        assert (c.preserves_joins, c.is_lax_hom, c.is_hom) == (joins, lax, strict)
        assert not c.is_hom or c.is_lax_hom


def test_describe_round_trip():
    for d in BUILTINS:
        q = parse_builtin(d)
        assert parse_builtin(describe(q)) == q


def test_unknown_descriptor():
    with pytest.raises(QuantaleStructureError):
        parse_builtin("nope:3")
    with pytest.raises(QuantaleStructureError):
        parse_builtin("chain_frame:x")


@given(st.integers(1, 6), st.sampled_from(["min", "lukasiewicz"]))
def test_unit_grids_are_integral_ccd_quantales(m, tnorm):
    q = unit_grid(m, tnorm)
    assert check_quantale(q) == [] and q.is_integral and is_ccd(q)


@given(st.integers(1, 4))
def test_cost_chains_are_quantales(m):
    q = cost_chain(m)
    assert check_quantale(q) == [] and is_ccd(q)
    assert set(coprimes(q)) == set(range(q.size)) - {q.bottom}


@given(st.lists(st.sampled_from(["0", "1", "2"]), min_size=3, max_size=3))
def test_monotone_maps_on_three_chain_are_detected(labels):
    q = chain_frame(3)
    table = tuple(q.index(x) for x in labels)
    f = MonotoneMap(q, q, table, "f")
    assert f.is_monotone() == (table[0] <= table[1] <= table[2])


def test_cost_grid_closed():
    assert check_quantale(cost_grid([0, 1, 2])) == []
