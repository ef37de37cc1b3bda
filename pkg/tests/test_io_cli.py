import json
import subprocess
import sys
from importlib import resources
from pathlib import Path

import jsonschema
import pytest
from hypothesis import given, strategies as st

from vapproach.cli import main
from vapproach.convergence import ConvergenceStructure
from vapproach.io import (ParseError, builtin_map, dumps, load_any, load_map, load_quantale,
                          load_structure, map_to_obj, quantale_to_obj, structure_from_obj,
                          structure_to_obj)
from vapproach.quantales import (chain_frame, corrupted_three_chain, parse_builtin,
                                 small_delta_grid, two_chain)
from vapproach.report import CapabilityError
from vapproach.spaces import DistanceStructure, closure_hull, to_tower
from vapproach.vrel import FiniteSet

ROOT = Path(__file__).resolve().parents[1]
SCHEMA = json.loads(resources.files("vapproach").joinpath("report.schema.json").read_text())


def write(path, obj):
    path.write_text(json.dumps(obj), encoding="utf-8")
    return str(path)


def run(argv, capsys):
    code = main(argv + ["--format", "json"])
    report = json.loads(capsys.readouterr().out)
    jsonschema.validate(report, SCHEMA)
    assert report["exit_code"] == code
    return code, report


def sierpinski_obj():
    return {"type": "space", "quantale": "two_chain", "carrier": ["open", "closed"],
            "presentation": "distance",
            "table": [[[], {"open": "0", "closed": "0"}],
                      [["open"], {"open": "1", "closed": "1"}],
                      [["closed"], {"open": "0", "closed": "1"}],
                      [["closed", "open"], {"open": "1", "closed": "1"}]]}


@pytest.fixture
def files(tmp_path):
    q = tmp_path / "two.json"
    write(q, {"builtin": "two_chain"})
    bad = corrupted_three_chain()
    corrupt = tmp_path / "corrupt.json"
    write(corrupt, quantale_to_obj(bad))
    sierp = tmp_path / "sierp.json"
    write(sierp, sierpinski_obj())
    dangling = tmp_path / "dangling.json"
    obj = sierpinski_obj()
    obj["quantale"] = {"file": "missing.json"}
    write(dangling, obj)
    three = chain_frame(3)
    gap = DistanceStructure.constant(FiniteSet.points(2), three, three.top)
    nonapp = tmp_path / "nonapp.json"
    write(nonapp, structure_to_obj(gap))
    return {"quantale": str(q), "corrupt": str(corrupt), "sierp": str(sierp),
            "dangling": str(dangling), "nonapp": str(nonapp), "dir": tmp_path}


def test_schema_shipped_in_docs_matches_package():
    assert json.loads((ROOT / "docs" / "report.schema.json").read_text()) == SCHEMA
    jsonschema.Draft202012Validator.check_schema(SCHEMA)


# -- file formats --------------------------------------------------------------------

@pytest.mark.parametrize("desc", ["two_chain", "chain_frame:3", "cost_chain:3",
                                  "unit_grid:4:lukasiewicz",
                                  "delta_grid:0,1:0,1/2,1:lukasiewicz",
                                  "downset:chain_frame:3", "diamond"])
def test_quantale_descriptor_round_trip(desc):
    q = parse_builtin(desc)
    assert parse_builtin(quantale_to_obj(q)) == q


def test_explicit_quantale_round_trip(tmp_path):
    q = corrupted_three_chain()
    path = tmp_path / "q.json"
    write(path, quantale_to_obj(q))
    back = load_quantale(path)
    assert back.labels == q.labels
    assert back.leq.tolist() == q.leq.tolist()
    assert back.tensor_table.tolist() == q.tensor_table.tolist()


def test_keyword_builtin(tmp_path):
    path = tmp_path / "q.json"
    write(path, {"builtin": "downset", "base": {"builtin": "chain_frame", "n": 3}})
    assert load_quantale(path) == parse_builtin("downset:chain_frame:3")
    write(path, {"builtin": "cost_chain", "m": 2})
    assert load_quantale(path) == parse_builtin("cost_chain:2")


def test_parse_errors_carry_location(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"type": "space",\n  "carrier": [}', encoding="utf-8")
    with pytest.raises(ParseError, match=r"broken.json:2:\d+"):
        load_structure(path)


@pytest.mark.parametrize("mutate,message", [
    (lambda o: o.pop("quantale"), "missing quantale"),
    (lambda o: o["table"].pop(), "not total"),
    (lambda o: o["table"][1][1].update(open="7"), "unknown quantale element"),
    (lambda o: o["table"][1].__setitem__(0, ["nowhere"]), "unknown point"),
    (lambda o: o.update(presentation="matrix"), "unknown presentation"),
    (lambda o: o.update(carrier=["a", "a"]), "distinct"),
])
def test_bad_space_files(tmp_path, mutate, message):
    obj = sierpinski_obj()
    mutate(obj)
    with pytest.raises(ParseError, match=message):
        structure_from_obj(obj, tmp_path, "space.json")


@given(st.sampled_from(["two_chain", "chain_frame:3", "cost_chain:1"]), st.integers(0, 3),
       st.randoms(use_true_random=False))
def test_structure_round_trips(desc, n, rnd):
    q = parse_builtin(desc)
    X = FiniteSet.points(n)
    raw = [[rnd.randrange(q.size) for _ in X] for _ in range(1 << n)]
    s = DistanceStructure(X, q, closure_hull(q, raw))
    assert structure_from_obj(json.loads(dumps(structure_to_obj(s)))) == s
    t = to_tower(s)
    assert structure_from_obj(json.loads(dumps(structure_to_obj(t)))) == t
    c = ConvergenceStructure(X, q, [[rnd.randrange(q.size) for _ in X] for _ in X])
    assert structure_from_obj(json.loads(dumps(structure_to_obj(c)))) == c


def test_map_files(tmp_path):
    q = chain_frame(3)
    rho = builtin_map("rho", small_delta_grid())
    path = tmp_path / "rho.json"
    write(path, map_to_obj(rho))
    assert load_map(path).table == rho.table
    write(path, {"type": "map", "builtin": "iota", "target": "chain_frame:3"})
    assert load_map(path).target == q
    write(path, {"type": "map", "source": "two_chain", "target": "chain_frame:3",
                 "table": {"0": "0", "1": "2"}})
    assert load_any(path)[0] == "map"


def test_builtin_map_requirements():
    with pytest.raises(CapabilityError):
        builtin_map("iota")
    with pytest.raises(CapabilityError):
        builtin_map("downset.sup", chain_frame(3))
    with pytest.raises(CapabilityError):
        builtin_map("teleport", two_chain())


# -- check ---------------------------------------------------------------------------

def test_check_valid_quantale(files, capsys):
    code, rep = run(["check", files["quantale"]], capsys)
    assert code == 0 and rep["status"] == "pass"
    assert rep["results"][0]["info"]["integral"] is True


def test_check_corrupted_quantale(files, capsys):
    code, rep = run(["check", files["corrupt"]], capsys)
    assert code == 1
    w = rep["results"][0]["violations"][0]["witness"]
    assert {"a", "b", "c"} <= set(w) and all(isinstance(v, str) for v in w.values())


def test_check_dangling_reference(files, capsys):
    code, rep = run(["check", files["dangling"]], capsys)
    assert code == 2 and "missing.json" in rep["error"]


def test_check_builtin_and_modes(files, capsys):
    assert run(["check", "--builtin", "cost_chain:3"], capsys)[0] == 0
    assert run(["check", "--quantale", files["quantale"]], capsys)[0] == 0
    for mode in ("closure", "approach", "approach_ll", "approach_coprime"):
        assert run(["check", files["sierp"], "--mode", mode], capsys)[0] == 0
    code, rep = run(["check", files["nonapp"], "--mode", "approach"], capsys)
    assert code == 1 and rep["results"][1]["violations"][0]["witness"]["law"] == "empty"


def test_check_probapp_and_convergence(tmp_path, capsys):
    q = small_delta_grid()
    s = DistanceStructure.membership(FiniteSet.points(2), q)
    path = write(tmp_path / "p.json", structure_to_obj(s))
    code, rep = run(["check", path], capsys)
    assert code == 0 and any("PD1" in r["checked"] for r in rep["results"])
    conv = ConvergenceStructure.discrete(FiniteSet.points(2), chain_frame(3))
    path = write(tmp_path / "c.json", structure_to_obj(conv))
    assert run(["check", path], capsys)[0] == 0


def test_check_map_file(tmp_path, capsys):
    path = write(tmp_path / "m.json", {"type": "map", "source": "chain_frame:3",
                                       "target": "chain_frame:3",
                                       "table": {"0": "2", "1": "1", "2": "0"}})
    code, rep = run(["check", path], capsys)
    assert code == 1 and rep["results"][0]["violation_counts"]
    path = write(tmp_path / "m2.json", {"type": "map", "builtin": "pi",
                                        "quantale": "chain_frame:3"})
    code, rep = run(["check", path], capsys)
    assert code == 0 and rep["results"][0]["info"]["lax_hom"] is True


def test_check_needs_target(capsys):
    assert run(["check"], capsys)[0] == 2


# -- convert -------------------------------------------------------------------------

def test_convert_membership_round_trip(tmp_path, capsys):
    s = DistanceStructure.membership(FiniteSet.points(2), chain_frame(3))
    src = write(tmp_path / "m.json", structure_to_obj(s))
    tower = tmp_path / "t.json"
    back = tmp_path / "d.json"
    assert run(["convert", src, "--to", "tower", "--output", str(tower)], capsys)[0] == 0
    assert run(["convert", str(tower), "--to", "distance", "--output", str(back)], capsys)[0] == 0
    assert back.read_text() == dumps(structure_to_obj(s))


def test_convert_non_approach_is_lossy(files, capsys):
    code, rep = run(["convert", files["nonapp"], "--to", "convergence"], capsys)
    assert code == 0
    rt = rep["round_trip"]
    assert rt["approach"] is False and rt["lossless"] is False
    diffs = rt["differences [A, x, input, round trip]"]
    assert [d[0] for d in diffs] == [[], []] and {d[3] for d in diffs} == {"0"}


def test_convert_sierpinski_to_convergence(files, capsys):
    code, rep = run(["convert", files["sierp"], "--to", "convergence"], capsys)
    assert code == 0
    table = {(g, y): v for g, y, v in rep["output"]["table"]}
    assert table[("open", "closed")] == "1" and table[("closed", "open")] == "0"
    assert rep["round_trip"]["lossless"] is True


def test_convert_rejects_non_closure(tmp_path, capsys):
    q = chain_frame(3)
    s = DistanceStructure.constant(FiniteSet.points(2), q, q.bottom)
    path = write(tmp_path / "bad.json", structure_to_obj(s))
    code, rep = run(["convert", path, "--to", "convergence"], capsys)
    assert code == 1 and rep["results"][0]["violations"][0]["law"] == "R'"


# -- basechange ----------------------------------------------------------------------

def test_basechange_iota_reflect(files, capsys):
    code, rep = run(["basechange", files["sierp"], "--map", "iota", "--target", "chain_frame:3",
                     "--reflect"], capsys)
    assert code == 0 and rep["results"][0]["info"]["approach"] is True
    assert rep["output"]["quantale"] == "chain_frame:3"


def test_basechange_sigma_then_rho_is_identity(tmp_path, capsys):
    cost = parse_builtin("cost_chain:1")
    s = DistanceStructure.from_point_matrix(FiniteSet.points(2), cost, [[0, 1], [2, 0]])
    path = write(tmp_path / "c.json", structure_to_obj(s))
    code, rep = run(["basechange", path, "--map", "sigma", "--target",
                     "delta_grid:0,1:0,1/2,1:lukasiewicz", "--map", "rho"], capsys)
    assert code == 0 and rep["output"] == structure_to_obj(s)


def test_basechange_rho_on_delta_structure(tmp_path, capsys):
    q = small_delta_grid()
    s = DistanceStructure.membership(FiniteSet.points(2), q)
    path = write(tmp_path / "d.json", structure_to_obj(s))
    code, rep = run(["basechange", path, "--map", "rho"], capsys)
    assert code == 0 and rep["output"]["quantale"] == "cost_chain:1"


def test_basechange_mismatch(files, capsys):
    code, rep = run(["basechange", files["sierp"], "--map", "rho"], capsys)
    assert code == 2


# -- verify --------------------------------------------------------------------------

def test_verify_tower_bijection(capsys):
    code, rep = run(["verify", "tower-bijection", "--max-exhaustive-size", "2"], capsys)
    assert code == 0 and len(rep["results"]) == 2


def test_verify_topology_counts(capsys):
    code, rep = run(["verify", "topology-counts"], capsys)
    assert code == 0
    counts = rep["results"][0]["info"]["counts"]
    assert counts["2"]["approach"] == 4 and counts["3"]["approach"] == 29


def test_verify_unknown_suite(capsys):
    assert run(["verify", "nonsense"], capsys)[0] == 2


def test_verify_is_deterministic(capsys):
    argv = ["verify", "main-theorem", "--seed", "7", "--samples", "200"]
    main(argv + ["--format", "json"])
    first = capsys.readouterr().out
    main(argv + ["--format", "json"])
    assert capsys.readouterr().out == first
    report = json.loads(first)
    jsonschema.validate(report, SCHEMA)
    assert report["exit_code"] == 0


def test_text_output_and_timing(capsys):
    assert main(["verify", "quantale-laws", "--timing"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("vapproach verify: PASS") and "PASS quantale" in out and "s]" in out


def test_report_file(tmp_path, capsys):
    out = tmp_path / "report.json"
    main(["check", "--builtin", "two_chain", "--format", "json", "--output", str(out)])
    assert json.loads(out.read_text()) == json.loads(capsys.readouterr().out)


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "vapproach.cli", "check", "--builtin",
                           "corrupted_three_chain"], capture_output=True, text=True)
    assert proc.returncode == 1 and "FAIL" in proc.stdout
