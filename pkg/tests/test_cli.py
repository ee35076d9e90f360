"""End-to-end command tests through the click runner.

Counts that look bare here (34 trees, 68 surjections) are frozen from
the enumeration module, whose own tests validate them against dedup
sweeps and direct counting; the surjection count is also checked below
against an independent Stirling-style recursion.
"""

import json

import pytest
from click.testing import CliRunner

from operadforge import axioms
from operadforge.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def run_json(runner, args, expect_exit=0):
    res = runner.invoke(main, args)
    assert res.exit_code == expect_exit, res.output
    return json.loads(res.output)


# -- enumerate -------------------------------------------------------------------

def test_enumerate_trees(runner):
    rep = run_json(runner, ["enumerate", "--flavor", "Tr",
                            "--max-edges", "2", "--max-legs", "3"])
    assert rep["count"] == 34
    assert rep["count"] == len(rep["objects"])
    keys = [o["key"] for o in rep["objects"]]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)


def surjection_count(n_max, k_max):
    # k! * S(n, k) via the recursion S(n, k) = k S(n-1, k) + S(n-1, k-1)
    S = {(0, 0): 1}
    for n in range(1, n_max + 1):
        for k in range(1, n + 1):
            S[(n, k)] = k * S.get((n - 1, k), 0) + S.get((n - 1, k - 1), 0)
    fact = [1]
    for k in range(1, k_max + 1):
        fact.append(fact[-1] * k)
    return sum(fact[k] * S.get((n, k), 0)
               for n in range(1, n_max + 1)
               for k in range(1, min(k_max, n) + 1))


def test_enumerate_surjections_matches_stirling(runner):
    rep = run_json(runner, ["enumerate", "--flavor", "Per",
                            "--max-edges", "2", "--max-legs", "4"])
    assert rep["count"] == surjection_count(n_max=4, k_max=3) == 68


def test_enumerate_no_edges_gives_corollas(runner):
    rep = run_json(runner, ["enumerate", "--flavor", "ggGrc",
                            "--max-edges", "0", "--max-legs", "2",
                            "--max-genus", "1"])
    assert rep["count"] > 0
    assert all(o["edges"] == 0 for o in rep["objects"])


def test_bad_bounds_exit_usage(runner):
    assert runner.invoke(main, ["enumerate", "--max-edges", "-1"]).exit_code == 2
    assert runner.invoke(main, ["koszul", "--jobs", "0"]).exit_code == 2


# -- dims ------------------------------------------------------------------------

def test_dims_two_loop_row(runner):
    rep = run_json(runner, ["dims", "--flavor", "ggGrc", "--max-edges", "2",
                            "--max-legs", "0", "--max-genus", "1"])
    two_edge = [o for o in rep["objects"] if o["edges"] == 2]
    assert two_edge
    for o in two_edge:
        assert o["quotient"]["2"] == 1
        assert o["dual_quotient"]["2"] == 1
    assert any(o["free"] == {"1": 0, "2": 2} for o in two_edge)


# -- present ---------------------------------------------------------------------

def test_present_prepermutad_dual_relations(runner):
    rep = run_json(runner, ["present", "prePermutad", "--max-edges", "2",
                            "--max-legs", "2"])
    duals = [tuple(sorted(map(str, s["dual_relations"])))
             for s in rep["shapes"]]
    assert all(s["pairing_is_identity"] for s in rep["shapes"])
    # chains keep the sum, forks vanish generator by generator
    assert ("{'0': 1, '1': 1}",) in duals
    assert ("{'0': 1}", "{'1': 1}") in duals


def test_present_terminal_flavor(runner):
    rep = run_json(runner, ["present", "Whe", "--max-edges", "2",
                            "--max-legs", "1", "--max-genus", "1"])
    assert rep["shapes"]
    for s in rep["shapes"]:
        assert s["dual_relations"] == [{"0": 1, "1": 1}]
        assert s["relations"] == [{"0": 1, "1": -1}]


def test_present_needs_weight_two(runner):
    assert runner.invoke(
        main, ["present", "Tr", "--max-edges", "1"]).exit_code == 2


# -- koszul ----------------------------------------------------------------------

def test_koszul_passes_and_is_deterministic(runner):
    args = ["koszul", "--flavor", "ggGrc", "--max-edges", "3",
            "--max-legs", "2", "--max-genus", "1"]
    first = runner.invoke(main, args)
    second = runner.invoke(main, args)
    assert first.exit_code == 0
    assert first.output == second.output
    rep = json.loads(first.output)
    assert rep["all_pass"] and rep["witness"] is None
    assert all(o["betti"] == {"0": 1} for o in rep["objects"])


def test_koszul_parallel_matches_serial(runner):
    args = ["koszul", "--flavor", "Per", "--max-edges", "2",
            "--max-legs", "3"]
    serial = runner.invoke(main, args)
    parallel = runner.invoke(main, args + ["--jobs", "2"])
    assert parallel.exit_code == 0
    assert serial.output == parallel.output


def test_koszul_disk_cache_is_transparent(runner, tmp_path, monkeypatch):
    args = ["koszul", "--flavor", "Tr", "--max-edges", "2",
            "--max-legs", "2"]
    cold = runner.invoke(main, args)
    monkeypatch.setenv("OPERADFORGE_CACHE_DIR", str(tmp_path))
    warmup = runner.invoke(main, args)
    cached = runner.invoke(main, args)
    assert list(tmp_path.glob("certify-*.json"))
    assert cold.output == warmup.output == cached.output


def test_koszul_sign_flip_control_fails(runner):
    res = runner.invoke(main, ["koszul", "--flavor", "ggGrc",
                               "--max-edges", "3", "--max-legs", "0",
                               "--max-genus", "1", "--debug-flip-sign"])
    assert res.exit_code == 1
    rep = json.loads(res.output)
    assert not rep["all_pass"]
    assert rep["witness"]["debug_mutation"] is True
    assert rep["witness"]["d_squared"] is False


def test_koszul_out_file(runner, tmp_path):
    out = tmp_path / "report.json"
    res = runner.invoke(main, ["koszul", "--flavor", "Tr", "--max-edges",
                               "2", "--max-legs", "1", "--out", str(out)])
    assert res.exit_code == 0 and res.output == ""
    assert json.loads(out.read_text())["all_pass"]


# -- axioms ----------------------------------------------------------------------

def test_axioms_shipped_fixture(runner):
    rep = run_json(runner, ["axioms"])
    assert rep["parity"] == "odd" and rep["declared_pass"]
    declared = {k: v["status"] for k, v in rep["declared_check"].items()}
    opposite = {k: v["status"] for k, v in rep["opposite_reading"].items()}
    assert declared["comp_sequential"] == "pass"
    assert opposite["comp_sequential"] == "fail"
    assert rep["opposite_reading"]["comp_sequential"]["witness"]


def test_axioms_markl_file(runner, tmp_path):
    path = tmp_path / "assoc.json"
    path.write_text(json.dumps(
        axioms.table_to_dict(axioms.associative_table(3))))
    rep = run_json(runner, ["axioms", str(path)])
    assert rep["parity"] == "markl" and rep["declared_pass"]
    assert rep["opposite_reading"] is None


def test_axioms_corrupted_table_exits_one(runner, tmp_path):
    d = axioms.table_to_dict(axioms.det_table(2, 0))
    row = d["comp"][0]["matrix"]["entries"][0]
    row[2] = -row[2]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(d))
    res = runner.invoke(main, ["axioms", str(path)])
    assert res.exit_code == 1
    rep = json.loads(res.output)
    assert not rep["declared_pass"]
    assert any(v["status"] == "fail" for v in rep["declared_check"].values())


def test_axioms_parse_error_exits_two(runner, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert runner.invoke(main, ["axioms", str(path)]).exit_code == 2
    path.write_text(json.dumps({"parity": "odd"}))
    assert runner.invoke(main, ["axioms", str(path)]).exit_code == 2


def test_table_format_renders_rows(runner):
    res = runner.invoke(main, ["enumerate", "--flavor", "Tr",
                               "--max-edges", "1", "--max-legs", "1",
                               "--format", "table"])
    assert res.exit_code == 0
    assert "key" in res.output and "edges" in res.output
    assert "('Tr'," in res.output
