"""CLI exit-code/output tests and HTTP API parity tests."""

import io

import pytest
from fastapi.testclient import TestClient

from sre_workbench.cli import main
from sre_workbench.families import arbdef_family, maximal_matching_problem
from sre_workbench.graphs import cycle_graph, format_graph
from sre_workbench.problems import parse_problem, problems_equivalent
from sre_workbench.service import app

client = TestClient(app)


def run_cli(argv, capsys, monkeypatch, stdin=""):
    monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


# ---------------------------------------------------------------------------
# CLI

def test_family_diagram_pipe(capsys, monkeypatch):
    code, fam, _ = run_cli(["family", "mm", "--delta", "3"], capsys,
                           monkeypatch)
    assert code == 0
    code, out, _ = run_cli(["diagram", "--side", "black"], capsys,
                           monkeypatch, stdin=fam)
    assert code == 0
    assert out == "P -> O\n"


def test_parse_round_trip(capsys, monkeypatch):
    text = "white:\nM O O\nP P P\nblack:\nM [O P] [O P]\nO O O"
    code, out, _ = run_cli(["parse"], capsys, monkeypatch, stdin=text)
    assert code == 0
    assert problems_equivalent(parse_problem(out),
                               maximal_matching_problem(3)) is not None


def test_bound_outputs(capsys, monkeypatch):
    code, out, _ = run_cli(["bound", "det", "--kind", "bipartite",
                            "--k", "5", "--girth", "30"], capsys, monkeypatch)
    assert (code, out) == (0, "10\n")
    code, out, _ = run_cli(["bound", "seqlen", "--kind", "ruling",
                            "--params", "k=16,beta=2,eps=1.0"],
                           capsys, monkeypatch)
    assert (code, out) == (0, "8\n")


def test_re_fixed_point(capsys, monkeypatch):
    code, fam, _ = run_cli(["family", "arbdef", "--delta", "3",
                            "--colors", "2"], capsys, monkeypatch)
    code, out, _ = run_cli(["re", "--steps", "1"], capsys, monkeypatch,
                           stdin=fam)
    assert code == 0
    assert problems_equivalent(parse_problem(out),
                               arbdef_family(3, 2)) is not None


def test_relax_find_then_check(capsys, monkeypatch, tmp_path):
    code, src, _ = run_cli(["family", "matching", "--delta", "4",
                            "--x", "0", "--y", "1"], capsys, monkeypatch)
    code, tgt, _ = run_cli(["family", "matching", "--delta", "4",
                            "--x", "1", "--y", "1"], capsys, monkeypatch)
    tgt_file = tmp_path / "target.txt"
    tgt_file.write_text(tgt)
    code, witness, _ = run_cli(["relax", "--target", str(tgt_file)],
                               capsys, monkeypatch, stdin=src)
    assert code == 0 and "->" in witness
    map_file = tmp_path / "map.txt"
    map_file.write_text(witness)
    code, out, _ = run_cli(["relax", "--target", str(tgt_file),
                            "--map", str(map_file)], capsys, monkeypatch,
                           stdin=src)
    assert (code, out) == (0, "RELAXATION-OK\n")


def test_solve_check_and_expect(capsys, monkeypatch, tmp_path):
    code, fam, _ = run_cli(["family", "mm", "--delta", "2"], capsys,
                           monkeypatch)
    code, g, _ = run_cli(["graph", "gen", "--kind", "complete-bipartite",
                          "--a", "2", "--b", "2"], capsys, monkeypatch)
    pf, gf = tmp_path / "p.txt", tmp_path / "g.txt"
    pf.write_text(fam)
    gf.write_text(g)
    code, out, _ = run_cli(["solve", "--problem", str(pf), "--graph",
                            str(gf), "--check"], capsys, monkeypatch)
    assert code == 0 and out.startswith("SAT")
    sol = out.split("solution:\n", 1)[1]
    sf = tmp_path / "s.txt"
    sf.write_text(sol)
    code, out, _ = run_cli(["check", "--problem", str(pf), "--graph",
                            str(gf), "--solution", str(sf)],
                           capsys, monkeypatch)
    assert (code, out) == (0, "VALID\n")
    code, _, err = run_cli(["solve", "--problem", str(pf), "--graph",
                            str(gf), "--expect", "unsat"],
                           capsys, monkeypatch)
    assert code == 1 and "expected UNSAT" in err


def test_usage_error_exit_2(capsys, monkeypatch):
    with pytest.raises(SystemExit) as exc:
        main(["diagram", "--bogus"])
    assert exc.value.code == 2


def test_guard_exit_3(capsys, monkeypatch):
    code, fam, _ = run_cli(["family", "arbdef", "--delta", "4",
                            "--colors", "4"], capsys, monkeypatch)
    code, _, err = run_cli(["re"], capsys, monkeypatch, stdin=fam)
    assert code == 3 and "resource guard" in err


def test_domain_error_exit_1(capsys, monkeypatch):
    code, _, err = run_cli(["parse"], capsys, monkeypatch,
                           stdin="white:\nA A\n")
    assert code == 1


# ---------------------------------------------------------------------------
# HTTP API

def cli_out(argv, capsys, monkeypatch, stdin=""):
    code, out, _ = run_cli(argv, capsys, monkeypatch, stdin=stdin)
    assert code == 0
    return out


def test_api_parse_and_diagram_parity(capsys, monkeypatch):
    fam = cli_out(["family", "mm", "--delta", "3"], capsys, monkeypatch)
    r = client.post("/api/problem/parse", json={"text": fam})
    assert r.status_code == 200
    snap = r.json()
    assert snap["text"] + "\n" == cli_out(["parse"], capsys, monkeypatch,
                                          stdin=fam)
    r = client.post(f"/api/problem/{snap['session']}/diagram",
                    json={"side": "black"})
    assert r.json()["text"] + "\n" == cli_out(
        ["diagram", "--side", "black"], capsys, monkeypatch, stdin=fam)
    assert r.json()["edges"] == [["P", "O"]]


def test_api_family_endpoint():
    r = client.post("/api/family",
                    json={"kind": "arbdef", "delta": 3, "colors": 2})
    assert r.status_code == 200
    assert "L12" in r.json()["alphabet"]


def test_api_re_merge_undo_snapshots(capsys, monkeypatch):
    fam = cli_out(["family", "arbdef", "--delta", "3", "--colors", "2"],
                  capsys, monkeypatch)
    sid = client.post("/api/problem/parse",
                      json={"text": fam}).json()["session"]
    t0 = client.get(f"/api/problem/{sid}").json()["text"]
    r = client.post(f"/api/problem/{sid}/re", json={"steps": 1})
    assert r.status_code == 200 and "labels:" in r.json()["growth"]
    t1 = r.json()["text"]
    assert t1 != t0
    # undo restores the pre-step snapshot exactly
    assert client.post(f"/api/session/{sid}/undo").json()["text"] == t0
    r = client.post(f"/api/problem/{sid}/merge",
                    json={"groups": [["L1", "L2"]]})
    assert r.status_code == 200
    t2 = r.json()["text"]
    assert t2 != t0 and r.json()["label_map"]["L2"] == "L1"
    assert client.post(f"/api/session/{sid}/undo").json()["text"] == t0
    r = client.post(f"/api/session/{sid}/undo")
    assert r.status_code == 409


def test_api_solve_parity(capsys, monkeypatch, tmp_path):
    fam = cli_out(["family", "arbdef", "--delta", "2", "--colors", "2"],
                  capsys, monkeypatch)
    gtext = format_graph(cycle_graph(6))
    r = client.post("/api/solve", json={
        "problem": fam, "graph": gtext,
        "lift": {"delta": 2, "rank": 2}})
    assert r.status_code == 200
    pf, gf = tmp_path / "p.txt", tmp_path / "g.txt"
    pf.write_text(fam)
    gf.write_text(gtext)
    out = cli_out(["solve", "--problem", str(pf), "--graph", str(gf),
                   "--lift", "2,2"], capsys, monkeypatch)
    assert r.json()["text"] + "\n" == out
    assert r.json()["verdict"] == "SAT"


def test_api_solve_by_session(capsys, monkeypatch):
    fam = cli_out(["family", "arbdef", "--delta", "2", "--colors", "1"],
                  capsys, monkeypatch)
    sid = client.post("/api/problem/parse",
                      json={"text": fam}).json()["session"]
    r = client.post("/api/solve", json={
        "session": sid, "graph": format_graph(cycle_graph(5)),
        "lift": {"delta": 2, "rank": 2}})
    assert r.status_code == 200
    assert r.json()["verdict"] == "UNSAT"
    assert "fingerprint: " in r.json()["text"]


def test_api_relax_parity(capsys, monkeypatch):
    src = cli_out(["family", "matching", "--delta", "4", "--x", "0",
                   "--y", "1"], capsys, monkeypatch)
    tgt = cli_out(["family", "matching", "--delta", "4", "--x", "1",
                   "--y", "1"], capsys, monkeypatch)
    sid = client.post("/api/problem/parse",
                      json={"text": src}).json()["session"]
    r = client.post(f"/api/problem/{sid}/relax-check", json={"target": tgt})
    assert r.status_code == 200 and r.json()["ok"]
    witness = r.json()["text"]
    r = client.post(f"/api/problem/{sid}/relax-check",
                    json={"target": tgt, "map": witness})
    assert r.json() == {"session": sid, "ok": True, "reason": "",
                        "text": "RELAXATION-OK"}


def test_api_bound_parity(capsys, monkeypatch):
    r = client.post("/api/bound", json={"which": "det", "kind": "bipartite",
                                        "k": 5, "girth": "30"})
    assert r.json()["text"] + "\n" == cli_out(
        ["bound", "det", "--kind", "bipartite", "--k", "5", "--girth",
         "30"], capsys, monkeypatch)
    r = client.post("/api/bound", json={
        "which": "thm34", "n": 6 ** 24, "delta": 2, "rank": 3, "k": 100})
    assert r.json()["text"].splitlines() == ["deterministic: 9",
                                             "randomized: 0"]


def test_api_oracle(capsys, monkeypatch):
    fam = cli_out(["family", "mm", "--delta", "2"], capsys, monkeypatch)
    g = cli_out(["graph", "gen", "--kind", "complete-bipartite", "--a", "2",
                 "--b", "2"], capsys, monkeypatch)
    r = client.post("/api/oracle", json={"problem": fam, "graph": g})
    assert r.status_code == 200
    assert r.json()["solvable"] is True
    assert r.json()["text"].startswith("ZERO-ROUND-ALGORITHM")


def test_api_graph_gen():
    r = client.post("/api/graph/gen", json={"kind": "cycle", "n": 6})
    assert r.status_code == 200
    assert r.json()["text"].startswith("graph")


def test_api_error_statuses():
    assert client.get("/api/problem/nope").status_code == 404
    r = client.post("/api/problem/parse", json={"text": "white:\nA A\n"})
    assert r.status_code == 400
    fam = client.post("/api/family",
                      json={"kind": "arbdef", "delta": 4, "colors": 4})
    sid = fam.json()["session"]
    r = client.post(f"/api/problem/{sid}/re", json={"steps": 1})
    assert r.status_code == 422
    assert "guard" in r.json()["detail"]
