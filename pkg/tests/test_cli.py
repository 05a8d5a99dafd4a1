"""CLI commands: conversion round trips, functor tables, verify/replay."""

import json

import pytest

from parstack.cli import main
from parstack.harness import run_mutation


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc, indent=2) + "\n")
    return str(p)


def line_scenario(weight="1/2", order=2, at="y", degree=None, cover=None):
    obj = {"kind": "parabolic_point", "at": at, "rank": 1, "order": order,
           "weights": [[weight, 1]]}
    if degree is not None:
        obj["underlying_degree"] = degree
    doc = {"version": 1, "field": "rational", "objects": [obj]}
    if cover is not None:
        doc["cover"] = cover
    return doc


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert capsys.readouterr().out.strip()


def test_convert_weight_half_round_trip(tmp_path, capsys):
    src = write(tmp_path, "line.json", line_scenario())
    g1 = str(tmp_path / "graded.json")
    assert main(["convert", src, "--direction", "to-graded", "--out", g1]) == 0
    doc = json.loads(open(g1).read())
    mod = doc["objects"][0]
    assert mod["kind"] == "graded_module" and mod["at"] == "y"
    # weight 1/2 line: M_1 = t^{-1} M_0
    assert mod["pieces"][0]["columns"][0][0]["t_order"] == 0
    assert mod["pieces"][1]["columns"][0][0]["t_order"] == -1
    back = str(tmp_path / "back.json")
    assert main(["convert", g1, "--direction", "to-parabolic", "--out", back]) == 0
    g2 = str(tmp_path / "graded2.json")
    assert main(["convert", back, "--direction", "to-graded", "--out", g2]) == 0
    assert open(g1).read() == open(g2).read()


def test_convert_rejects_empty_source_side(tmp_path, capsys):
    src = write(tmp_path, "line.json", line_scenario())
    assert main(["convert", src, "--direction", "to-parabolic"]) == 2
    assert "no objects" in capsys.readouterr().err


def test_malformed_chain_names_the_point(tmp_path, capsys):
    doc = {"version": 1, "field": "rational", "objects": [{
        "kind": "parabolic_point", "at": "y", "rank": 1, "order": 1,
        "chain": [{"columns": [[{"t_order": 0, "coeffs": ["1"]}]]},
                  {"columns": [[{"t_order": 2, "coeffs": ["1"]}]]}]}]}
    src = write(tmp_path, "bad.json", doc)
    assert main(["convert", src, "--direction", "to-graded"]) == 2
    err = capsys.readouterr().err
    assert "point" in err and "object 0" in err


def test_parse_errors_exit_2(tmp_path, capsys):
    p = tmp_path / "junk.json"
    p.write_text("{ not json")
    assert main(["degree", str(p)]) == 2
    src = write(tmp_path, "v9.json", {"version": 9, "objects": []})
    assert main(["degree", src]) == 2
    src = write(tmp_path, "f.json", {"version": 1, "field": "octonions"})
    assert main(["degree", src]) == 2
    assert main(["degree", str(tmp_path / "missing.json")]) == 2
    capsys.readouterr()


def test_inadmissible_cover_cites_the_relation(tmp_path, capsys):
    cover = {"target": "y", "s": 4,
             "branches": [{"label": "x", "e": 2, "r": 3, "unit": "1"}]}
    doc = line_scenario(weight="0", order=4, at="x", cover=cover)
    src = write(tmp_path, "bad_cover.json", doc)
    assert main(["push", src]) == 2
    assert "s != r*e" in capsys.readouterr().err


def test_push_trivial_line_e2(tmp_path, capsys):
    cover = {"target": "y", "s": 2,
             "branches": [{"label": "x", "e": 2, "r": 1, "unit": "1"}]}
    doc = line_scenario(weight="0", order=1, at="x", cover=cover)
    src = write(tmp_path, "push.json", doc)
    out = str(tmp_path / "pushed.json")
    assert main(["push", src, "--out", out]) == 0
    err = capsys.readouterr().err
    assert "1/2" in err and "rank 2" in err
    pushed = json.loads(open(out).read())["objects"][0]
    assert pushed["rank"] == 2 and pushed["at"] == "y"


def test_push_requires_branch_objects(tmp_path, capsys):
    cover = {"target": "y", "s": 2,
             "branches": [{"label": "x", "e": 2, "r": 1, "unit": "1"}]}
    doc = {"version": 1, "field": "rational", "cover": cover, "objects": []}
    src = write(tmp_path, "empty.json", doc)
    assert main(["push", src]) == 2
    assert "no object at branch" in capsys.readouterr().err


def test_pull_weight_table(tmp_path, capsys):
    cover = {"target": "y", "s": 6,
             "branches": [{"label": "x", "e": 2, "r": 3, "unit": "1"}]}
    doc = {"version": 1, "field": "rational", "cover": cover, "objects": [{
        "kind": "parabolic_point", "at": "y", "rank": 2, "order": 6,
        "weights": [["1/3", 1], ["2/3", 1]]}]}
    src = write(tmp_path, "pull.json", doc)
    out = str(tmp_path / "pulled.json")
    assert main(["pull", src, "--out", out]) == 0
    err = capsys.readouterr().err
    assert "2/3" in err and "1/3" in err
    pulled = json.loads(open(out).read())["objects"]
    assert len(pulled) == 1 and pulled[0]["at"] == "x" and pulled[0]["order"] == 3


def test_pull_degree_line(tmp_path, capsys):
    cover = {"target": "y", "s": 2,
             "branches": [{"label": "x", "e": 2, "r": 1, "unit": "1"}]}
    doc = line_scenario(weight="1/2", order=2, at="y", degree=1, cover=cover)
    doc["deg_f"] = 2
    src = write(tmp_path, "deg.json", doc)
    assert main(["pull", src, "--out", str(tmp_path / "o.json")]) == 0
    err = capsys.readouterr().err
    assert "pulled parabolic degree: 3" in err


def test_degree_table(tmp_path, capsys):
    src = write(tmp_path, "line.json", line_scenario(degree=1))
    assert main(["degree", src]) == 0
    out = capsys.readouterr().out
    assert "3/2" in out


def test_verify_deterministic_reports(tmp_path, capsys):
    a, b = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    assert main(["verify", "--suite", "pull", "--trials", "5", "--seed", "3",
                 "--out", a]) == 0
    assert main(["verify", "--suite", "pull", "--trials", "5", "--seed", "3",
                 "--out", b]) == 0
    capsys.readouterr()
    da, db = json.loads(open(a).read()), json.loads(open(b).read())
    da.pop("timing"), db.pop("timing")
    assert da == db
    assert da["passed"] and da["config_hash"] and da["tool_version"]


def test_verify_all_suites_smoke(tmp_path, capsys):
    assert main(["verify", "--trials", "2", "--seed", "0",
                 "--out", str(tmp_path / "r.json")]) == 0
    capsys.readouterr()


def test_replay_reproduces_counterexample(tmp_path, capsys):
    rep = run_mutation("direct", "broken-inclusion", 1000)
    record = rep.failures[0]
    path = write(tmp_path, "cex.json", record)
    assert main(["replay", path]) == 0
    assert "reproduced" in capsys.readouterr().err
    doctored = dict(record, note="some other note")
    path2 = write(tmp_path, "cex2.json", doctored)
    assert main(["replay", path2]) == 1
    assert "NOT reproduced" in capsys.readouterr().err
    path3 = write(tmp_path, "cex3.json", {"suite": "direct"})
    assert main(["replay", path3]) == 2
    capsys.readouterr()


def test_verify_replay_flag(tmp_path, capsys):
    rep = run_mutation("pull", "wrong-twist", 2000)
    path = write(tmp_path, "cex.json", rep.failures[0])
    assert main(["verify", "--replay", path]) == 0
    capsys.readouterr()
