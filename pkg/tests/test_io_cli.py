import json

import pytest

from abelgraph.cli import main
from abelgraph.errors import ParseError
from abelgraph.io import (
    dump_graph,
    graph_to_obj,
    multidegree_from_obj,
    multidegree_to_obj,
    parse_graph,
    write_graph,
)
from abelgraph.lattice import Multidegree

from graphs import G1, G2, G3, G4, G5, star


@pytest.fixture
def graph_file(tmp_path):
    def make(X, name="g.json"):
        path = tmp_path / name
        write_graph(X, path)
        return str(path)

    return make


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_round_trip_idempotent(corpus):
    for X in corpus[:50] + [G2(), star()]:
        text = dump_graph(X)
        assert parse_graph(text) == X
        assert dump_graph(parse_graph(text)) == text


def test_parse_ignores_end_order_and_listing_order():
    a = parse_graph('{"vertices":[{"id":"b","genus":1},{"id":"a","genus":1}],'
                    '"edges":[{"id":"x","ends":["b","a"]}]}')
    b = parse_graph('{"vertices":[{"id":"a","genus":1},{"id":"b","genus":1}],'
                    '"edges":[{"id":"x","ends":["a","b"]}]}')
    assert a == b and dump_graph(a) == dump_graph(b)


@pytest.mark.parametrize(
    "text",
    ["{bad", "[]", '{"vertices":[{"id":"a"}]}', '{"vertices":[{"id":"a","genus":0}],"edges":[{"id":"e","ends":["a"]}]}'],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_graph(text)


def test_multidegree_json():
    X = G2()
    L = Multidegree(X, (1, 0))
    assert multidegree_to_obj(L) == {"values": {"C1": 1, "C2": 0}}
    assert multidegree_from_obj(X, multidegree_to_obj(L)) == L


def test_cli_analyze_g2(capsys, graph_file):
    code, out, err = run(capsys, "analyze", graph_file(G2()), "--degree", "1")
    assert code == 0 and err == ""
    report = json.loads(out)
    assert report["class_group"] == {"invariant_factors": [3], "order": 3, "spanning_trees": 3}
    assert len(report["balanced"][0]["B"]) == 4
    assert report["balanced"][0]["d_general"] is False
    assert report["balanced"][0]["witness"] == {"C1": -1, "C2": 2}


def test_cli_analyze_g1(capsys, graph_file):
    code, out, _ = run(capsys, "analyze", graph_file(G1()))
    report = json.loads(out)
    assert code == 0 and report["class_group"]["order"] == 1 and report["tails"] == []


def test_cli_output_is_byte_stable(capsys, graph_file):
    path = graph_file(star())
    _, first, _ = run(capsys, "analyze", path)
    _, second, _ = run(capsys, "analyze", path)
    assert first == second


def test_cli_malformed_json_exits_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope", encoding="utf-8")
    code, out, err = run(capsys, "analyze", str(bad))
    assert code == 2 and out == "" and "ParseError" in err


def test_cli_genus_too_small_exits_2(capsys, tmp_path):
    path = tmp_path / "g1.json"
    path.write_text('{"vertices":[{"id":"a","genus":1}],"edges":[]}', encoding="utf-8")
    code, out, _ = run(capsys, "analyze", str(path))
    assert code == 2 and out == ""


def test_cli_abel(capsys, graph_file):
    path = graph_file(G3())
    code, out, _ = run(capsys, "abel", path, "--node", "e1")
    image = json.loads(out)
    assert code == 0 and image["multidegree"] == {"C1": 0, "C2": 1} and image["boundary"] is False
    assert image["pieces"] == [
        {"degree": 1, "divisor": [["e1", "C2", 1]], "vertices": ["C2"]},
        {"degree": 0, "divisor": [], "vertices": ["C1"]},
    ]
    _, out, _ = run(capsys, "abel", path, "--component", "C2")
    assert json.loads(out)["multidegree"] == {"C1": 0, "C2": 1}
    _, out, _ = run(capsys, "abel", graph_file(G2(), "g2.json"), "--node", "e1")
    image = json.loads(out)
    assert image["host"] == {"edge": "e1", "exceptional": "E_e1", "kind": "blowup"}
    assert image["boundary"] is True and image["multidegree"]["E_e1"] == 1
    _, out, _ = run(capsys, "abel", path, "--all")
    assert len(json.loads(out)) == 3
    code, out, err = run(capsys, "abel", path, "--node", "zz")
    assert code == 2 and out == "" and "UnknownPoint" in err


def test_cli_fibers(capsys, graph_file):
    code, out, _ = run(capsys, "fibers", graph_file(star()), "--labels", "p,q")
    report = json.loads(out)
    assert code == 0 and report["nontrivial"] == 1 and report["trees"] == [["c"]]
    code, out, err = run(capsys, "fibers", graph_file(G2(), "g2.json"))
    assert code == 2 and "Not1General" in err


def test_cli_class_group_and_balanced(capsys, graph_file):
    _, out, _ = run(capsys, "class-group", graph_file(G5()))
    assert json.loads(out) == {"invariant_factors": [4], "order": 4, "spanning_trees": 4}
    _, out, _ = run(capsys, "balanced", graph_file(G2(), "g2.json"), "--degree", "1")
    report = json.loads(out)
    assert report["B_tilde"] == [{"C1": 0, "C2": 1}, {"C1": 1, "C2": 0}]


def test_cli_vine(capsys, graph_file):
    _, out, _ = run(capsys, "vine", graph_file(G4()), "--degree", "2")
    report = json.loads(out)
    assert report["r"] == [0, 1, 0] and report["m"] == 0 and report["bvine_equals_B"] is True
    _, out, _ = run(capsys, "vine", graph_file(G5(), "g5.json"), "--degree", "2", "--a", "1")
    assert json.loads(out)["multidegree"] == {"C1": 1, "C2": 1}
    _, out, _ = run(capsys, "vine", graph_file(G2(), "g2.json"), "--degree", "1")
    assert json.loads(out)["bvine_equals_B"] is False
    code, _, err = run(capsys, "vine", graph_file(star(), "s.json"), "--degree", "1")
    assert code == 2 and "NotTwoComponent" in err


def test_cli_corpus(capsys, tmp_path):
    out_dir = tmp_path / "c"
    code, out, _ = run(capsys, "corpus", "--count", "6", "--seed", "5", "--out", str(out_dir))
    summary = json.loads(out)
    assert code == 0 and summary["count"] == 6 and summary["failures"] == []
    assert len(list(out_dir.glob("*.json"))) == 6
    code, out, _ = run(capsys, "corpus", "--count", "0")
    assert code == 0 and json.loads(out)["count"] == 0
    code, out, err = run(capsys, "corpus", "--genus-min", "0", "--genus-max", "1")
    assert code == 2 and out == "" and "SpecError" in err


def test_cli_pretty(capsys, graph_file):
    code, out, _ = run(capsys, "class-group", graph_file(G2()), "--pretty")
    assert code == 0 and "order: 3" in out


def test_cli_invariant_violation_exits_3(capsys, graph_file, monkeypatch):
    from abelgraph import cli
    from abelgraph.errors import InvariantViolation

    def boom(args):
        raise InvariantViolation("synthetic")

    # the parser is built per call, so it picks up the patched handler
    monkeypatch.setattr(cli, "cmd_class_group", boom)
    code = cli.main(["class-group", graph_file(G2())])
    out, err = capsys.readouterr()
    assert code == 3 and out == "" and "synthetic" in err


def test_graph_obj_shape():
    obj = graph_to_obj(G3())
    assert obj == {
        "vertices": [{"id": "C1", "genus": 1}, {"id": "C2", "genus": 2}],
        "edges": [{"id": "e1", "ends": ["C1", "C2"]}],
    }
