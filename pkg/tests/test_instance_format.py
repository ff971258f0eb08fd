import json

import pytest

from encodecheck.errors import DisjointnessError, ParseError, UnknownStateError
from encodecheck.harness import FIXTURES, fixture_path
from encodecheck.instance_format import dump_document, dumps, parse_document, parse_instance


def base_doc():
    return {
        "source": {"states": ["s"], "steps": []},
        "target": {"states": ["t1", "t2"], "steps": [["t1", "t2"]]},
        "encoding": {"s": "t1"},
        "relations": {"RT": {"over": "target", "pairs": [["t1", "t2"]], "closures": ["refl"]}},
    }


def test_fig1_relation_count(fig1):
    assert len(fig1[1]["RT"]) == 4


def test_parse_from_path_and_text():
    path = fixture_path("fig2")
    from_path = parse_instance(str(path))
    from_text = parse_instance(path.read_text(encoding="utf-8"))
    assert from_path[0] == from_text[0] and from_path[1] == from_text[1]


def test_closure_order_is_literal():
    doc = base_doc()
    doc["target"]["states"].append("t3")
    doc["relations"] = {
        "A": {"over": "target", "pairs": [["t1", "t2"], ["t2", "t3"]], "closures": ["sym", "trans"]},
        "B": {"over": "target", "pairs": [["t1", "t2"], ["t2", "t3"]], "closures": ["trans", "sym"]},
    }
    _, rels = parse_document(doc)
    assert ("t1", "t1") in rels["A"] and ("t1", "t1") not in rels["B"]


def test_unknown_state_in_relation():
    doc = base_doc()
    doc["relations"]["RT"]["pairs"].append(["t1", "t9"])
    with pytest.raises(UnknownStateError) as info:
        parse_document(doc)
    assert info.value.context["relation"] == "RT"
    assert info.value.context["index"] == 1


@pytest.mark.parametrize("mutate, fragment", [
    (lambda d: d.update(extra=1), "extra"),
    (lambda d: d["source"].update(states="s"), "source.states"),
    (lambda d: d["target"].update(steps=[["t1"]]), "target.steps[0]"),
    (lambda d: d["relations"]["RT"].update(over="both"), "relations.RT.over"),
    (lambda d: d["relations"]["RT"].update(closures=["star"]), "relations.RT.closures[0]"),
    (lambda d: d["encoding"].update(s=3), "encoding.s"),
])
def test_parse_errors_name_the_field(mutate, fragment):
    doc = base_doc()
    mutate(doc)
    with pytest.raises(ParseError) as info:
        parse_document(doc)
    assert fragment in str(info.value)
    assert info.value.code == "E_PARSE"


def test_malformed_json_reports_line():
    with pytest.raises(ParseError) as info:
        parse_instance('{\n "source": {,\n}')
    assert ":2:" in str(info.value)


def test_missing_file(tmp_path):
    with pytest.raises(ParseError):
        parse_instance(str(tmp_path / "nope.instance"))


def test_not_utf8(tmp_path):
    p = tmp_path / "bad.instance"
    p.write_bytes(b"\xff\xfe{}")
    with pytest.raises(ParseError):
        parse_instance(str(p))


def test_disjointness_is_reported():
    doc = base_doc()
    doc["source"]["states"] = ["t1"]
    doc["encoding"] = {"t1": "t1"}
    with pytest.raises(DisjointnessError):
        parse_document(doc)


@pytest.mark.parametrize("name", FIXTURES)
def test_fixture_round_trip(name):
    enc, rels = parse_instance(str(fixture_path(name)))
    text = dumps(dump_document(enc, rels))
    enc2, rels2 = parse_instance(text)
    assert enc2 == enc and rels2 == rels
    assert dumps(dump_document(enc2, rels2)) == text
    assert json.loads(text)["relations"][sorted(rels)[0]]["closures"] == []
