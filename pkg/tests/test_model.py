import pytest

from encodecheck.errors import (
    DisjointnessError,
    EncodabilityError,
    PartialEncodingError,
    UnknownStateError,
)
from encodecheck.model import (
    EncodingInstance,
    Pred,
    combine,
    holds_predicate,
    is_divergent,
    system,
    validate_instance,
    weak_derivatives,
)


def raw(source_states, target_states, mapping, **extra):
    doc = {
        "source": {"states": source_states, "steps": extra.get("src_steps", [])},
        "target": {"states": target_states, "steps": extra.get("tgt_steps", [])},
        "encoding": mapping,
    }
    return doc


def test_fig1_shape(fig1):
    enc, _ = fig1
    assert enc.source.states == ("s1", "s2")
    assert enc.target.states == ("t1", "t2", "t3")
    assert enc.source.steps == {("s1", "s1"), ("s1", "s2")}
    assert enc.target.steps == {("t1", "t3"), ("t3", "t3")}


def test_shared_state_rejected():
    with pytest.raises(DisjointnessError) as info:
        validate_instance(raw(["x", "s"], ["x"], {"x": "x", "s": "x"}))
    assert info.value.code == "E_DISJOINT"


def test_partial_encoding(fig3):
    enc, _ = fig3
    mapping = dict(enc.mapping)
    del mapping["s_a"]
    with pytest.raises(PartialEncodingError):
        EncodingInstance(enc.source, enc.target, mapping)


def test_unknown_states():
    with pytest.raises(UnknownStateError):
        validate_instance(raw(["s"], ["t"], {"s": "u"}))
    with pytest.raises(UnknownStateError):
        system(["a"], steps=[("a", "b")])
    with pytest.raises(UnknownStateError):
        system(["a"], success=["b"])


def test_duplicate_and_bad_tokens():
    with pytest.raises(EncodabilityError):
        system(["a", "a"])
    with pytest.raises(EncodabilityError):
        system(["a b"])


def test_weak_derivatives(fig1, fig3):
    assert weak_derivatives(fig1[0].target, "t1") == {"t1", "t3"}
    assert weak_derivatives(fig3[0].target, "t2") == {"t2", "t4", "t_a", "t_c"}
    assert weak_derivatives(system(["s"]), "s") == {"s"}


def test_divergence(fig1):
    src, tgt = fig1[0].source, fig1[0].target
    assert is_divergent(src, "s1")
    assert not is_divergent(src, "s2")
    assert not is_divergent(tgt, "t2")
    # t1 never loops itself but reaches the loop at t3
    assert is_divergent(tgt, "t1")
    assert not is_divergent(system(["s"]), "s")


def test_predicates(fig3):
    tgt = fig3[0].target
    assert holds_predicate(tgt, "t4", "has-barb(b)")
    assert holds_predicate(tgt, "t1", "reaches-barb(c)")
    assert not holds_predicate(tgt, "t1", "has-barb(c)")
    assert not holds_predicate(system(["s", "u"], [("s", "u")]), "s", "reaches-barb(a)")


def test_success_predicates():
    sys = system(["s", "u", "w"], [("s", "u"), ("u", "w")], success=["w"])
    assert holds_predicate(sys, "s", "reaches-success")
    assert not holds_predicate(sys, "s", "has-success")
    assert holds_predicate(sys, "w", Pred("has-success"))


def test_family_predicate_needs_barb():
    with pytest.raises(EncodabilityError):
        holds_predicate(system(["s"]), "s", "has-barb")


def test_pred_parsing():
    assert Pred.parse("reaches-barb(a)") == Pred("reaches-barb", "a")
    assert str(Pred.parse("divergent")) == "divergent"
    assert Pred("has-barb").expand({"b", "a"}) == [Pred("has-barb", "a"), Pred("has-barb", "b")]
    with pytest.raises(EncodabilityError):
        Pred.parse("divergent(a)")
    with pytest.raises(EncodabilityError):
        Pred.parse("sometimes")


def test_combined_domain(fig1, fig3):
    c1 = combine(fig1[0])
    assert (len(c1.states), len(c1.steps)) == (5, 4)
    assert c1.states == ("s1", "s2", "t1", "t2", "t3")
    assert c1.origin("s2") == "source" and c1.origin("t2") == "target"
    c3 = combine(fig3[0])
    assert (len(c3.states), len(c3.steps)) == (11, 10)
    assert not any(c3.origin(x) != c3.origin(y) for x, y in c3.steps)


def test_empty_source_combined_is_target():
    tgt = system(["t1", "t2"], [("t1", "t2")], barbs={"t2": ["a"]})
    enc = EncodingInstance(system([]), tgt, {})
    assert enc.combined.states == tgt.states
    assert enc.combined.steps == tgt.steps
    assert enc.combined.barbs_of("t2") == {"a"}


def test_instances_compare_by_value(fig1):
    enc = fig1[0]
    again = validate_instance({
        "source": {"states": ["s2", "s1"], "steps": [["s1", "s2"], ["s1", "s1"]]},
        "target": {"states": ["t3", "t1", "t2"], "steps": [["t3", "t3"], ["t1", "t3"]]},
        "encoding": {"s2": "t2", "s1": "t1"},
    })
    assert again == enc
    assert enc["s1"] == "t1"
