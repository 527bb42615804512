import pytest

from lfgkit.avm import (
    Atom,
    FeatureStructure,
    SemanticForm,
    canonical_form,
    check_acyclic,
    get_path,
    parse_canonical,
    paths,
    put_path,
    subsumes,
    unify,
)
from lfgkit.exceptions import Clash, CyclicStructure, LFGError, NotAStructure


def fs(spec):
    return FeatureStructure(spec)


def test_unify_empty_is_identity():
    assert canonical_form(unify(fs({}), fs({"CASE": "NOM"}))) == "[ CASE NOM ]"


def test_atomic_clash_names_path():
    with pytest.raises(Clash) as err:
        unify(fs({"CASE": "NOM"}), fs({"CASE": "ACC"}))
    assert err.value.path == ("CASE",)
    assert str(err.value) == "clash(CASE, NOM, ACC)"


def test_distinct_instances_of_same_predicate_clash():
    a = fs({"PRED": SemanticForm("Fahrer", instance=1)})
    b = fs({"PRED": SemanticForm("Fahrer", instance=2)})
    with pytest.raises(Clash) as err:
        unify(a, b)
    assert err.value.path == ("PRED",)


def test_same_instance_unifies():
    p = SemanticForm("Fahrer", instance=7)
    assert canonical_form(unify(fs({"PRED": p}), fs({"PRED": p, "NUM": "SG"}))) == "[ NUM SG PRED 'Fahrer' ]"


def test_unify_is_non_destructive():
    a, b = fs({"SUBJ": {"CASE": "NOM"}}), fs({"SUBJ": {"NUM": "SG"}})
    unify(a, b)
    assert canonical_form(a) == "[ SUBJ [ CASE NOM ] ]"
    assert canonical_form(b) == "[ SUBJ [ NUM SG ] ]"


def test_unify_keeps_sharing():
    inner = {"CASE": "NOM"}
    a = fs({"SUBJ": inner, "TOPIC": inner})
    u = unify(a, fs({"SUBJ": {"NUM": "SG"}}))
    assert u["SUBJ"] is u["TOPIC"]
    assert str(u["TOPIC"]["NUM"]) == "SG"


def test_unify_through_sharing_detects_clash():
    inner = {"CASE": "NOM"}
    a = fs({"SUBJ": inner, "TOPIC": inner})
    with pytest.raises(Clash):
        unify(a, fs({"TOPIC": {"CASE": "ACC"}}))


def test_atom_against_structure_clashes():
    with pytest.raises(Clash):
        unify(fs({"SUBJ": "NOM"}), fs({"SUBJ": {"CASE": "NOM"}}))


def test_get_path():
    assert get_path(fs({"DEP": {"VFORM": "BASE"}}), ["DEP", "VFORM"]) == Atom("BASE")
    assert get_path(fs({"CASE": "NOM"}), ["NUM"]) is None
    with pytest.raises(NotAStructure) as err:
        get_path(fs({"CASE": "NOM"}), ["CASE", "NUM"])
    assert err.value.prefix == ("CASE",)


def test_get_path_never_creates():
    f = fs({})
    assert get_path(f, ["A", "B"]) is None
    assert canonical_form(f) == "[ ]"


def test_put_path():
    assert canonical_form(put_path(fs({}), ["SUBJ", "CASE"], "NOM")) == "[ SUBJ [ CASE NOM ] ]"
    assert canonical_form(put_path(fs({"TENSE": "FUT"}), ["TENSE"], "FUT")) == "[ TENSE FUT ]"
    with pytest.raises(Clash) as err:
        put_path(fs({"TENSE": "FUT"}), ["TENSE"], "FUTPERF")
    assert err.value.path == ("TENSE",)


def test_put_path_unifies_structures():
    out = put_path(fs({"SUBJ": {"CASE": "NOM"}}), ["SUBJ"], fs({"NUM": "SG"}))
    assert canonical_form(out) == "[ SUBJ [ CASE NOM NUM SG ] ]"


@pytest.mark.parametrize("op", [get_path, lambda f, p: put_path(f, p, "X")])
def test_empty_path_rejected(op):
    with pytest.raises(ValueError):
        op(fs({}), [])


def test_canonical_is_order_independent():
    assert canonical_form(fs({"CASE": "NOM", "NUM": "SG"})) == canonical_form(fs({"NUM": "SG", "CASE": "NOM"}))


def test_canonical_semantic_form_rendering():
    f = fs({"PRED": "'drehen<SUBJ,OBJ>'", "X": {"PRED": "'wird<XCOMP>SUBJ'"}})
    assert canonical_form(f) == "[ PRED 'drehen<SUBJ,OBJ>' X [ PRED 'wird<XCOMP>SUBJ' ] ]"


def test_canonical_reentrancy_tags():
    shared = {"PRED": "'Fahrer'"}
    f = fs({"SUBJ": shared, "XCOMP": {"SUBJ": shared}})
    assert canonical_form(f) == "[ SUBJ #1=[ PRED 'Fahrer' ] XCOMP [ SUBJ #1 ] ]"


def test_canonical_distinguishes_sharing_from_copies():
    shared = {"CASE": "NOM"}
    a = fs({"A": shared, "B": shared})
    b = fs({"A": {"CASE": "NOM"}, "B": {"CASE": "NOM"}})
    assert canonical_form(a) != canonical_form(b)


def test_cycle_detected():
    f = fs({"A": {}})
    f["A"]._arcs["BACK"] = f
    with pytest.raises(CyclicStructure):
        canonical_form(f)
    with pytest.raises(CyclicStructure):
        check_acyclic(f)


def test_parse_canonical_round_trip():
    shared = {"PRED": "'Fahrer'", "CASE": "NOM"}
    f = fs({"SUBJ": shared, "XCOMP": {"SUBJ": shared, "VFORM": "BASE"}, "TENSE": "FUT", "AUX": "+"})
    text = canonical_form(f)
    back = parse_canonical(text)
    assert canonical_form(back) == text
    assert back["SUBJ"] is back["XCOMP"]["SUBJ"]


def test_parse_canonical_rejects_garbage():
    with pytest.raises(LFGError):
        parse_canonical("[ A ")


def test_subsumes():
    general = fs({"CASE": "NOM"})
    specific = fs({"CASE": "NOM", "NUM": "SG"})
    assert subsumes(general, specific)
    assert not subsumes(specific, general)


def test_subsumes_respects_sharing():
    shared = {"CASE": "NOM"}
    reentrant = fs({"A": shared, "B": shared})
    copies = fs({"A": {"CASE": "NOM"}, "B": {"CASE": "NOM"}})
    assert subsumes(copies, reentrant)
    assert not subsumes(reentrant, copies)


def test_paths_lists_every_node():
    f = fs({"SUBJ": {"CASE": "NOM"}, "TENSE": "FUT"})
    found = [(p, canonical_form(v) if isinstance(v, FeatureStructure) else str(v)) for p, v in paths(f)]
    assert found == [(("SUBJ",), "[ CASE NOM ]"), (("SUBJ", "CASE"), "NOM"), (("TENSE",), "FUT")]


def test_semantic_form_parse():
    sf = SemanticForm.parse("'wird<XCOMP>SUBJ'")
    assert (sf.lemma, sf.subcat, sf.nonthematic) == ("wird", ("XCOMP",), ("SUBJ",))
    assert sf.governed == ("XCOMP", "SUBJ")
    assert str(SemanticForm.parse("Lachen")) == "'Lachen'"


def test_semantic_form_rejects_non_governable():
    with pytest.raises(LFGError):
        SemanticForm("x", ("GEN1",))


def test_semantic_form_identity():
    a = SemanticForm("Fahrer", instance=1)
    assert a != a.instantiate(2)
    assert a.same_predicate(a.instantiate(2))


def test_atom_equality():
    assert Atom("NOM") == Atom("NOM")
    assert Atom("NOM") != Atom("ACC")


def test_mapping_interface():
    f = fs({"B": "1", "A": {"C": "2"}})
    assert list(f) == ["A", "B"]
    assert "A" in f and "Z" not in f
    assert f.get("Z") is None
    assert len(f) == 2
