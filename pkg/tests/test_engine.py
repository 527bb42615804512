import pytest

from lfgkit.avm import FeatureStructure, canonical_form
from lfgkit.chart import Chart, parse_cstructure
from lfgkit.engine import Solver, analyze, check_completeness_coherence, solve, tokenize
from lfgkit.exceptions import Incoherent, Incomplete, UnknownToken
from lfgkit.fragments import fragment_flat, fragment_np, fragment_raising
from lfgkit.grammar import CONSTRAIN, NEGATE, expand_disjunctions, load_grammar

FUTPERF = "Der Fahrer wird den Hebel gedreht haben"


# -- c-structure -----------------------------------------------------------


def test_futperf_has_one_tree():
    (tree,) = parse_cstructure(tokenize(FUTPERF), fragment_flat())
    assert tree.shape() == "S(NP(DET,N),VP(AUX,VP(NP(DET,N),V'(V,AUX))))"
    assert tree.leaves() == FUTPERF.split()


def test_noun_phrase_alone_is_not_a_sentence():
    assert parse_cstructure(tokenize("Der Fahrer"), fragment_flat()) == []


def test_np_with_two_genitives():
    (tree,) = parse_cstructure(tokenize("Karls Behandlung Peters"), fragment_np())
    assert tree.shape() == "NP(NP(PN),N,NP(PN))"


def test_unknown_token():
    with pytest.raises(UnknownToken) as err:
        parse_cstructure(["Der", "Fahrrad"], fragment_flat())
    assert err.value.form == "Fahrrad"


def test_best_partial_span():
    chart = Chart(tokenize("Fahrer der wird"), fragment_flat())
    assert chart.best_partial() == ("N", 0, 1)
    chart = Chart(tokenize("Der Fahrer der"), fragment_flat())
    assert chart.best_partial() == ("NP", 0, 2)


def test_empty_input():
    assert parse_cstructure([], fragment_flat()) == []


AMBIG = """\
start S
rule S -> S S
rule S -> a
lex x a
"""


def test_left_recursion_terminates_and_trees_are_ordered():
    g = load_grammar(AMBIG)
    trees = parse_cstructure(["x", "x", "x"], g)
    assert [t.shape() for t in trees] == ["S(S(a),S(S(a),S(a)))", "S(S(S(a),S(a)),S(a))"]


def test_unary_cycle_is_cut():
    g = load_grammar("start S\nrule S -> T\nrule T -> S\nrule T -> a\nlex x a")
    assert [t.shape() for t in parse_cstructure(["x"], g)] == ["S(T(a))"]


def test_tree_cap(caplog):
    g = load_grammar(AMBIG)
    trees = parse_cstructure(["x"] * 9, g, cap=5)
    assert len(trees) == 5
    assert "tree cap" in caplog.text


def test_lexical_ambiguity_multiplies_trees():
    g = load_grammar("start S\nrule S -> A\nrule S -> B\nlex x A\nlex x B")
    assert [t.shape() for t in parse_cstructure(["x"], g)] == ["S(A)", "S(B)"]


# -- solving -------------------------------------------------------------------


def test_futperf_flat_analysis():
    (a,) = analyze(FUTPERF, fragment_flat())
    f = canonical_form(a.fstruct)
    assert "TENSE FUTPERF" in f and "XCOMP" not in f
    assert canonical_form(a.mstruct).count("DEP") == 2


def test_forcing_wrong_wird_branch_gives_nothing():
    g = fragment_flat()
    (tree,) = parse_cstructure(tokenize(FUTPERF), g)
    assert Solver(tree, g, force={"wird": 0}).solve() == []
    assert len(Solver(tree, g, force={"wird": 1}).solve()) == 1


def test_simple_future():
    (a,) = analyze("Der Fahrer wird den Hebel drehen", fragment_flat())
    assert str(a.fstruct["TENSE"]) == "FUT"


@pytest.mark.parametrize("cluster", ["gedreht haben haben", "haben gedreht", "gedreht", "drehen haben"])
def test_bad_clusters(cluster):
    assert analyze(f"Der Fahrer wird den Hebel {cluster}", fragment_flat()) == []


def test_diagnostics_name_failed_constraint():
    notes = []
    assert analyze("Der Fahrer wird den Hebel gedreht", fragment_flat(), diagnostics=notes) == []
    assert any("=c BASE" in n for n in notes)


def test_case_resolves_grammatical_functions():
    (a,) = analyze("Den Hebel wird der Fahrer drehen", fragment_flat())
    assert a.fstruct["SUBJ"]["PRED"].lemma == "Fahrer"
    assert a.fstruct["OBJ"]["PRED"].lemma == "Hebel"


def test_same_word_twice_does_not_unify():
    # both NPs would have to be the subject; their PREDs are distinct instances
    assert analyze("Der Fahrer wird der Fahrer drehen", fragment_flat()) == []


def test_finiteness_required():
    assert analyze("Der Fahrer den Hebel drehen", fragment_flat()) == []


def test_depth_zero_still_parses_flat():
    assert len(analyze(FUTPERF, fragment_flat(), depth=0)) == 1


def test_raising_needs_depth_for_object():
    assert analyze(FUTPERF, fragment_raising(), depth=0) == []
    assert len(analyze(FUTPERF, fragment_raising(), depth=1)) == 1


def test_analyses_are_deduplicated():
    g = fragment_raising()
    (tree,) = parse_cstructure(tokenize(FUTPERF), g)
    result = solve(tree, g)
    keys = [a.canonical() for a in result]
    assert len(keys) == len(set(keys)) == 1


def _checks_of(solver, analysis):
    """Constraining equations and inequations active in the analysis's disjunct choice."""
    chosen = dict(analysis.trace)
    units = list(solver.base)
    for point in solver.points:
        if point.label is not None:
            units.extend(dict(point.options)[chosen[point.label]])
    return [u for u in units if u.eq.kind in (CONSTRAIN, NEGATE)]


@pytest.mark.parametrize(
    "build,sentence",
    [
        (fragment_flat, FUTPERF),
        (fragment_flat, "Der Fahrer des Vorfalls wird den Hebel drehen"),
        (fragment_raising, FUTPERF),
        (fragment_np, "Karls Darstellung des Vorfalls"),
        (fragment_np, "Roms Belagerung"),
    ],
)
def test_solutions_satisfy_their_checks(build, sentence):
    g = build()
    (tree,) = parse_cstructure(tokenize(sentence), g)
    solver = Solver(tree, g)
    result = solver.solve()
    assert result
    for a in result:
        state = solver.states[a.canonical()]
        checks = _checks_of(solver, a)
        assert checks
        for unit in checks:
            assert solver._holds(state, unit), str(unit.eq)


def test_trace_records_labels():
    (a,) = analyze("Karls Darstellung des Vorfalls", fragment_np())
    assert a.trace == (("des", 0),)


def test_disjunct_space_shape():
    g = fragment_flat()
    (tree,) = parse_cstructure(tokenize(FUTPERF), g)
    assert Solver(tree, g).disjunct_space() == [[0, 1]]
    (wird,) = g.lexicon["wird"]
    assert len(expand_disjunctions(wird)) == 2


# -- completeness and coherence --------------------------------------------


DREHEN_FS = {
    "PRED": "'drehen<SUBJ,OBJ>'",
    "TENSE": "FUTPERF",
    "SUBJ": {"PRED": "'Fahrer'"},
    "OBJ": {"PRED": "'Hebel'"},
}


def test_drehen_structure_is_wellformed():
    check_completeness_coherence(FeatureStructure(DREHEN_FS))


def test_missing_object_is_incomplete():
    spec = dict(DREHEN_FS)
    del spec["OBJ"]
    with pytest.raises(Incomplete) as err:
        check_completeness_coherence(FeatureStructure(spec))
    assert str(err.value) == "incomplete(root, OBJ)"


def test_argument_without_pred_is_incomplete():
    spec = dict(DREHEN_FS, OBJ={"CASE": "ACC"})
    with pytest.raises(Incomplete):
        check_completeness_coherence(FeatureStructure(spec))


def test_extra_function_is_incoherent():
    spec = dict(DREHEN_FS, OBJ2={"PRED": "'x'"})
    with pytest.raises(Incoherent) as err:
        check_completeness_coherence(FeatureStructure(spec))
    assert str(err.value) == "incoherent(root, OBJ2)"


def test_nested_violation_reports_path():
    spec = {"PRED": "'a<XCOMP>SUBJ'", "SUBJ": {"PRED": "'s'"}, "XCOMP": {"PRED": "'b<SUBJ,OBJ>'", "SUBJ": {"PRED": "'s'"}}}
    with pytest.raises(Incomplete) as err:
        check_completeness_coherence(FeatureStructure(spec))
    assert str(err.value) == "incomplete(XCOMP, OBJ)"


def test_genitives_are_exempt():
    check_completeness_coherence(FeatureStructure({"PRED": "'Lachen'", "GEN1": {"PRED": "'Elisabeth'"}}))


def test_nonthematic_function_needs_no_pred():
    check_completeness_coherence(FeatureStructure({"PRED": "'wird<XCOMP>SUBJ'", "SUBJ": {}, "XCOMP": {"PRED": "'x<SUBJ>'", "SUBJ": {"PRED": "'s'"}}}))


def test_nonthematic_function_must_be_present():
    with pytest.raises(Incomplete):
        check_completeness_coherence(FeatureStructure({"PRED": "'wird<XCOMP>SUBJ'", "XCOMP": {"PRED": "'x'"}}))


def test_governable_function_without_pred_is_incoherent():
    with pytest.raises(Incoherent):
        check_completeness_coherence(FeatureStructure({"SUBJ": {"PRED": "'s'"}}))
