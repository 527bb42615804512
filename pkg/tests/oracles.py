"""Reference implementations the engine is checked against.

These re-derive results by brute force, without the search, pruning or
caching the engine uses.
"""

import itertools

from lfgkit.avm import (
    FeatureStructure,
    SemanticForm,
    canonical_form,
    check_acyclic,
    ensure_path,
    lookup,
    put_in_place,
)
from lfgkit.engine import check_completeness_coherence
from lfgkit.exceptions import LFGError
from lfgkit.grammar import CONSTRAIN, DEFINE, DOWN, F, PathExpr, expand_disjunctions, instantiate_uncertainty

# ---------------------------------------------------------------------------
# verb cluster under "wird"
# ---------------------------------------------------------------------------

CLUSTER_WORDS = ("drehen", "gedreht", "haben")
_CATEGORY = {"drehen": "V", "gedreht": "V", "haben": "AUX"}
_VFORM = {"drehen": "BASE", "gedreht": "PERFP", "haben": "BASE"}


def cluster_tense(seq):
    """Tense of "... wird <seq>", or None if the cluster is ill-formed.

    The main verb comes first and auxiliaries follow it.  Each element
    morphologically governs the one before it: haben wants a participle,
    wird wants an infinitive, and wird reads future perfect exactly when
    the infinitive it governs itself governs a participle.
    """
    if not seq or _CATEGORY[seq[0]] != "V" or any(_CATEGORY[w] != "AUX" for w in seq[1:]):
        return None
    for i, word in enumerate(seq):
        if word == "haben" and _VFORM[seq[i - 1]] != "PERFP":
            return None
    if _VFORM[seq[-1]] != "BASE":
        return None
    if len(seq) > 1 and _VFORM[seq[-2]] == "PERFP":
        return "FUTPERF"
    return "FUT"


def cluster_strings(max_len=3):
    for n in range(1, max_len + 1):
        yield from itertools.product(CLUSTER_WORDS, repeat=n)


# ---------------------------------------------------------------------------
# exhaustive constraint evaluation
# ---------------------------------------------------------------------------


def _constraint_sets(tree):
    """(up, down, owner, dnf) for every annotation and lexical entry, preorder."""
    out = []

    def walk(node, parent, counter):
        me = next(counter)
        if parent is not None:
            out.append((parent, me, me, expand_disjunctions(node.annotation), None))
        if node.is_leaf:
            out.append((me, me, me, expand_disjunctions(node.entry), node.form))
        for child in node.children:
            walk(child, me, counter)
        return me

    counter = itertools.count()
    walk(tree, None, counter)
    return out, next(counter)


def _concretize(eq, depth, gf):
    lhs = instantiate_uncertainty(eq.lhs, depth, gf) if eq.lhs.is_uncertain else [eq.lhs]
    rhs = instantiate_uncertainty(eq.rhs, depth, gf) if isinstance(eq.rhs, PathExpr) and eq.rhs.is_uncertain else [eq.rhs]
    return [(l, r) for l in lhs for r in rhs]


def _evaluate(n, equations):
    """Apply (up, down, owner, kind, lhs, rhs, uncertain) equations; None on failure."""
    f = [FeatureStructure() for _ in range(n)]
    m = [FeatureStructure() for _ in range(n)]

    def root(path, up, down):
        table = f if path.projection == F else m
        return table[down if path.anchor == DOWN else up]

    def steps_needed(path, uncertain):
        return max(0, len(path.steps) - 1) if uncertain else 0

    ordered = [e for e in equations if e[3] == DEFINE and not e[6]] + [e for e in equations if e[3] == DEFINE and e[6]]
    try:
        for up, down, owner, kind, lhs, rhs, unc in ordered:
            if isinstance(rhs, PathExpr):
                value = ensure_path(root(rhs, up, down), rhs.steps, steps_needed(rhs, unc))
                if value is None:
                    return None
            elif isinstance(rhs, SemanticForm):
                value = rhs.instantiate(owner + 1)
            else:
                value = rhs
            if not put_in_place(root(lhs, up, down), lhs.steps, value, steps_needed(lhs, unc)):
                return None
        check_acyclic(f[0])
        check_acyclic(m[0])
        for up, down, owner, kind, lhs, rhs, unc in equations:
            if kind == DEFINE:
                continue
            left = _lookup(root(lhs, up, down), lhs.steps)
            right = _lookup(root(rhs, up, down), rhs.steps) if isinstance(rhs, PathExpr) else rhs
            same = left is not None and right is not None and _same(left, right)
            if same != (kind == CONSTRAIN):
                return None
        check_completeness_coherence(f[0])
    except LFGError:
        return None
    return canonical_form(f[0]), canonical_form(m[0])


def _lookup(fs, steps):
    try:
        return lookup(fs, steps)
    except LFGError:
        return None


def _same(a, b):
    if isinstance(a, SemanticForm) or isinstance(b, SemanticForm):
        return isinstance(a, SemanticForm) and isinstance(b, SemanticForm) and a.instance == b.instance and a.same_predicate(b)
    if isinstance(a, FeatureStructure) or isinstance(b, FeatureStructure):
        return a is b
    return a == b


def exhaustive_analyses(tree, grammar):
    """Every (f, m) pair over the full product of disjuncts and path instantiations.

    Returns (set of canonical pairs, number of disjunctive lexemes).
    """
    sets, n = _constraint_sets(tree)
    disjunctive = sum(1 for *_, dnf, form in sets if form is not None and len(dnf) > 1)
    results = set()
    for choice in itertools.product(*[range(len(s[3])) for s in sets]):
        base = []
        uncertain = []
        for (up, down, owner, dnf, _), idx in zip(sets, choice):
            for eq in dnf[idx]:
                if eq.is_uncertain:
                    uncertain.append((up, down, owner, eq))
                else:
                    base.append((up, down, owner, eq.kind, eq.lhs, eq.rhs, False))
        options = [_concretize(eq, grammar.depth, grammar.gf) for *_, eq in uncertain]
        for picks in itertools.product(*options):
            concrete = [
                (up, down, owner, eq.kind, l, r, True) for (up, down, owner, eq), (l, r) in zip(uncertain, picks)
            ]
            result = _evaluate(n, base + concrete)
            if result is not None:
                results.add(result)
    return results, disjunctive
