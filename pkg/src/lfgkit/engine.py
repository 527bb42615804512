"""
Solving f- and m-structure constraints over c-structure trees.

Every node of a tree owns one f-structure and one m-structure.  The
annotation on a node (from the rule element that licensed it) relates
its mother's structures (``^``, ``%^``) to its own (``!``, ``%!``); a
leaf's lexical entry constrains the leaf's own structures.

Solving is two-phase.  Phase 1 unifies all defining equations, choosing
one disjunct per disjunctive annotation or entry and one concrete path
per uncertain equation; a choice whose unification clashes is pruned
together with everything below it.  Uncertain equations run after all
certain ones and may only extend structure that already exists, apart
from their final attribute.  Phase 2 checks constraining equations,
inequations, acyclicity, completeness and coherence on the finished
structures.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from lfgkit.avm import (
    GOVERNABLE,
    FeatureStructure,
    SemanticForm,
    _deref,
    canonical_form,
    check_acyclic,
    copy_structures,
    ensure_path,
    lookup,
    put_in_place,
)
from lfgkit.chart import DEFAULT_TREE_CAP, CTree, parse_cstructure
from lfgkit.exceptions import (
    Clash,
    CyclicStructure,
    Incoherent,
    Incomplete,
    LFGError,
    NotAStructure,
    WellformednessError,
)
from lfgkit.grammar import (
    CONSTRAIN,
    DEFINE,
    DOWN,
    F,
    NEGATE,
    Equation,
    Grammar,
    PathExpr,
    expand_disjunctions,
)


@dataclass(frozen=True)
class Analysis:
    ctree: CTree
    fstruct: FeatureStructure
    mstruct: FeatureStructure
    trace: tuple = ()

    def canonical(self) -> tuple[str, str, str]:
        return canonical_form(self.fstruct), canonical_form(self.mstruct), self.ctree.bracketed()

    @property
    def readings(self) -> list:
        """Genitive linking readings of a nominal f-structure; empty for clauses."""
        from lfgkit.linking import is_nominal, link_genitives

        if not is_nominal(self.fstruct):
            return []
        return link_genitives(self.fstruct)


@dataclass(frozen=True)
class _Unit:
    up: int
    down: int
    eq: Equation
    owner: int
    uncertain: bool = False


@dataclass
class _ChoicePoint:
    label: str | None
    options: list  # (original disjunct index, [units])


class _State:
    __slots__ = ("f", "m")

    def __init__(self, f, m):
        self.f = f
        self.m = m

    @classmethod
    def fresh(cls, n):
        return cls([FeatureStructure() for _ in range(n)], [FeatureStructure() for _ in range(n)])

    def copy(self) -> "_State":
        n = len(self.f)
        both = copy_structures(self.f + self.m)
        return _State(both[:n], both[n:])

    def root(self, projection: str, node: int):
        table = self.f if projection == F else self.m
        return _deref(table[node])


def check_completeness_coherence(fs: FeatureStructure) -> None:
    """Raise :class:`Incomplete` or :class:`Incoherent` on the first violation.

    Every function governed by a local PRED must be present (thematic ones
    with their own PRED); every governable function present must be
    governed.  GEN1, GEN2, POSS and other non-governable functions are
    never checked for coherence.
    """
    seen: set[int] = set()

    def walk(node, path):
        node = _deref(node)
        if not isinstance(node, FeatureStructure) or id(node) in seen:
            return
        seen.add(id(node))
        pred = node.get("PRED")
        governed = pred.governed if isinstance(pred, SemanticForm) else ()
        if isinstance(pred, SemanticForm):
            for fn in pred.subcat:
                arg = node.get(fn)
                if not isinstance(arg, FeatureStructure) or not isinstance(arg.get("PRED"), SemanticForm):
                    raise Incomplete(path, fn)
            for fn in pred.nonthematic:
                if fn not in node:
                    raise Incomplete(path, fn)
        for attr in node.keys():
            if attr in GOVERNABLE and attr not in governed:
                raise Incoherent(path, attr)
        for attr in node.keys():
            walk(node[attr], path + (attr,))

    walk(fs, ())


class Solver:
    """Constraint solver for one c-structure tree.

    ``force`` maps a surface form to the disjunct index its entry must
    use; other indices are discarded before solving.
    """

    def __init__(self, tree: CTree, grammar: Grammar, force: Mapping[str, int] | None = None):
        self.tree = tree
        self.grammar = grammar
        self.nodes: list[CTree] = []
        self.base: list[_Unit] = []
        self.points: list[_ChoicePoint] = []
        self.diagnostics: list[str] = []
        # final per-node structures of each returned analysis, by canonical key
        self.states: dict[tuple, _State] = {}
        force = dict(force or {})
        self._index(tree, None, force)

    def _index(self, node: CTree, parent: int | None, force):
        me = len(self.nodes)
        self.nodes.append(node)
        if parent is not None:
            self._add(None, expand_disjunctions(node.annotation), parent, me, me)
        if node.is_leaf:
            dnf = expand_disjunctions(node.entry)
            options = list(enumerate(dnf))
            if node.form in force:
                options = [(i, d) for i, d in options if i == force[node.form]]
            self._add_options(node.form if len(dnf) > 1 else None, options, me, me, me)
        for child in node.children:
            self._index(child, me, force)

    def _add(self, label, dnf, up, down, owner):
        self._add_options(label, list(enumerate(dnf)), up, down, owner)

    def _add_options(self, label, options, up, down, owner):
        def units(eqs):
            return [_Unit(up, down, eq, owner) for eq in eqs]

        if len(options) == 1 and label is None:
            self.base.extend(units(options[0][1]))
        else:
            self.points.append(_ChoicePoint(label, [(i, units(d)) for i, d in options]))

    # -- candidate generation ------------------------------------------------

    def candidates(self, unit: _Unit) -> list[_Unit]:
        """Concrete units for an uncertain unit, in deterministic order."""
        eq = unit.eq
        lhs = self.grammar.uncertainty_candidates(eq.lhs) if eq.lhs.is_uncertain else [eq.lhs]
        if isinstance(eq.rhs, PathExpr) and eq.rhs.is_uncertain:
            rhs = self.grammar.uncertainty_candidates(eq.rhs)
        else:
            rhs = [eq.rhs]
        return [
            _Unit(unit.up, unit.down, Equation(eq.kind, l, r), unit.owner, uncertain=True)
            for l in lhs
            for r in rhs
        ]

    # -- primitive steps -----------------------------------------------------

    def _node_for(self, unit: _Unit, path: PathExpr) -> int:
        return unit.down if path.anchor == DOWN else unit.up

    def _apply(self, st: _State, unit: _Unit) -> bool:
        """Run one defining equation; False if an uncertain path has no target."""
        eq = unit.eq
        if isinstance(eq.rhs, PathExpr):
            rroot = st.root(eq.rhs.projection, self._node_for(unit, eq.rhs))
            must = max(0, len(eq.rhs.steps) - 1) if unit.uncertain else 0
            value = ensure_path(rroot, eq.rhs.steps, must)
            if value is None:
                return False
        elif isinstance(eq.rhs, SemanticForm):
            value = eq.rhs.instantiate(unit.owner + 1)
        else:
            value = eq.rhs
        lroot = st.root(eq.lhs.projection, self._node_for(unit, eq.lhs))
        must = max(0, len(eq.lhs.steps) - 1) if unit.uncertain else 0
        return put_in_place(lroot, eq.lhs.steps, value, must)

    def _holds(self, st: _State, unit: _Unit) -> bool:
        eq = unit.eq
        try:
            left = lookup(st.root(eq.lhs.projection, self._node_for(unit, eq.lhs)), eq.lhs.steps)
        except NotAStructure:
            left = None
        if isinstance(eq.rhs, PathExpr):
            try:
                right = lookup(st.root(eq.rhs.projection, self._node_for(unit, eq.rhs)), eq.rhs.steps)
            except NotAStructure:
                right = None
        else:
            right = eq.rhs
        same = left is not None and right is not None and _same_value(left, right)
        if eq.kind == CONSTRAIN:
            return same
        if eq.kind == NEGATE:
            return not same
        raise LFGError(f"not a check: {eq}")

    def _define_all(self, st: _State, units, trace) -> bool:
        for unit in units:
            try:
                ok = self._apply(st, unit)
            except (Clash, NotAStructure) as exc:
                self._note(trace, f"{unit.eq} at {self.nodes[unit.owner].category}: {exc}")
                return False
            if not ok:
                self._note(trace, f"{unit.eq}: path does not exist")
                return False
        return True

    def _note(self, trace, message):
        where = ",".join(f"{form}#{i}" for form, i in trace)
        self.diagnostics.append(f"[{where}] {message}" if where else message)

    def _finish(self, st: _State, checks, trace) -> Analysis | None:
        froot, mroot = st.root(F, 0), st.root("m", 0)
        try:
            check_acyclic(froot)
            check_acyclic(mroot)
        except CyclicStructure as exc:
            self._note(trace, str(exc))
            return None
        for unit in checks:
            if not self._holds(st, unit):
                self._note(trace, f"{unit.eq} at {self.nodes[unit.owner].category} failed")
                return None
        try:
            check_completeness_coherence(froot)
        except WellformednessError as exc:
            self._note(trace, str(exc))
            return None
        fcopy, mcopy = copy_structures([froot]) + copy_structures([mroot])
        self._last = st
        return Analysis(self.tree, fcopy, mcopy, tuple(trace))

    # -- search ---------------------------------------------------------------

    def _split(self, units):
        defines, uncertain, checks = [], [], []
        for u in units:
            if u.eq.is_uncertain:
                uncertain.append(u)
            elif u.eq.kind == DEFINE:
                defines.append(u)
            else:
                checks.append(u)
        return defines, uncertain, checks

    def solve(self) -> list[Analysis]:
        """All analyses of the tree, deduplicated, in search order."""
        start = _State.fresh(len(self.nodes))
        defines, uncertain, checks = self._split(self.base)
        if not self._define_all(start, defines, ()):
            return []
        out: list[Analysis] = []
        seen: set = set()
        for analysis in self._choose(start, 0, uncertain, checks, ()):
            key = analysis.canonical()
            if key not in seen:
                seen.add(key)
                out.append(analysis)
                self.states[key] = self._last
        return out

    def _choose(self, st, k, uncertain, checks, trace) -> Iterator[Analysis]:
        if k == len(self.points):
            yield from self._resolve(st, uncertain, 0, checks, trace)
            return
        point = self.points[k]
        for index, units in point.options:
            branch = trace + ((point.label, index),) if point.label is not None else trace
            defines, unc, chk = self._split(units)
            nxt = st.copy()
            if not self._define_all(nxt, defines, branch):
                continue
            yield from self._choose(nxt, k + 1, uncertain + unc, checks + chk, branch)

    def _resolve(self, st, uncertain, j, checks, trace) -> Iterator[Analysis]:
        if j == len(uncertain):
            result = self._finish(st, checks, trace)
            if result is not None:
                yield result
            return
        for cand in self.candidates(uncertain[j]):
            if cand.eq.kind != DEFINE:
                yield from self._resolve(st, uncertain, j + 1, checks + [cand], trace)
                continue
            nxt = st.copy()
            if self._define_all(nxt, [cand], trace):
                yield from self._resolve(nxt, uncertain, j + 1, checks, trace)

    # -- exhaustive evaluation (used to cross-check the search) -------------

    def disjunct_space(self) -> list[list[int]]:
        """Index lists for each choice point."""
        return [[i for i, _ in p.options] for p in self.points]

    def uncertain_units(self, choice: Sequence[int]) -> list[_Unit]:
        units = list(self.base)
        for point, idx in zip(self.points, choice):
            units.extend(dict(point.options)[idx])
        return [u for u in units if u.eq.is_uncertain]

    def evaluate(self, choice: Sequence[int], instantiation: Sequence[int]) -> Analysis | None:
        """Evaluate one fully determined candidate without any pruning."""
        units = list(self.base)
        trace = []
        for point, idx in zip(self.points, choice):
            units.extend(dict(point.options)[idx])
            if point.label is not None:
                trace.append((point.label, idx))
        certain = [u for u in units if not u.eq.is_uncertain]
        uncertain = [u for u in units if u.eq.is_uncertain]
        concrete = [self.candidates(u)[i] for u, i in zip(uncertain, instantiation)]
        st = _State.fresh(len(self.nodes))
        defines = [u for u in certain if u.eq.kind == DEFINE] + [u for u in concrete if u.eq.kind == DEFINE]
        checks = [u for u in certain + concrete if u.eq.kind != DEFINE]
        if not self._define_all(st, defines, trace):
            return None
        return self._finish(st, checks, trace)


def _same_value(a, b) -> bool:
    a, b = _deref(a), _deref(b)
    if isinstance(a, SemanticForm) or isinstance(b, SemanticForm):
        return isinstance(a, SemanticForm) and a.same_predicate(b)
    if isinstance(a, FeatureStructure) or isinstance(b, FeatureStructure):
        return a is b
    return a == b


def solve(
    tree: CTree,
    grammar: Grammar,
    force: Mapping[str, int] | None = None,
    diagnostics: list | None = None,
) -> list[Analysis]:
    solver = Solver(tree, grammar, force)
    result = solver.solve()
    if diagnostics is not None:
        diagnostics.extend(solver.diagnostics)
    return result


def tokenize(sentence: str) -> list[str]:
    return sentence.split()


def analyze(
    sentence: str,
    grammar: Grammar,
    depth: int | None = None,
    force: Mapping[str, int] | None = None,
    diagnostics: list | None = None,
    cap: int = DEFAULT_TREE_CAP,
) -> list[Analysis]:
    """Tokenize on whitespace, parse, and solve every tree in order.

    Raises :class:`~lfgkit.exceptions.UnknownToken` for words missing
    from the lexicon; returns an empty list for ungrammatical input.
    """
    if depth is not None:
        grammar = grammar.with_depth(depth)
    out = []
    for tree in parse_cstructure(tokenize(sentence), grammar, cap):
        out.extend(solve(tree, grammar, force, diagnostics))
    return out

