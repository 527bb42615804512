"""
Annotated phrase-structure rules, disjunctive lexical entries and the
grammar DSL.

Annotations talk about two projections of each c-structure node: the
f-structure (``^`` for the mother's, ``!`` for the node's own) and the
m-structure (``%^`` and ``%!``).  A path may contain one Kleene-starred
attribute (``XCOMP*``) and the function variable ``GF``; such paths are
expanded into concrete paths by :func:`instantiate_uncertainty`.

DSL summary (one statement per line; a statement continues while braces
or parentheses are open; ``#`` starts a comment)::

    gf SUBJ OBJ
    start S
    depth 3
    rule S -> NP { (^ XCOMP* GF)=! } VP { ^=! %^=%! (%! FIN)=c + }
    rule NP -> ( DET | NP { (^ GEN1)=! } )? N NP? { (^ GEN2)=! }
    lex wird AUX { (%^ AUX)=+ { (%^ DEP VFORM)=c BASE (^ TENSE)=FUT
                              | (^ TENSE)=FUTPERF } }
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Iterable, Sequence, Union

from lfgkit.avm import Atom, SemanticForm
from lfgkit.exceptions import BadPath, GrammarSyntaxError, LFGError, UnknownCategory

F = "f"
M = "m"
UP = "up"
DOWN = "down"

DEFAULT_GF = ("SUBJ", "OBJ", "GEN1", "GEN2")
DEFAULT_DEPTH = 3


@dataclass(frozen=True)
class Star:
    """Kleene-starred attribute: zero or more repetitions of ``attr``."""

    attr: str

    def __str__(self):
        return f"{self.attr}*"


@dataclass(frozen=True)
class FunctionVariable:
    """Stands for any member of the grammar's declared function set."""

    name: str = "GF"

    def __str__(self):
        return self.name


GF = FunctionVariable()

Step = Union[str, Star, FunctionVariable]


@dataclass(frozen=True)
class PathExpr:
    projection: str
    anchor: str
    steps: tuple = ()

    @property
    def is_uncertain(self) -> bool:
        return any(not isinstance(s, str) for s in self.steps)

    def anchor_text(self) -> str:
        mark = "^" if self.anchor == UP else "!"
        return ("%" if self.projection == M else "") + mark

    def __str__(self):
        if not self.steps:
            return self.anchor_text()
        return "(" + " ".join([self.anchor_text()] + [str(s) for s in self.steps]) + ")"


DEFINE = "="
CONSTRAIN = "=c"
NEGATE = "~="


@dataclass(frozen=True)
class Equation:
    kind: str
    lhs: PathExpr
    rhs: Union[PathExpr, Atom, SemanticForm]

    @property
    def is_uncertain(self) -> bool:
        return self.lhs.is_uncertain or (isinstance(self.rhs, PathExpr) and self.rhs.is_uncertain)

    def __str__(self):
        sep = " " if self.kind == CONSTRAIN else ""
        return f"{self.lhs}{self.kind}{sep}{self.rhs}"


@dataclass(frozen=True)
class Disjunction:
    alternatives: tuple
    labels: tuple = ()

    def __post_init__(self):
        if len(self.alternatives) < 2:
            raise LFGError("a disjunction needs at least two alternatives")
        if any(not alt for alt in self.alternatives):
            raise LFGError("disjuncts must be non-empty")
        if not self.labels:
            object.__setattr__(self, "labels", (None,) * len(self.alternatives))


Constraint = Union[Equation, Disjunction]


@dataclass(frozen=True)
class Element:
    category: str
    annotation: tuple = ()


@dataclass(frozen=True)
class Slot:
    """One rhs position: a single element or an alternation, possibly optional."""

    options: tuple
    optional: bool = False


@dataclass(frozen=True)
class Rule:
    lhs: str
    rhs: tuple

    def expansions(self) -> list[tuple[Element, ...]]:
        """All concrete element sequences, optional slots resolved, in textual order."""
        choices = []
        for slot in self.rhs:
            opts = list(slot.options)
            if slot.optional:
                opts = opts + [None]
            choices.append(opts)
        out = []
        for combo in itertools.product(*choices):
            seq = tuple(e for e in combo if e is not None)
            if seq:
                out.append(seq)
        return out


@dataclass(frozen=True)
class LexEntry:
    form: str
    category: str
    constraints: tuple = ()


@dataclass(frozen=True)
class Grammar:
    rules: tuple
    entries: tuple
    start: str = "S"
    gf: tuple = DEFAULT_GF
    depth: int = DEFAULT_DEPTH

    @cached_property
    def lexicon(self) -> dict[str, list[LexEntry]]:
        lex: dict[str, list[LexEntry]] = {}
        for entry in self.entries:
            lex.setdefault(entry.form, []).append(entry)
        return lex

    @cached_property
    def lexical_categories(self) -> frozenset:
        return frozenset(e.category for e in self.entries)

    @cached_property
    def phrasal_categories(self) -> frozenset:
        return frozenset(r.lhs for r in self.rules)

    @cached_property
    def definable(self) -> dict[str, frozenset]:
        """Attributes that some certain defining equation can introduce, per projection."""
        found = {F: set(), M: set()}

        def visit(constraints):
            for c in constraints:
                if isinstance(c, Disjunction):
                    for alt in c.alternatives:
                        visit(alt)
                elif c.kind == DEFINE:
                    for side in (c.lhs, c.rhs):
                        if not isinstance(side, PathExpr) or not side.steps:
                            continue
                        if not side.is_uncertain:
                            found[side.projection].update(side.steps)
                            continue
                        # only the final step of an uncertain path may be created
                        last = side.steps[-1]
                        if isinstance(last, FunctionVariable):
                            found[side.projection].update(self.gf)
                        else:
                            found[side.projection].add(last if isinstance(last, str) else last.attr)

        for rule in self.rules:
            for slot in rule.rhs:
                for el in slot.options:
                    visit(el.annotation)
        for entry in self.entries:
            visit(entry.constraints)
        return {k: frozenset(v) for k, v in found.items()}

    def with_depth(self, depth: int) -> "Grammar":
        return replace(self, depth=depth)

    def uncertainty_candidates(self, path: PathExpr) -> list[PathExpr]:
        """Concrete instantiations of ``path`` that this grammar could ever satisfy.

        Instantiations whose intermediate steps use an attribute no certain
        defining equation introduces are dropped: they can only address
        structure that never exists.
        """
        definable = self.definable[path.projection]
        out = []
        for cand in instantiate_uncertainty(path, self.depth, self.gf):
            if all(step in definable for step in cand.steps[:-1]):
                out.append(cand)
        return out


# ---------------------------------------------------------------------------
# Disjunction and uncertainty expansion
# ---------------------------------------------------------------------------


def expand_disjunctions(item) -> list[tuple[Equation, ...]]:
    """Disjunctive normal form of an entry or constraint list, in textual order."""
    constraints = item.constraints if isinstance(item, LexEntry) else tuple(item)
    return [tuple(eqs) for eqs in _dnf(constraints)]


def _dnf(constraints) -> list[list[Equation]]:
    result: list[list[Equation]] = [[]]
    for c in constraints:
        if isinstance(c, Equation):
            for conj in result:
                conj.append(c)
            continue
        options = []
        for alt in c.alternatives:
            options.extend(_dnf(alt))
        result = [conj + opt for conj in result for opt in options]
    return result


def instantiate_uncertainty(path: PathExpr, depth: int, gf: Sequence[str] = DEFAULT_GF) -> list[PathExpr]:
    """Replace the starred step by 0..depth repetitions and GF by each function.

    Order is depth-major, then by the order of ``gf``.
    """
    stars = [i for i, s in enumerate(path.steps) if isinstance(s, Star)]
    if len(stars) > 1:
        raise BadPath(str(path), "more than one starred segment")
    if stars:
        i = stars[0]
        attr = path.steps[i].attr
        bodies = [path.steps[:i] + (attr,) * n + path.steps[i + 1 :] for n in range(depth + 1)]
    else:
        bodies = [path.steps]
    out = []
    for body in bodies:
        slots = [[s] if isinstance(s, str) else list(gf) for s in body]
        for combo in itertools.product(*slots):
            out.append(PathExpr(path.projection, path.anchor, tuple(combo)))
    return out


# ---------------------------------------------------------------------------
# DSL reader
# ---------------------------------------------------------------------------

_TOKEN_SPEC = [
    ("NEWLINE", r"\n"),
    ("SKIP", r"[ \t\r]+|#[^\n]*"),
    ("ARROW", r"->"),
    ("CONSTRAIN", r"=c(?![\w'])"),
    ("NEGATE", r"~="),
    ("DEFINE", r"="),
    ("SEMFORM", r"'[^'\n]*'"),
    ("LABEL", r'"[^"\n]*"'),
    ("MUP", r"%\^"),
    ("MDOWN", r"%!"),
    ("UP", r"\^"),
    ("DOWN", r"!"),
    ("LBRACE", r"\{"),
    ("RBRACE", r"\}"),
    ("LPAREN", r"\("),
    ("RPAREN", r"\)"),
    ("BAR", r"\|"),
    ("QMARK", r"\?"),
    ("STARWORD", r"[^\W\d][\w'\-]*\*"),
    ("WORD", r"[\w][\w'\-.]*"),
    ("SIGN", r"[+\-]"),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{n}>{p})" for n, p in _TOKEN_SPEC))
_ANCHORS = {"UP": (F, UP), "DOWN": (F, DOWN), "MUP": (M, UP), "MDOWN": (M, DOWN)}
_OPS = {"DEFINE": DEFINE, "CONSTRAIN": CONSTRAIN, "NEGATE": NEGATE}


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    line, line_start, pos = 1, 0, 0
    depth = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise GrammarSyntaxError(line, pos - line_start + 1, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        col = pos - line_start + 1
        pos = m.end()
        if kind == "NEWLINE":
            if depth == 0:
                toks.append(_Tok("NEWLINE", "\n", line, col))
            line += 1
            line_start = pos
            continue
        if kind == "SKIP":
            continue
        if kind in ("LBRACE", "LPAREN"):
            depth += 1
        elif kind in ("RBRACE", "RPAREN"):
            depth = max(0, depth - 1)
        toks.append(_Tok(kind, m.group(), line, col))
    toks.append(_Tok("NEWLINE", "\n", line, pos - line_start + 1))
    toks.append(_Tok("EOF", "", line, pos - line_start + 1))
    return toks


class _Reader:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, message, tok=None):
        tok = tok or self.tok
        return GrammarSyntaxError(tok.line, tok.col, message)

    def take(self, *kinds) -> _Tok:
        tok = self.tok
        if tok.kind not in kinds:
            want = " or ".join(kinds)
            got = "end of statement" if tok.kind == "NEWLINE" else repr(tok.text)
            raise self.error(f"expected {want}, found {got}")
        self.i += 1
        return tok

    def at(self, *kinds) -> bool:
        return self.tok.kind in kinds

    # statements ------------------------------------------------------------

    def read(self):
        rules, entries = [], []
        settings: dict = {}
        while not self.at("EOF"):
            if self.at("NEWLINE"):
                self.i += 1
                continue
            kw = self.take("WORD")
            if kw.text == "rule":
                rules.append(self.rule())
            elif kw.text == "lex":
                entries.append(self.lex())
            elif kw.text == "gf":
                names = []
                while self.at("WORD"):
                    names.append(self.take("WORD").text)
                if not names:
                    raise self.error("gf needs at least one function name")
                settings["gf"] = tuple(names)
            elif kw.text == "start":
                settings["start"] = self.take("WORD").text
            elif kw.text == "depth":
                d = self.take("WORD")
                if not d.text.isdigit():
                    raise self.error("depth must be a non-negative integer", d)
                settings["depth"] = int(d.text)
            else:
                raise self.error(f"unknown statement {kw.text!r}", kw)
            self.take("NEWLINE")
        return rules, entries, settings

    def rule(self) -> Rule:
        lhs = self.take("WORD").text
        self.take("ARROW")
        slots = []
        while not self.at("NEWLINE", "EOF"):
            slots.append(self.slot())
        if not slots:
            raise self.error("empty rule body")
        return Rule(lhs, tuple(slots))

    def slot(self) -> Slot:
        if self.at("LPAREN"):
            self.take("LPAREN")
            options = [self.element()]
            while self.at("BAR"):
                self.take("BAR")
                options.append(self.element())
            self.take("RPAREN")
            optional = bool(self.at("QMARK") and self.take("QMARK"))
            return Slot(tuple(options), optional)
        cat = self.take("WORD").text
        optional = bool(self.at("QMARK") and self.take("QMARK"))
        annotation = self.block() if self.at("LBRACE") else ()
        return Slot((Element(cat, _default_annotation(annotation)),), optional)

    def element(self) -> Element:
        cat = self.take("WORD").text
        annotation = self.block() if self.at("LBRACE") else ()
        return Element(cat, _default_annotation(annotation))

    def lex(self) -> LexEntry:
        form_tok = self.take("WORD", "SIGN")
        cat = self.take("WORD").text
        constraints = self.block() if self.at("LBRACE") else ()
        return LexEntry(form_tok.text, cat, constraints)

    # constraints -----------------------------------------------------------

    def block(self) -> tuple:
        open_tok = self.take("LBRACE")
        alternatives, labels = [], []
        current, label = [], None
        while True:
            if self.at("RBRACE"):
                self.take("RBRACE")
                break
            if self.at("EOF"):
                raise self.error("unterminated '{'", open_tok)
            if self.at("BAR"):
                self.take("BAR")
                alternatives.append(tuple(current))
                labels.append(label)
                current, label = [], None
                continue
            if self.at("LABEL"):
                label = self.take("LABEL").text[1:-1]
                continue
            if self.at("LBRACE"):
                current.extend(self.block())
                continue
            current.append(self.equation())
        alternatives.append(tuple(current))
        labels.append(label)
        if len(alternatives) == 1:
            return alternatives[0]
        if any(not alt for alt in alternatives):
            raise self.error("empty disjunct", open_tok)
        return (Disjunction(tuple(alternatives), tuple(labels)),)

    def equation(self) -> Equation:
        lhs = self.path()
        op = self.take("DEFINE", "CONSTRAIN", "NEGATE")
        rhs = self.value()
        return Equation(_OPS[op.kind], lhs, rhs)

    def value(self):
        if self.at("LPAREN", "UP", "DOWN", "MUP", "MDOWN"):
            return self.path()
        if self.at("SEMFORM"):
            tok = self.take("SEMFORM")
            try:
                return SemanticForm.parse(tok.text)
            except LFGError as exc:
                raise self.error(str(exc), tok) from None
        tok = self.take("WORD", "SIGN")
        return Atom(tok.text)

    def path(self) -> PathExpr:
        if not self.at("LPAREN"):
            tok = self.take("UP", "DOWN", "MUP", "MDOWN")
            return PathExpr(*_ANCHORS[tok.kind])
        start = self.take("LPAREN")
        parts = [start.text]
        if not self.at("UP", "DOWN", "MUP", "MDOWN"):
            raise BadPath(self._rest_of_path(), "path must start with ^, !, %^ or %!")
        anchor = self.take("UP", "DOWN", "MUP", "MDOWN")
        parts.append(anchor.text)
        steps: list[Step] = []
        while not self.at("RPAREN"):
            tok = self.tok
            if tok.kind == "WORD":
                steps.append(GF if tok.text == GF.name else tok.text)
            elif tok.kind == "STARWORD":
                name = tok.text[:-1]
                if name == GF.name:
                    raise BadPath(" ".join(parts + [tok.text]) + ")", "GF cannot be starred")
                steps.append(Star(name))
            else:
                raise BadPath(" ".join(parts + [tok.text]), "unexpected token in path")
            parts.append(tok.text)
            self.i += 1
        self.take("RPAREN")
        text = " ".join(parts) + ")"
        if not steps:
            raise BadPath(text, "empty path; write the anchor without parentheses")
        if sum(isinstance(s, Star) for s in steps) > 1:
            raise BadPath(text, "at most one starred segment")
        return PathExpr(*_ANCHORS[anchor.kind], tuple(steps))

    def _rest_of_path(self) -> str:
        j = self.i
        parts = ["("]
        while self.toks[j].kind not in ("RPAREN", "NEWLINE", "EOF"):
            parts.append(self.toks[j].text)
            j += 1
        return " ".join(parts) + ")"


def _default_annotation(annotation: tuple) -> tuple:
    if not annotation:
        return (
            Equation(DEFINE, PathExpr(F, UP), PathExpr(F, DOWN)),
            Equation(DEFINE, PathExpr(M, UP), PathExpr(M, DOWN)),
        )
    if not any(_mentions(c, F) for c in annotation):
        return (Equation(DEFINE, PathExpr(F, UP), PathExpr(F, DOWN)),) + tuple(annotation)
    return tuple(annotation)


def _mentions(c: Constraint, projection: str) -> bool:
    if isinstance(c, Disjunction):
        return any(_mentions(x, projection) for alt in c.alternatives for x in alt)
    return c.lhs.projection == projection


def load_grammar(text: str) -> Grammar:
    """Read a grammar from DSL text and check that every category is defined."""
    rules, entries, settings = _Reader(text).read()
    grammar = Grammar(tuple(rules), tuple(entries), **settings)
    _validate(grammar)
    return grammar


def load_grammar_file(path) -> Grammar:
    with open(path, encoding="utf-8") as fh:
        return load_grammar(fh.read())


def _validate(g: Grammar) -> None:
    known = g.lexical_categories | g.phrasal_categories
    for rule in g.rules:
        for slot in rule.rhs:
            for el in slot.options:
                if el.category not in known:
                    raise UnknownCategory(el.category)
    if g.start not in known:
        raise UnknownCategory(g.start)
    if g.depth < 0:
        raise LFGError("depth must be non-negative")


# ---------------------------------------------------------------------------
# DSL writer
# ---------------------------------------------------------------------------


def format_constraints(constraints: Iterable[Constraint]) -> str:
    parts = []
    for c in constraints:
        if isinstance(c, Disjunction):
            alts = []
            for alt, label in zip(c.alternatives, c.labels):
                body = format_constraints(alt)
                alts.append(f'"{label}" {body}' if label else body)
            parts.append("{ " + " | ".join(alts) + " }")
        else:
            parts.append(str(c))
    return " ".join(parts)


def _format_element(el: Element) -> str:
    return f"{el.category} {{ {format_constraints(el.annotation)} }}"


def format_rule(rule: Rule) -> str:
    out = [f"rule {rule.lhs} ->"]
    for slot in rule.rhs:
        if len(slot.options) == 1:
            el = slot.options[0]
            q = "?" if slot.optional else ""
            out.append(f"{el.category}{q} {{ {format_constraints(el.annotation)} }}")
        else:
            inner = " | ".join(_format_element(el) for el in slot.options)
            out.append(f"( {inner} ){'?' if slot.optional else ''}")
    return " ".join(out)


def format_entry(entry: LexEntry) -> str:
    body = format_constraints(entry.constraints)
    return f"lex {entry.form} {entry.category}" + (f" {{ {body} }}" if body else "")


def format_grammar(g: Grammar) -> str:
    """DSL text that :func:`load_grammar` reads back into an equal grammar."""
    lines = [f"gf {' '.join(g.gf)}", f"start {g.start}", f"depth {g.depth}", ""]
    lines += [format_rule(r) for r in g.rules]
    lines.append("")
    lines += [format_entry(e) for e in g.entries]
    return "\n".join(lines) + "\n"

