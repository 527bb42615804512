"""
Attribute-value matrices for f-structures and m-structures.

A ``FeatureStructure`` maps attribute names to values.  A value is an
``Atom`` (a symbolic constant such as ``NOM`` or ``+``), a
``SemanticForm`` (the value of a PRED attribute), or another
``FeatureStructure``.  Substructures may be shared between several
paths (reentrancy); sharing is object identity, never a copy.

The public operations (``unify``, ``put_path``) never modify their
arguments.  The solver in :mod:`lfgkit.engine` uses the destructive
helpers at the bottom of this module on private working copies.

Unification uses forwarding pointers: when two structures merge, one is
forwarded to the other, so every path that reached either of them keeps
reaching the merged result.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, replace
from typing import Iterable, Iterator, Mapping, Sequence, Union

from lfgkit.exceptions import Clash, CyclicStructure, LFGError, NotAStructure

GOVERNABLE = ("SUBJ", "OBJ", "OBJ2", "OBL", "XCOMP", "COMP")

# Ad hoc semantic forms (built outside an analysis) get negative ids so they
# never collide with the per-analysis positive ids handed out by the solver.
_adhoc_ids = itertools.count(1)


def fresh_instance() -> int:
    return -next(_adhoc_ids)


@dataclass(frozen=True)
class Atom:
    symbol: str

    def __str__(self):
        return self.symbol

    def __repr__(self):
        return f"Atom({self.symbol!r})"


PLUS = Atom("+")
MINUS = Atom("-")


@dataclass(frozen=True)
class SemanticForm:
    """A PRED value: lemma plus governed functions.

    ``subcat`` lists the thematic governed functions (inside the angle
    brackets); ``nonthematic`` lists functions written after the closing
    bracket, as in ``'wird<XCOMP>SUBJ'``.  Two semantic forms are equal
    only if they also share ``instance``; each lexical insertion gets its
    own instance, so two uses of the same word never unify.
    """

    lemma: str
    subcat: tuple = ()
    nonthematic: tuple = ()
    instance: int | None = None

    def __post_init__(self):
        for fn in self.subcat + self.nonthematic:
            if fn not in GOVERNABLE:
                raise LFGError(f"{fn} is not a governable function")

    @classmethod
    def parse(cls, text: str, instance: int | None = None) -> "SemanticForm":
        """Read ``lemma``, ``lemma<F1,F2>`` or ``lemma<F1>F2`` (quotes optional)."""
        text = text.strip()
        if len(text) >= 2 and text[0] == "'" and text[-1] == "'":
            text = text[1:-1]
        m = re.fullmatch(r"([^<>,\s]+)(?:<([^<>]*)>([^<>\s]*))?", text)
        if m is None:
            raise LFGError(f"malformed semantic form {text!r}")
        lemma, inside, after = m.groups()
        subcat = tuple(f.strip() for f in inside.split(",") if f.strip()) if inside else ()
        nonthematic = tuple(f.strip() for f in after.split(",") if f.strip()) if after else ()
        return cls(lemma, subcat, nonthematic, instance)

    @property
    def governed(self) -> tuple:
        return self.subcat + self.nonthematic

    def instantiate(self, instance: int) -> "SemanticForm":
        return replace(self, instance=instance)

    def same_predicate(self, other) -> bool:
        return (
            isinstance(other, SemanticForm)
            and self.lemma == other.lemma
            and self.subcat == other.subcat
            and self.nonthematic == other.nonthematic
        )

    def __str__(self):
        inner = f"<{','.join(self.subcat)}>" if self.subcat else ""
        if self.nonthematic and not inner:
            inner = "<>"
        return f"'{self.lemma}{inner}{','.join(self.nonthematic)}'"


Value = Union[Atom, SemanticForm, "FeatureStructure"]


class FeatureStructure:
    """A (possibly reentrant) attribute-value matrix.

    Build one from nested mappings; strings become atoms unless quoted,
    in which case they become semantic forms with a fresh instance::

        >>> fs = FeatureStructure({"PRED": "'Fahrer'", "CASE": "NOM"})
        >>> canonical_form(fs)
        "[ CASE NOM PRED 'Fahrer' ]"

    Equality is structural (same canonical form).
    """

    __slots__ = ("_arcs", "_forward")

    def __init__(self, features: Mapping | None = None):
        self._arcs: dict = {}
        self._forward: FeatureStructure | None = None
        if features:
            self._fill(features, {id(features): self})

    def _fill(self, features: Mapping, memo: dict) -> None:
        for attr, value in features.items():
            self._arcs[attr] = _coerce(value, memo)

    def _node(self) -> "FeatureStructure":
        return _deref(self)

    def __getitem__(self, attr):
        return _deref(self._node()._arcs[attr])

    def get(self, attr, default=None):
        arcs = self._node()._arcs
        return _deref(arcs[attr]) if attr in arcs else default

    def __contains__(self, attr):
        return attr in self._node()._arcs

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self._node()._arcs))

    def __len__(self):
        return len(self._node()._arcs)

    def keys(self):
        return sorted(self._node()._arcs)

    def items(self):
        return [(k, self[k]) for k in self.keys()]

    def __eq__(self, other):
        if not isinstance(other, FeatureStructure):
            return NotImplemented
        return canonical_form(self) == canonical_form(other)

    def __hash__(self):
        return hash(canonical_form(self))

    def __repr__(self):
        try:
            return f"FeatureStructure({canonical_form(self)})"
        except CyclicStructure:
            return "FeatureStructure(<cyclic>)"


def _coerce(value, memo):
    if isinstance(value, FeatureStructure):
        return value
    if isinstance(value, (Atom, SemanticForm)):
        return value
    if isinstance(value, Mapping):
        if id(value) not in memo:
            node = FeatureStructure()
            memo[id(value)] = node
            node._fill(value, memo)
        return memo[id(value)]
    if isinstance(value, str):
        if value.startswith("'"):
            return SemanticForm.parse(value, fresh_instance())
        return Atom(value)
    raise TypeError(f"cannot use {value!r} as a feature value")


def _deref(value):
    while isinstance(value, FeatureStructure) and value._forward is not None:
        value = value._forward
    return value


# ---------------------------------------------------------------------------
# Public, non-destructive operations
# ---------------------------------------------------------------------------


def unify(a: FeatureStructure, b: FeatureStructure) -> FeatureStructure:
    """Return the most general structure subsumed by both ``a`` and ``b``.

    Raises :class:`Clash` naming the first conflicting path.
    """
    a2, b2 = copy_structures([a, b])
    return copy_structures([unify_in_place(a2, b2)])[0]


def get_path(fs: FeatureStructure, path: Sequence[str]):
    """Value at ``path`` or ``None`` if some attribute is missing."""
    if not path:
        raise ValueError("path must be non-empty")
    return lookup(fs, path)


def put_path(fs: FeatureStructure, path: Sequence[str], value) -> FeatureStructure:
    """Minimal extension of ``fs`` carrying ``value`` at ``path``."""
    if not path:
        raise ValueError("path must be non-empty")
    value = _coerce(value, {})
    work, value = copy_structures([fs, value])
    put_in_place(work, path, value)
    return copy_structures([work])[0]


def subsumes(general: FeatureStructure, specific: FeatureStructure) -> bool:
    """True if ``specific`` carries all information in ``general``, sharing included."""
    mapping: dict[int, FeatureStructure] = {}

    def walk(g, s):
        g, s = _deref(g), _deref(s)
        if isinstance(g, FeatureStructure):
            if not isinstance(s, FeatureStructure):
                return False
            seen = mapping.get(id(g))
            if seen is not None:
                return seen is s
            mapping[id(g)] = s
            return all(attr in s._arcs and walk(v, s._arcs[attr]) for attr, v in g._arcs.items())
        return g == s

    return walk(general, specific)


def check_acyclic(fs: FeatureStructure) -> None:
    """Raise :class:`CyclicStructure` if some path leads back to an ancestor."""
    on_stack: set[int] = set()
    done: set[int] = set()

    def walk(node, path):
        node = _deref(node)
        if not isinstance(node, FeatureStructure) or id(node) in done:
            return
        if id(node) in on_stack:
            raise CyclicStructure(path)
        on_stack.add(id(node))
        for attr in sorted(node._arcs):
            walk(node._arcs[attr], path + (attr,))
        on_stack.discard(id(node))
        done.add(id(node))

    walk(fs, ())


def canonical_form(fs: FeatureStructure) -> str:
    """Deterministic text for ``fs``.

    Attributes are sorted; a substructure reachable by more than one path
    is printed once as ``#n=[ ... ]`` and referenced afterwards as ``#n``.
    Semantic forms print without their instance, so equivalent analyses
    from different parses compare equal.
    """
    check_acyclic(fs)
    refs: dict[int, int] = {}

    def count(node):
        node = _deref(node)
        if not isinstance(node, FeatureStructure):
            return
        refs[id(node)] = refs.get(id(node), 0) + 1
        if refs[id(node)] == 1:
            for v in node._arcs.values():
                count(v)

    count(fs)
    tags: dict[int, int] = {}
    out: list[str] = []

    def emit(node):
        node = _deref(node)
        if not isinstance(node, FeatureStructure):
            out.append(str(node))
            return
        key = id(node)
        if key in tags:
            out.append(f"#{tags[key]}")
            return
        prefix = ""
        if refs[key] > 1:
            tags[key] = len(tags) + 1
            prefix = f"#{tags[key]}="
        out.append(prefix + "[")
        for attr in sorted(node._arcs):
            out.append(attr)
            emit(node._arcs[attr])
        out.append("]")

    emit(fs)
    return " ".join(out)


_CANON_TOKEN = re.compile(r"\s*(#\d+=|#\d+|\[|\]|'[^']*'|[^\s\[\]]+)")


def parse_canonical(text: str) -> FeatureStructure:
    """Inverse of :func:`canonical_form` (semantic forms get fresh instances)."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _CANON_TOKEN.match(text, pos)
        if m is None:
            raise LFGError(f"cannot read structure at offset {pos}: {text[pos:pos + 20]!r}")
        tokens.append(m.group(1))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    tagged: dict[str, FeatureStructure] = {}
    it = iter(enumerate(tokens))

    def value(tok):
        if tok.startswith("#") and tok.endswith("="):
            _, nxt = next(it)
            if nxt != "[":
                raise LFGError(f"tag {tok} must precede a structure")
            node = FeatureStructure()
            tagged[tok[:-1]] = node
            return structure(node)
        if tok.startswith("#"):
            if tok not in tagged:
                raise LFGError(f"reference to undefined tag {tok}")
            return tagged[tok]
        if tok == "[":
            return structure(FeatureStructure())
        if tok.startswith("'"):
            return SemanticForm.parse(tok, fresh_instance())
        return Atom(tok)

    def structure(node):
        for _, tok in it:
            if tok == "]":
                return node
            try:
                _, vtok = next(it)
            except StopIteration:
                break
            if tok in node._arcs:
                raise LFGError(f"attribute {tok} repeated")
            node._arcs[tok] = value(vtok)
        raise LFGError("unterminated structure")

    try:
        _, first = next(it)
    except StopIteration:
        raise LFGError("empty input") from None
    if first != "[" and not first.startswith("#"):
        raise LFGError("structure must start with '['")
    result = value(first)
    if next(it, None) is not None:
        raise LFGError("trailing tokens after structure")
    return result


def paths(fs: FeatureStructure) -> Iterator[tuple[tuple[str, ...], Value]]:
    """Yield every (path, value) pair, following shared nodes once per path."""

    def walk(node, path, stack):
        node = _deref(node)
        yield path, node
        if isinstance(node, FeatureStructure) and id(node) not in stack:
            for attr in sorted(node._arcs):
                yield from walk(node._arcs[attr], path + (attr,), stack | {id(node)})

    for p, v in walk(fs, (), frozenset()):
        if p:
            yield p, v


# ---------------------------------------------------------------------------
# Destructive helpers (solver use only; callers own the structures)
# ---------------------------------------------------------------------------


def copy_structures(values: Iterable) -> list:
    """Jointly copy ``values``, preserving sharing within and between them."""
    memo: dict[int, FeatureStructure] = {}

    def cp(v):
        v = _deref(v)
        if not isinstance(v, FeatureStructure):
            return v
        key = id(v)
        if key in memo:
            return memo[key]
        new = FeatureStructure()
        memo[key] = new
        for attr, sub in v._arcs.items():
            new._arcs[attr] = cp(sub)
        return new

    return [cp(v) for v in values]


def unify_in_place(a, b, path: tuple = ()):
    """Merge ``b`` into ``a``; returns the surviving value."""
    a, b = _deref(a), _deref(b)
    if a is b:
        return a
    if isinstance(a, FeatureStructure) and isinstance(b, FeatureStructure):
        incoming = b._arcs
        b._arcs = {}
        b._forward = a
        for attr in sorted(incoming):
            bv = incoming[attr]
            if attr in a._arcs:
                a._arcs[attr] = unify_in_place(a._arcs[attr], bv, path + (attr,))
            else:
                a._arcs[attr] = bv
        return a
    if a == b:
        return a
    raise Clash(path, a, b)


def lookup(fs, path: Sequence[str]):
    cur = _deref(fs)
    for i, attr in enumerate(path):
        if not isinstance(cur, FeatureStructure):
            raise NotAStructure(path[:i])
        if attr not in cur._arcs:
            return None
        cur = _deref(cur._arcs[attr])
    return cur


def ensure_path(fs, path: Sequence[str], must_exist: int = 0):
    """Walk ``path`` creating empty structures where attributes are missing.

    The first ``must_exist`` steps are never created; if one is missing,
    ``None`` is returned instead.
    """
    cur = _deref(fs)
    for i, attr in enumerate(path):
        if not isinstance(cur, FeatureStructure):
            raise Clash(path[:i], cur, FeatureStructure())
        if attr not in cur._arcs:
            if i < must_exist:
                return None
            cur._arcs[attr] = FeatureStructure()
        cur = _deref(cur._arcs[attr])
    return cur


def put_in_place(fs, path: Sequence[str], value, must_exist: int = 0) -> bool:
    """Unify ``value`` into ``fs`` at ``path``.

    Returns ``False`` (without changes) when one of the first
    ``must_exist`` steps is absent.  Raises :class:`Clash` on conflict.
    """
    if not path:
        unify_in_place(fs, value)
        return True
    parent = ensure_path(fs, path[:-1], must_exist)
    if parent is None:
        return False
    if not isinstance(parent, FeatureStructure):
        raise Clash(path[:-1], parent, FeatureStructure())
    last = path[-1]
    if last in parent._arcs:
        parent._arcs[last] = unify_in_place(parent._arcs[last], value, tuple(path))
    else:
        parent._arcs[last] = _deref(value)
    return True
