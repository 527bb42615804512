"""C-structure parsing over the context-free backbone of a grammar."""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Sequence

from lfgkit.exceptions import UnknownToken
from lfgkit.grammar import Element, Grammar, LexEntry

log = logging.getLogger(__name__)

DEFAULT_TREE_CAP = 64


@dataclass(frozen=True)
class CTree:
    """A c-structure node.

    Leaves carry the surface ``form`` and the lexical ``entry`` chosen for
    it.  ``annotation`` holds the constraints of the rule element that
    licensed this node (empty for the root).
    """

    category: str
    children: tuple = ()
    form: str | None = None
    entry: LexEntry | None = None
    annotation: tuple = ()

    @property
    def is_leaf(self) -> bool:
        return self.form is not None

    def leaves(self) -> list[str]:
        if self.is_leaf:
            return [self.form]
        return [w for child in self.children for w in child.leaves()]

    def preorder(self):
        yield self
        for child in self.children:
            yield from child.preorder()

    def bracketed(self) -> str:
        if self.is_leaf:
            return f"({self.category} {self.form})"
        return f"({self.category} " + " ".join(c.bracketed() for c in self.children) + ")"

    def shape(self) -> str:
        """Category skeleton without words, e.g. ``S(NP(DET,N),VP(...))``."""
        if self.is_leaf:
            return self.category
        return f"{self.category}(" + ",".join(c.shape() for c in self.children) + ")"

    def __str__(self):
        return self.bracketed()


class Chart:
    """Memoized all-trees table for one token sequence.

    Cells are filled on demand, so left recursion terminates (a left
    child always covers a strictly shorter span).  Unary cycles are cut.
    """

    def __init__(self, tokens: Sequence[str], grammar: Grammar, cap: int = DEFAULT_TREE_CAP):
        for tok in tokens:
            if tok not in grammar.lexicon:
                raise UnknownToken(tok)
        self.tokens = list(tokens)
        self.grammar = grammar
        self.cap = cap
        self._cells: dict[tuple[str, int, int], list[CTree]] = {}
        self._active: set[tuple[str, int, int]] = set()
        self._productions: dict[str, list[tuple[Element, ...]]] = {}
        for rule in grammar.rules:
            self._productions.setdefault(rule.lhs, []).extend(rule.expansions())

    def trees(self, category: str, i: int, j: int) -> list[CTree]:
        key = (category, i, j)
        if key in self._cells:
            return self._cells[key]
        if key in self._active:
            return []
        self._active.add(key)
        found: list[CTree] = []
        if j == i + 1:
            for entry in self.grammar.lexicon[self.tokens[i]]:
                if entry.category == category:
                    found.append(CTree(category, form=self.tokens[i], entry=entry))
        for elements in self._productions.get(category, ()):
            if len(elements) > j - i:
                continue
            for children in self._sequences(elements, i, j):
                found.append(CTree(category, tuple(children)))
                if len(found) > self.cap:
                    break
        self._active.discard(key)
        if len(found) > self.cap:
            log.warning("tree cap %d exceeded for %s[%d:%d]; extra trees dropped", self.cap, category, i, j)
            found = found[: self.cap]
        self._cells[key] = found
        return found

    def _sequences(self, elements, i, j):
        first, rest = elements[0], elements[1:]
        if not rest:
            for t in self.trees(first.category, i, j):
                yield [replace(t, annotation=first.annotation)]
            return
        for k in range(i + 1, j - len(rest) + 1):
            left = self.trees(first.category, i, k)
            if not left:
                continue
            for t in left:
                for tail in self._sequences(rest, k, j):
                    yield [replace(t, annotation=first.annotation)] + tail

    def best_partial(self) -> tuple[str, int, int] | None:
        """Widest constituent found anywhere, for no-parse diagnostics."""
        n = len(self.tokens)
        categories = sorted(self.grammar.phrasal_categories | self.grammar.lexical_categories)
        for width in range(n, 0, -1):
            for i in range(0, n - width + 1):
                for cat in categories:
                    if self.trees(cat, i, i + width):
                        return (cat, i, i + width)
        return None


def parse_cstructure(tokens: Sequence[str], grammar: Grammar, cap: int = DEFAULT_TREE_CAP) -> list[CTree]:
    """All trees for ``tokens`` rooted in the start symbol (empty list if none)."""
    if not tokens:
        return []
    return list(Chart(tokens, grammar, cap).trees(grammar.start, 0, len(tokens)))
