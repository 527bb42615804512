"""
Genitive interpretation and f-structure transfer.

GEN1 (prenominal) and GEN2 (postnominal) carry no role of their own.
:func:`link_genitives` assigns roles from the head noun's ARG-STR using
the hierarchy AGENT > THEME; a head without ARG-STR gets possessor
readings.  :func:`transfer` then moves each linked function to whatever
target function the bilingual lexicon associates with its role.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Mapping

from lfgkit.avm import GOVERNABLE, Atom, FeatureStructure, SemanticForm
from lfgkit.engine import check_completeness_coherence
from lfgkit.exceptions import (
    BothGenitivesMonovalent,
    LFGError,
    LinkingError,
    MissingTranslation,
    ShapeMismatch,
    TransferError,
    UnlinkedRole,
    WellformednessError,
)

AGENT = "AGENT"
THEME = "THEME"
POSS = "POSS"
HIERARCHY = (AGENT, THEME)
GENITIVES = ("GEN1", "GEN2")


@dataclass(frozen=True)
class LinkingReading:
    """Function-to-role assignment, stored sorted by function name."""

    assignments: tuple = ()

    def __post_init__(self):
        roles = [r for _, r in self.assignments]
        if len(roles) != len(set(roles)):
            raise LinkingError(f"role assigned twice in {self.assignments}")
        object.__setattr__(self, "assignments", tuple(sorted(self.assignments)))

    @classmethod
    def of(cls, mapping: Mapping[str, str]) -> "LinkingReading":
        return cls(tuple(mapping.items()))

    def as_dict(self) -> dict[str, str]:
        return dict(self.assignments)

    def __str__(self):
        return "{" + ", ".join(f"{fn}->{role}" for fn, role in self.assignments) + "}"


def _roles(fs: FeatureStructure) -> list[str]:
    """ARG-STR roles ordered by the thematic hierarchy."""
    argstr = fs.get("ARG-STR")
    if not isinstance(argstr, FeatureStructure):
        return []
    roles = [str(argstr[k]) for k in ("ARG1", "ARG2") if k in argstr]
    return sorted(roles, key=lambda r: HIERARCHY.index(r) if r in HIERARCHY else len(HIERARCHY))


def is_nominal(fs: FeatureStructure) -> bool:
    pred = fs.get("PRED")
    return isinstance(pred, SemanticForm) and not pred.governed


def link_genitives(fs: FeatureStructure) -> list[LinkingReading]:
    """Readings for the genitives of a noun-headed f-structure."""
    present = [g for g in GENITIVES if g in fs]
    roles = _roles(fs)
    if len(present) == 2:
        if len(roles) < 2:
            raise BothGenitivesMonovalent()
        return [LinkingReading.of({"GEN1": roles[0], "GEN2": roles[1]})]
    if not present:
        return [LinkingReading()]
    gen = present[0]
    if not roles:
        return [LinkingReading.of({gen: POSS})]
    if len(roles) == 1:
        return [LinkingReading.of({gen: roles[0]})]
    if gen == "GEN1":
        return [LinkingReading.of({gen: role}) for role in roles]
    return [LinkingReading.of({gen: roles[1]})]


# ---------------------------------------------------------------------------
# Bilingual lexicon
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlexEntry:
    source: str
    target: str
    subcat: tuple = ()
    linking: Mapping[str, str] = field(default_factory=dict)
    keep: tuple = ()

    def target_form(self, instance: int) -> SemanticForm:
        return SemanticForm(self.target, self.subcat, (), instance)

    def function_for(self, role: str, source_function: str) -> str:
        if role in self.linking:
            return self.linking[role]
        if role == POSS:
            return POSS
        raise UnlinkedRole(source_function, f"{self.source} links no function to {role}")


_BLEX_LINE = re.compile(
    r"^(?P<src>\S+)\s*->\s*(?P<tgt>[^\s<]+)\s*(?:<(?P<subcat>[^>]*)>)?"
    r"(?:\s+linking:(?P<linking>(?:\s+\w+=[\w-]+)+))?"
    r"(?:\s+keep:(?P<keep>(?:\s+[\w-]+)+))?\s*$"
)


class BilingualLexicon:
    """Source lemma -> target lemma, subcat and role linking.

    File format, one entry per line (``#`` comments)::

        Darstellung -> report <SUBJ,OBJ> linking: AGENT=SUBJ THEME=OBJ
        Vorfall -> accident
        Hebel -> lever keep: NUM
    """

    def __init__(self, entries=()):
        self.entries: dict[str, BlexEntry] = {}
        for e in entries:
            self.entries[e.source] = e

    def __contains__(self, lemma):
        return lemma in self.entries

    def __len__(self):
        return len(self.entries)

    def lookup(self, lemma: str) -> BlexEntry:
        try:
            return self.entries[lemma]
        except KeyError:
            raise MissingTranslation(lemma) from None

    @classmethod
    def parse(cls, text: str) -> "BilingualLexicon":
        entries = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            m = _BLEX_LINE.match(line)
            if m is None:
                raise LFGError(f"bilingual lexicon line {lineno}: cannot read {raw.strip()!r}")
            subcat = tuple(f.strip() for f in (m["subcat"] or "").split(",") if f.strip())
            linking = dict(pair.split("=") for pair in (m["linking"] or "").split())
            keep = tuple((m["keep"] or "").split())
            try:
                SemanticForm(m["tgt"], subcat)
            except LFGError as exc:
                raise LFGError(f"bilingual lexicon line {lineno}: {exc}") from None
            entries.append(BlexEntry(m["src"], m["tgt"], subcat, linking, keep))
        return cls(entries)

    @classmethod
    def load(cls, path) -> "BilingualLexicon":
        with open(path, encoding="utf-8") as fh:
            return cls.parse(fh.read())


# ---------------------------------------------------------------------------
# Transfer
# ---------------------------------------------------------------------------


def _lemma(fs: FeatureStructure) -> str:
    pred = fs.get("PRED")
    if not isinstance(pred, SemanticForm):
        raise TransferError("structure has no PRED to translate")
    return pred.lemma


def _kept_features(fs: FeatureStructure, entry: BlexEntry, out: dict) -> None:
    for attr in entry.keep:
        value = fs.get(attr)
        if isinstance(value, Atom):
            out[attr] = value


def _argument(fs: FeatureStructure, blex: BilingualLexicon, ids) -> FeatureStructure:
    readings = link_genitives(fs) if is_nominal(fs) else [LinkingReading()]
    return _transfer(fs, readings[0], blex, ids)


def _transfer(fs: FeatureStructure, reading: LinkingReading, blex: BilingualLexicon, ids) -> FeatureStructure:
    entry = blex.lookup(_lemma(fs))
    linked = reading.as_dict()
    for attr in fs.keys():
        if isinstance(fs[attr], FeatureStructure) and attr != "ARG-STR" and attr not in linked:
            raise UnlinkedRole(attr, "function not covered by the linking reading")
    out: dict = {"PRED": entry.target_form(next(ids))}
    _kept_features(fs, entry, out)
    for fn, role in reading.assignments:
        if fn not in fs:
            raise UnlinkedRole(fn, "reading names a function the structure lacks")
        target = entry.function_for(role, fn)
        if target in out:
            raise UnlinkedRole(fn, f"target function {target} already filled")
        out[target] = _argument(fs[fn], blex, ids)
    return FeatureStructure(out)


def transfer(fs: FeatureStructure, reading: LinkingReading, blex: BilingualLexicon) -> FeatureStructure:
    """Target f-structure for a noun-headed source under one linking reading.

    The head PRED is replaced by the target semantic form; every linked
    function moves to the function the bilingual entry assigns to its
    role; inner structures are translated recursively; ARG-STR and
    language-particular features are dropped unless the entry keeps
    them.  The result must be complete and coherent.
    """
    result = _transfer(fs, reading, blex, itertools.count(1))
    _validate(result)
    return result


def transfer_clause(fs: FeatureStructure, blex: BilingualLexicon) -> FeatureStructure:
    """Translate a flat clause: PRED and arguments translated, TENSE copied."""
    pred = fs.get("PRED")
    if not isinstance(pred, SemanticForm):
        raise TransferError("clause has no PRED")
    if "XCOMP" in fs:
        raise ShapeMismatch("XCOMP", f"arguments are embedded under '{pred.lemma}'; clause is not flat")
    for attr in fs.keys():
        if attr in GOVERNABLE and attr not in pred.subcat:
            raise ShapeMismatch(attr, f"{attr} is not a thematic argument of '{pred.lemma}'")
    entry = blex.lookup(pred.lemma)
    ids = itertools.count(1)
    out: dict = {"PRED": entry.target_form(next(ids))}
    if "TENSE" in fs:
        out["TENSE"] = fs["TENSE"]
    _kept_features(fs, entry, out)
    for fn in pred.subcat:
        target = entry.linking.get(fn, fn)
        if target not in entry.subcat:
            raise UnlinkedRole(fn, f"target '{entry.target}' does not govern {target}")
        out[target] = _argument(fs[fn], blex, ids)
    result = FeatureStructure(out)
    _validate(result)
    return result


def _validate(fs: FeatureStructure) -> None:
    try:
        check_completeness_coherence(fs)
    except WellformednessError as exc:
        raise TransferError(f"target structure is ill-formed: {exc}") from None


def transfer_analysis(fs: FeatureStructure, blex: BilingualLexicon) -> list:
    """Every transfer of one source f-structure.

    Nominal structures yield one result per linking reading, clauses a
    single result.  Each element is a target structure or the
    :class:`TransferError` that reading ran into.
    """
    if not is_nominal(fs):
        try:
            return [transfer_clause(fs, blex)]
        except TransferError as exc:
            return [exc]
    try:
        readings = link_genitives(fs)
    except LinkingError as exc:
        return [TransferError(str(exc))]
    out = []
    for reading in readings:
        try:
            out.append(transfer(fs, reading, blex))
        except TransferError as exc:
            out.append(exc)
    return out
