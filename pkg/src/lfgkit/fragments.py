"""
Built-in German grammar fragments.

* :func:`fragment_flat` treats auxiliaries as contributing only tense and
  morphological features.  Ordering within the verb cluster is checked in
  the m-structure (AUX, FIN, VFORM, DEP chains), so the f-structure of a
  clause stays one level deep.
* :func:`fragment_raising` is the comparison fixture: the same c-structure
  backbone, but auxiliaries are raising verbs taking an XCOMP.
* :func:`fragment_np` covers noun phrases with prenominal (GEN1) and
  postnominal (GEN2) genitives over nouns derived by :func:`nominalize`.

The same grammars ship as DSL files under ``lfgkit/data``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from lfgkit.exceptions import LFGError
from lfgkit.grammar import Grammar, format_grammar, load_grammar

DATA = resources.files("lfgkit") / "data"


class UnsupportedValence(LFGError):
    def __init__(self, lemma: str, n: int):
        self.lemma = lemma
        self.n = n
        super().__init__(f"unsupported-valence({lemma}, {n})")


@dataclass(frozen=True)
class VerbBase:
    """A verb as input to nominalization.

    ``noun`` is the lexicalized nominal form (Behandlung for behandeln);
    there is no morphological component to derive it.
    """

    lemma: str
    subcat: tuple
    roles: tuple
    noun: str = ""
    noun_gender: str = "FEM"

    def __post_init__(self):
        if len(self.roles) != len(self.subcat):
            raise LFGError(f"{self.lemma}: {len(self.roles)} roles for {len(self.subcat)} functions")


@dataclass(frozen=True)
class NominalEntry:
    lemma: str
    arg_str: tuple = ()
    derived_from: VerbBase | None = None
    gender: str = "MASC"
    subcat: tuple = ()

    def __post_init__(self):
        if self.derived_from is None and self.arg_str:
            raise LFGError(f"{self.lemma}: a simple noun has no argument structure")

    def constraints(self) -> str:
        eqs = [f"(^ PRED)='{self.lemma}'", f"(^ GEND)={self.gender}", "(^ NUM)=SG"]
        for i, role in enumerate(self.arg_str, 1):
            eqs.append(f"(^ ARG-STR ARG{i})={role}")
        return " ".join(eqs)


def nominalize(v: VerbBase) -> NominalEntry:
    """Deverbal noun: subcat emptied, the verb's roles kept as ARG-STR."""
    if not 1 <= len(v.roles) <= 2:
        raise UnsupportedValence(v.lemma, len(v.roles))
    return NominalEntry(v.noun or v.lemma.capitalize(), tuple(v.roles), v, v.noun_gender)


VERB_BASES = (
    VerbBase("behandeln", ("SUBJ", "OBJ"), ("AGENT", "THEME"), "Behandlung"),
    VerbBase("belagern", ("SUBJ", "OBJ"), ("AGENT", "THEME"), "Belagerung"),
    VerbBase("darstellen", ("SUBJ", "OBJ"), ("AGENT", "THEME"), "Darstellung"),
    VerbBase("lachen", ("SUBJ",), ("AGENT",), "Lachen", "NEUT"),
)

PROPER_NAMES = {"Karls": "Karl", "Peters": "Peter", "Roms": "Rom", "Elisabeths": "Elisabeth"}

_DETERMINERS = {
    "Der": "NOM",
    "der": "NOM",
    "Den": "ACC",
    "den": "ACC",
}


def _lex(form, cat, body) -> str:
    return f"lex {form} {cat} {{ {body} }}"


def _det_lines(forms) -> list[str]:
    out = []
    for form in forms:
        if form.lower() == "des":
            out.append(_lex(form, "DET", "(^ SPEC)=DEF (^ CASE)=GEN (^ NUM)=SG { (^ GEND)=MASC | (^ GEND)=NEUT }"))
        else:
            case = _DETERMINERS[form]
            out.append(_lex(form, "DET", f"(^ SPEC)=DEF (^ CASE)={case} (^ GEND)=MASC (^ NUM)=SG"))
    return out


def _simple_nouns() -> list[str]:
    out = []
    for lemma in ("Fahrer", "Hebel", "Vorfall"):
        out.append(_lex(lemma, "N", NominalEntry(lemma).constraints() + " (^ CASE)~=GEN"))
    out.append(_lex("Vorfalls", "N", NominalEntry("Vorfall").constraints() + " (^ CASE)=GEN"))
    return out


_CLAUSE_HEAD = """\
gf SUBJ OBJ
start S
depth 3
"""

_FLAT_RULES = """\
rule S -> NP { (^ XCOMP* GF)=! } VP { ^=! %^=%! (%! FIN)=c + (^ SUBJ CASE)=c NOM }
rule VP -> AUX { ^=! %^=%! } VP { ^=! (%^ DEP)=%! }
rule VP -> NP { (^ XCOMP* GF)=! } V'
rule VP -> NP { (^ XCOMP* GF)=! } V
rule V' -> V { ^=! (%^ DEP)=%! } AUX { ^=! %^=%! }
rule V' -> V' { ^=! (%^ DEP)=%! } AUX { ^=! %^=%! }
rule NP -> DET N NP? { (^ GEN2)=! (! CASE)=c GEN }
"""

_FLAT_VERBS = """\
lex wird AUX { (%^ AUX)=+ (%^ FIN)=+ {
    "simple future" (%^ DEP VFORM)=c BASE (%^ DEP DEP VFORM)~=PERFP (^ PASSIVE)~=+ (^ TENSE)=FUT
  | "future perfect" (%^ DEP VFORM)=c BASE (%^ DEP DEP VFORM)=c PERFP (^ PASSIVE)~=+ (^ TENSE)=FUTPERF } }
lex haben AUX { (%^ AUX)=+ (%^ FIN)=- (%^ VFORM)=BASE (%^ DEP VFORM)=c PERFP }
lex drehen V { (^ PRED)='drehen<SUBJ,OBJ>' (^ OBJ CASE)=c ACC (%^ VFORM)=BASE (%^ FIN)=- }
lex gedreht V { (^ PRED)='drehen<SUBJ,OBJ>' (^ OBJ CASE)=c ACC (%^ VFORM)=PERFP (%^ FIN)=- }
"""

_RAISING_RULES = """\
rule S -> NP { (^ XCOMP* GF)=! } VP { ^=! (^ FIN)=c + (^ SUBJ CASE)=c NOM }
rule VP -> AUX VP { (^ XCOMP)=! }
rule VP -> NP { (^ XCOMP* GF)=! } V'
rule VP -> NP { (^ XCOMP* GF)=! } V
rule V' -> V { (^ XCOMP)=! } AUX
rule V' -> V' { (^ XCOMP)=! } AUX
rule NP -> DET N NP? { (^ GEN2)=! (! CASE)=c GEN }
"""

_RAISING_VERBS = """\
lex wird AUX { (^ PRED)='wird<XCOMP>SUBJ' (^ SUBJ)=(^ XCOMP SUBJ) (^ TENSE)=PRES (^ FIN)=+ (^ XCOMP VFORM)=c BASE }
lex haben AUX { (^ PRED)='haben<XCOMP>SUBJ' (^ SUBJ)=(^ XCOMP SUBJ) (^ FIN)=- (^ VFORM)=BASE (^ XCOMP VFORM)=c PERFP }
lex drehen V { (^ PRED)='drehen<SUBJ,OBJ>' (^ OBJ CASE)=c ACC (^ VFORM)=BASE (^ FIN)=- }
lex gedreht V { (^ PRED)='drehen<SUBJ,OBJ>' (^ OBJ CASE)=c ACC (^ VFORM)=PERFP (^ FIN)=- }
"""

_NP_HEAD = """\
gf SUBJ OBJ GEN1 GEN2
start NP
depth 3
"""

# A postnominal genitive may follow a prenominal one only when the head
# has a second argument to link it to.
_NP_RULES = """\
rule NP -> ( DET | NP { (^ GEN1)=! (! CASE)=c GEN (%! PROPER)=c + } )? N NP? { (^ GEN2)=! (! CASE)=c GEN { (^ GEN1 CASE)~=GEN | (^ ARG-STR ARG2)=c THEME } }
rule NP -> PN
"""


def _clause_lexicon(verbs: str) -> str:
    lines = _det_lines(["Der", "der", "Den", "den", "Des", "des"]) + _simple_nouns()
    return "\n".join(lines) + "\n" + verbs


def _np_lexicon() -> str:
    lines = _det_lines(["des"]) + _simple_nouns()
    for v in VERB_BASES:
        lines.append(_lex(nominalize(v).lemma, "N", nominalize(v).constraints()))
    for form, lemma in PROPER_NAMES.items():
        lines.append(_lex(form, "PN", f"(^ PRED)='{lemma}' (^ CASE)=GEN (^ NUM)=SG (%^ PROPER)=+"))
    return "\n".join(lines) + "\n"


def flat_text() -> str:
    return _CLAUSE_HEAD + _FLAT_RULES + _clause_lexicon(_FLAT_VERBS)


def raising_text() -> str:
    return _CLAUSE_HEAD + _RAISING_RULES + _clause_lexicon(_RAISING_VERBS)


def np_text() -> str:
    return _NP_HEAD + _NP_RULES + _np_lexicon()


@lru_cache(maxsize=None)
def fragment_flat() -> Grammar:
    return load_grammar(flat_text())


@lru_cache(maxsize=None)
def fragment_raising() -> Grammar:
    return load_grammar(raising_text())


@lru_cache(maxsize=None)
def fragment_np() -> Grammar:
    return load_grammar(np_text())


FRAGMENTS = {"flat": fragment_flat, "raising": fragment_raising, "np": fragment_np}


def data_path(name: str) -> Path:
    """Path of a file shipped in ``lfgkit/data``."""
    return Path(str(DATA / name))


def write_data_files(directory) -> list[Path]:
    """Regenerate the shipped ``.lfg`` files from the built-in fragments."""
    written = []
    for name, build in FRAGMENTS.items():
        path = Path(directory) / f"{name}.lfg"
        header = f"# {name} fragment; regenerate with lfgkit.fragments.write_data_files\n"
        path.write_text(header + format_grammar(build()), encoding="utf-8")
        written.append(path)
    return written
