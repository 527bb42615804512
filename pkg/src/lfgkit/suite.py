"""
Regression testsuites.

A suite is a tab-separated text file, one item per line::

    # comment
    Der Fahrer wird den Hebel drehen<TAB>ACCEPT 1<TAB>golden/flat-fut.gold
    Der Fahrer wird den Hebel gedreht<TAB>REJECT

``ACCEPT n`` requires exactly n analyses.  The optional third column names
a golden file, relative to the suite, holding the expected canonical
output of each analysis in order::

    c (S ...)
    f [ ... ]
    m [ ... ]
    t [ ... ]
    ---
    f [ ... ]

Only the lines present are compared; ``t`` lines list the transfer
outputs of that analysis, one per linking reading.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from lfgkit.avm import canonical_form
from lfgkit.engine import Analysis, analyze
from lfgkit.exceptions import LFGError, SuiteFormatError
from lfgkit.grammar import Grammar
from lfgkit.linking import BilingualLexicon, transfer_analysis

GOLDEN_KEYS = ("c", "f", "m", "t")


@dataclass(frozen=True)
class SuiteItem:
    sentence: str
    expected: int | None  # None means REJECT
    golden: str | None = None
    line: int = 0

    @property
    def accept(self) -> bool:
        return self.expected is not None


@dataclass
class ItemResult:
    item: SuiteItem
    found: int
    ok: bool
    detail: str = ""


@dataclass
class SuiteReport:
    results: list = field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(r.ok for r in self.results)

    @property
    def failed(self) -> int:
        return len(self.results) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def lines(self) -> list[str]:
        out = []
        for r in self.results:
            want = f"ACCEPT {r.item.expected}" if r.item.accept else "REJECT"
            status = "PASS" if r.ok else "FAIL"
            text = f"{status}\t{r.item.line}\t{want}\tgot {r.found}\t{r.item.sentence}"
            out.append(text + (f"\t{r.detail}" if r.detail else ""))
        out.append(f"{len(self.results)} items, {self.passed} passed, {self.failed} failed")
        return out


def parse_suite(text: str) -> list[SuiteItem]:
    items = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        cols = [c.strip() for c in raw.split("\t")]
        if len(cols) < 2 or len(cols) > 3 or not cols[0]:
            raise SuiteFormatError(lineno, "expected: sentence<TAB>ACCEPT n|REJECT[<TAB>golden]")
        sentence, expect = cols[0], cols[1].split()
        golden = cols[2] if len(cols) == 3 and cols[2] else None
        if expect == ["REJECT"]:
            if golden:
                raise SuiteFormatError(lineno, "golden files are only allowed on ACCEPT items")
            items.append(SuiteItem(sentence, None, None, lineno))
        elif len(expect) == 2 and expect[0] == "ACCEPT" and expect[1].isdigit() and int(expect[1]) >= 1:
            items.append(SuiteItem(sentence, int(expect[1]), golden, lineno))
        else:
            raise SuiteFormatError(lineno, f"bad expectation {cols[1]!r}; use ACCEPT n (n >= 1) or REJECT")
    return items


def load_suite(path) -> list[SuiteItem]:
    with open(path, encoding="utf-8") as fh:
        return parse_suite(fh.read())


def parse_golden(text: str) -> list[dict]:
    """Golden blocks: one dict per analysis, ``t`` maps to a list."""
    blocks: list[dict] = [{}]
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.rstrip()
        if not line or line.startswith("#"):
            continue
        if line == "---":
            blocks.append({})
            continue
        key, _, value = line.partition(" ")
        if key not in GOLDEN_KEYS or not value:
            raise SuiteFormatError(lineno, f"golden line must start with one of {', '.join(GOLDEN_KEYS)}")
        if key == "t":
            blocks[-1].setdefault("t", []).append(value)
        elif key in blocks[-1]:
            raise SuiteFormatError(lineno, f"duplicate {key} line in one analysis")
        else:
            blocks[-1][key] = value
    return [b for b in blocks if b]


def render(analysis: Analysis, blex: BilingualLexicon | None = None) -> dict:
    """All golden-comparable outputs of one analysis."""
    out = {
        "c": analysis.ctree.bracketed(),
        "f": canonical_form(analysis.fstruct),
        "m": canonical_form(analysis.mstruct),
    }
    if blex is not None:
        out["t"] = [canonical_form(r) if not isinstance(r, LFGError) else f"error {r}" for r in transfer_analysis(analysis.fstruct, blex)]
    return out


def _compare(expected: list[dict], analyses, blex) -> str:
    if len(expected) != len(analyses):
        return f"golden lists {len(expected)} analyses"
    for i, (want, analysis) in enumerate(zip(expected, analyses), 1):
        if "t" in want and blex is None:
            return "golden has transfer lines but no bilingual lexicon was given"
        got = render(analysis, blex if "t" in want else None)
        for key in GOLDEN_KEYS:
            if key in want and want[key] != got[key]:
                return f"analysis {i}: {key} differs: expected {want[key]!r}, got {got[key]!r}"
    return ""


def run_suite(
    items: list[SuiteItem],
    grammar: Grammar,
    blex: BilingualLexicon | None = None,
    base_dir=".",
) -> SuiteReport:
    report = SuiteReport()
    for item in items:
        try:
            analyses = analyze(item.sentence, grammar)
        except LFGError as exc:
            report.results.append(ItemResult(item, 0, False, str(exc)))
            continue
        found = len(analyses)
        if not item.accept:
            report.results.append(ItemResult(item, found, found == 0))
            continue
        if found != item.expected:
            report.results.append(ItemResult(item, found, False))
            continue
        detail = ""
        if item.golden:
            path = Path(base_dir) / item.golden
            try:
                expected = parse_golden(path.read_text(encoding="utf-8"))
            except OSError as exc:
                detail = f"cannot read golden file: {exc}"
            except SuiteFormatError as exc:
                detail = f"{path}: {exc}"
            else:
                detail = _compare(expected, analyses, blex)
        report.results.append(ItemResult(item, found, not detail, detail))
    return report
