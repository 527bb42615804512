"""Exception hierarchy shared by all lfgkit modules."""


class LFGError(Exception):
    """Base class for every error raised by lfgkit."""


class UnificationError(LFGError):
    pass


class Clash(UnificationError):
    """Two incompatible values meet at ``path``."""

    def __init__(self, path, left, right):
        self.path = tuple(path)
        self.left = left
        self.right = right
        where = " ".join(self.path) or "<root>"
        super().__init__(f"clash({where}, {_show(left)}, {_show(right)})")


class NotAStructure(LFGError):
    """A strict prefix of a path resolves to an atomic value."""

    def __init__(self, prefix):
        self.prefix = tuple(prefix)
        super().__init__(f"not-a-structure({' '.join(self.prefix)})")


class CyclicStructure(LFGError):
    def __init__(self, path):
        self.path = tuple(path)
        super().__init__(f"cyclic({' '.join(self.path) or '<root>'})")


class GrammarError(LFGError):
    pass


class GrammarSyntaxError(GrammarError):
    def __init__(self, line, col, message):
        self.line = line
        self.col = col
        self.message = message
        super().__init__(f"syntax({line}, {col}, {message})")


class UnknownCategory(GrammarError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unknown-category({name})")


class BadPath(GrammarError):
    def __init__(self, text, reason=""):
        self.text = text
        msg = f"bad-path({text})"
        super().__init__(f"{msg}: {reason}" if reason else msg)


class UnknownToken(LFGError):
    def __init__(self, form):
        self.form = form
        super().__init__(f"unknown-token({form})")


class WellformednessError(LFGError):
    """Completeness or coherence violation in a solved f-structure."""

    kind = "violation"

    def __init__(self, path, function):
        self.path = tuple(path)
        self.function = function
        where = " ".join(self.path) or "root"
        super().__init__(f"{self.kind}({where}, {function})")


class Incomplete(WellformednessError):
    kind = "incomplete"


class Incoherent(WellformednessError):
    kind = "incoherent"


class LinkingError(LFGError):
    pass


class BothGenitivesMonovalent(LinkingError):
    def __init__(self):
        super().__init__("both-genitives-monovalent")


class TransferError(LFGError):
    pass


class MissingTranslation(TransferError):
    def __init__(self, lemma):
        self.lemma = lemma
        super().__init__(f"missing-translation({lemma})")


class UnlinkedRole(TransferError):
    def __init__(self, function, detail=""):
        self.function = function
        msg = f"unlinked-role({function})"
        super().__init__(f"{msg}: {detail}" if detail else msg)


class ShapeMismatch(UnlinkedRole):
    """The source clause embeds its arguments under an open complement."""


class SuiteFormatError(LFGError):
    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")


def _show(value):
    from lfgkit.avm import FeatureStructure, canonical_form

    if isinstance(value, FeatureStructure):
        try:
            return canonical_form(value)
        except CyclicStructure:
            return "<cyclic>"
    return str(value)
