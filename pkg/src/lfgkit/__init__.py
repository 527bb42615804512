"""Lexical-functional grammar parsing with f-structure and m-structure projections."""

from lfgkit.avm import Atom, FeatureStructure, SemanticForm, canonical_form, get_path, put_path, unify
from lfgkit.chart import CTree, parse_cstructure
from lfgkit.engine import Analysis, analyze, check_completeness_coherence, solve
from lfgkit.exceptions import LFGError
from lfgkit.fragments import fragment_flat, fragment_np, fragment_raising, nominalize
from lfgkit.grammar import Grammar, expand_disjunctions, instantiate_uncertainty, load_grammar
from lfgkit.linking import BilingualLexicon, LinkingReading, link_genitives, transfer, transfer_clause

__version__ = "0.1.0"

__all__ = [
    "Analysis",
    "Atom",
    "BilingualLexicon",
    "CTree",
    "FeatureStructure",
    "Grammar",
    "LFGError",
    "LinkingReading",
    "SemanticForm",
    "analyze",
    "canonical_form",
    "check_completeness_coherence",
    "expand_disjunctions",
    "fragment_flat",
    "fragment_np",
    "fragment_raising",
    "get_path",
    "instantiate_uncertainty",
    "link_genitives",
    "load_grammar",
    "nominalize",
    "parse_cstructure",
    "put_path",
    "solve",
    "transfer",
    "transfer_clause",
    "unify",
]
