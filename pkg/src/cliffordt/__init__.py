"""Exact two-qubit Clifford+T circuits: arithmetic, presentations and certified rewriting."""

from .prover import Derivation, Prover, check, prove
from .semantics import interp_x, interp_y
from .word import XGen, YGen, format_word, parse

__all__ = ["Derivation", "Prover", "XGen", "YGen", "check", "format_word", "interp_x", "interp_y", "parse",
           "prove"]
__version__ = "0.1.0"
