"""Exact automata workbench for fusion games on Cantor space."""

from .words import ClopenSet, Word, clopen_combine, clopen_normalize, measure
from .automata import (
    AV11,
    COMB,
    EMPTY,
    FULL,
    HALF,
    MIX,
    ZERO,
    ZOO,
    EmptyTree,
    EventuallyPeriodicPoint,
    NotPositive,
    TreeAutomaton,
    contains_point,
    point_in_clopen,
)
from .oracles import CTBL, E_NULL, NWD, ORACLES, IdealOracle, dichotomy, kernel, member_closed

__all__ = [
    "AV11", "COMB", "CTBL", "ClopenSet", "E_NULL", "EMPTY", "EmptyTree",
    "EventuallyPeriodicPoint", "FULL", "HALF", "IdealOracle", "MIX", "NWD",
    "NotPositive", "ORACLES", "TreeAutomaton", "Word", "ZERO", "ZOO",
    "clopen_combine", "clopen_normalize", "contains_point", "dichotomy",
    "kernel", "measure", "member_closed", "point_in_clopen",
]
