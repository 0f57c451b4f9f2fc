"""Membership oracles for closed regular sets in the three desk ideals.

For closed sets the oracle decisions coincide with membership in the
generated sigma-ideal: a closed set is in the null-generated ideal iff it is
null, closed meager sets are nowhere dense, and countability is
presentation-independent.  Only closed-set membership is decided; analytic
or G-delta positivity queries are out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .automata import TreeAutomaton
from .words import Word


@dataclass(frozen=True)
class IdealOracle:
    """Named decision procedure for closed-set membership in a sigma-ideal."""

    name: str

    def member(self, t: TreeAutomaton) -> bool:
        if t.is_empty():
            return True
        if self.name == "E-null":
            return t.branch_measure() == 0
        if self.name == "NWD":
            return not t.full_states()
        if self.name == "CTBL":
            return t.is_countable()
        raise ValueError(f"unknown ideal {self.name!r}")

    def positive(self, t: TreeAutomaton) -> bool:
        return not self.member(t)


E_NULL = IdealOracle("E-null")
NWD = IdealOracle("NWD")
CTBL = IdealOracle("CTBL")

ORACLES = {"E": E_NULL, "E-null": E_NULL, "NWD": NWD, "CTBL": CTBL}


def member_closed(oracle: IdealOracle, t: TreeAutomaton) -> bool:
    return oracle.member(t)


def _minimal_access_word(t: TreeAutomaton, target: int) -> Word:
    """Shortest (then lexicographically least) word reaching ``target``."""
    if t.start == target:
        return ""
    seen = {t.start}
    queue: list[tuple[int, Word]] = [(t.start, "")]
    while queue:
        s, w = queue.pop(0)
        for b in (0, 1):
            c = t.transitions[s][b]
            if c is None or c in seen:
                continue
            if c == target:
                return w + str(b)
            seen.add(c)
            queue.append((c, w + str(b)))
    raise ValueError("state unreachable")


def _state_automaton(t: TreeAutomaton, s: int) -> TreeAutomaton:
    return TreeAutomaton.make(t.transitions, s)


def kernel_with_passes(t: TreeAutomaton, oracle: IdealOracle) -> tuple[TreeAutomaton, list[list[Word]]]:
    """Iteratively delete states whose residual set is an ideal member.

    Returns the fixpoint together with, per pass, the access words of the
    removed states (each removed piece is a closed cylinder trace in the
    ideal).  The fixpoint is the largest ideal-perfect closed subset; it is
    empty exactly when the branch set lies in the generated sigma-ideal.
    """
    current = t
    passes: list[list[Word]] = []
    while not current.is_empty():
        removed = [
            s for s in range(current.state_count)
            if oracle.member(_state_automaton(current, s))
        ]
        if not removed:
            break
        passes.append([_minimal_access_word(current, s) for s in removed])
        keep = [list(row) for row in current.transitions]
        for s in removed:
            keep[s] = [None, None]
        for row in keep:
            for b in (0, 1):
                if row[b] in removed:
                    row[b] = None
        current = TreeAutomaton.make(keep, current.start if current.start not in removed else None)
    return current, passes


def kernel(t: TreeAutomaton, oracle: IdealOracle) -> TreeAutomaton:
    return kernel_with_passes(t, oracle)[0]


@dataclass(frozen=True)
class DichotomyResult:
    """Either a membership certificate or a nonempty ideal-perfect kernel."""

    verdict: str                      # "member" | "perfect"
    kernel: TreeAutomaton
    certificate: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "kernel": self.kernel.to_json()}
        if self.certificate:
            out["certificate"] = self.certificate
        return out


def dichotomy(oracle: IdealOracle, t: TreeAutomaton) -> DichotomyResult:
    kern, passes = kernel_with_passes(t, oracle)
    if not kern.is_empty():
        return DichotomyResult("perfect", kern)
    if oracle.name == "NWD":
        cert = {"kind": "nowhere-dense-pieces", "passes": passes}
    else:
        cert = {"kind": "generator", "ideal": oracle.name}
    return DichotomyResult("member", kern, cert)
