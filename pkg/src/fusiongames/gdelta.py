"""Codes for closed sets and Souslin schemes for G-delta sets.

A closed set is coded by the family of basic open sets it avoids; the family
must satisfy the saturation property: any cylinder covered by the family
already belongs to it.  A G-delta set is coded by a node-indexed scheme of
shrinking clopen values whose levelwise unions intersect to the set.  Both
are validated to a finite depth only.

Scheme node values are raw word families (finite sets of generator words),
not canonical clopen sets: the shrinking condition is enforced as "every
generator of a node value is at least as long as the node", which forbids
the sibling merges canonicalization would perform.  Values are normalized
to canonical :class:`ClopenSet` form only when leaving the scheme layer.

Metric convention: diam([w]) = 2^-|w|.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .automata import TreeAutomaton
from .words import ClopenSet, Word, shortlex_key

Node = tuple[int, ...]
WordFamily = frozenset[Word]


def node_name(node: Node) -> str:
    return "".join(str(d) for d in node)


@dataclass(frozen=True)
class Violation:
    where: str
    clause: str
    detail: str

    def __str__(self) -> str:
        return f"{self.clause} at {self.where!r}: {self.detail}"


@dataclass(frozen=True)
class ClosedCode:
    """Closed set coded by its avoided cylinders (membership predicate)."""

    avoids: Callable[[Word], bool]
    name: str = "closed-code"


def _all_words(depth: int) -> Iterable[Word]:
    frontier = [""]
    yield ""
    for _ in range(depth):
        nxt = []
        for w in frontier:
            for b in ("0", "1"):
                nxt.append(w + b)
                yield w + b
        frontier = nxt


def closed_code_validate(code: ClosedCode, depth: int) -> Violation | None:
    """Check the saturation property on all words of length <= depth.

    A word counts as covered when it has an avoided prefix or both its
    children are covered, chasing down to the given depth.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    covered: dict[Word, bool] = {}

    def is_covered(w: Word) -> bool:
        if w in covered:
            return covered[w]
        if code.avoids(w):
            result = True
        elif len(w) >= depth:
            result = False
        else:
            result = is_covered(w + "0") and is_covered(w + "1")
        covered[w] = result
        return result

    for w in sorted(_all_words(depth), key=shortlex_key):
        if is_covered(w) and not code.avoids(w):
            return Violation(w, "saturation", "covered by avoided cylinders but not avoided")
    return None


def code_of_automaton(t: TreeAutomaton) -> ClosedCode:
    """The canonical code of a regular closed set: avoid exactly the off-tree cylinders."""
    return ClosedCode(lambda w: not t.word_in_tree(w), name="automaton-code")


@dataclass(frozen=True)
class SouslinScheme:
    """Node-indexed word families, materialized on demand by a pure expander."""

    expander: Callable[[Node], WordFamily]
    width: int = 4
    name: str = "scheme"

    def value(self, node: Node) -> WordFamily:
        return self.expander(node)

    def clopen_value(self, node: Node) -> ClopenSet:
        return ClopenSet.from_words(self.value(node))

    def nodes_at(self, depth: int) -> list[Node]:
        nodes: list[Node] = [()]
        for _ in range(depth):
            nodes = [n + (d,) for n in nodes for d in range(self.width)]
        return nodes


def scheme_validate(s: SouslinScheme, depth: int) -> Violation | None:
    """Verify shrinking diameters, nesting and productivity up to ``depth``."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    frontier: list[tuple[Node, WordFamily]] = [((), s.value(()))]
    for level in range(1, depth + 1):
        nxt: list[tuple[Node, WordFamily]] = []
        for node, parent_val in frontier:
            parent_clopen = ClopenSet.from_words(parent_val)
            any_child = False
            for d in range(s.width):
                child = node + (d,)
                val = s.value(child)
                if any(len(g) < level for g in val):
                    return Violation(node_name(child), "diameter",
                                     f"generator shorter than node depth {level}")
                if not ClopenSet.from_words(val).is_subset(parent_clopen):
                    return Violation(node_name(child), "nesting", "child not inside parent")
                if val:
                    any_child = True
                nxt.append((child, val))
            if parent_val and not any_child:
                return Violation(node_name(node), "productivity",
                                 "nonempty node with all children empty")
        frontier = nxt
    return None


@dataclass(frozen=True)
class MeetsAnswer:
    meets: bool
    witness: Node | None = None

    @property
    def verdict(self) -> str:
        return "yes" if self.meets else "no-at-depth"


def meets_open(s: SouslinScheme, u: ClopenSet, depth: int) -> MeetsAnswer:
    """Does the coded G-delta set meet the open set u, as visible at this depth?

    Yes exactly when some nonempty node value lies inside u; a miss is only
    "no at this depth" since the full question is semi-decidable.
    """
    if u.is_empty():
        return MeetsAnswer(False)
    for level in range(depth + 1):
        for node in s.nodes_at(level):
            val = s.value(node)
            if val and ClopenSet.from_words(val).is_subset(u):
                return MeetsAnswer(True, node)
    return MeetsAnswer(False)


def closure_approx(s: SouslinScheme, depth: int) -> ClopenSet:
    """Union of the depth-level node values: clopen over-approximation of the closure."""
    words: set[Word] = set()
    for node in s.nodes_at(depth):
        words |= s.value(node)
    return ClopenSet.from_words(words)


def _extensions(w: Word, length: int) -> list[Word]:
    out = [w]
    while out and len(out[0]) < length:
        out = [u + b for u in out for b in ("0", "1")]
    return out


def constant_scheme(c: ClopenSet, width: int = 4) -> SouslinScheme:
    """Scheme coding the clopen set c itself, refined along the 0-spine."""

    def expand(node: Node) -> WordFamily:
        if any(d != 0 for d in node):
            return frozenset()
        depth = len(node)
        words: list[Word] = []
        for g in c.generators:
            words.extend(_extensions(g, depth) if len(g) < depth else [g])
        return frozenset(words)

    return SouslinScheme(expand, width=width, name="constant")


def gdelta_from_removal(base: TreeAutomaton, removed: list[Word],
                        width: int = 4) -> SouslinScheme:
    """Scheme of lim(base) minus the union of the removed cylinders.

    Level n carries the level-(n + R) tree words of base with no removed
    prefix (R = longest removed word), distributed among the nodes in
    shortlex order: child d takes the d-th contiguous slice of its parent's
    refinement.  Since every removed word has length at most R, refinements
    never gain removed prefixes, so nonempty nodes stay productive.
    """
    for w in removed:
        if not base.word_in_tree(w):
            raise ValueError(f"removed word {w!r} not on the base tree")
    reach = max((len(w) for w in removed), default=0)
    removed_set = set(removed)

    def clean(v: Word) -> bool:
        return not any(v[:i] in removed_set for i in range(len(v) + 1))

    def words_for(node: Node) -> list[Word]:
        if not node:
            return sorted((v for v in base.level_words(reach) if clean(v)),
                          key=shortlex_key)
        parent = words_for(node[:-1])
        depth = len(node) + reach
        refined = sorted(
            (v for w in parent for v in _tree_extensions(base, w, depth)),
            key=shortlex_key,
        )
        d = node[-1]
        q, r = divmod(len(refined), width)
        sizes = [q + (1 if i < r else 0) for i in range(width)]
        lo = sum(sizes[:d])
        return refined[lo:lo + sizes[d]]

    def expand(node: Node) -> WordFamily:
        return frozenset(words_for(node))

    return SouslinScheme(expand, width=width, name="removal")


def _tree_extensions(base: TreeAutomaton, w: Word, length: int) -> list[Word]:
    state = base.walk(w)
    if state is None:
        return []
    out = [(w, state)]
    while out and len(out[0][0]) < length:
        nxt = []
        for u, s in out:
            for b in (0, 1):
                c = base.transitions[s][b]
                if c is not None:
                    nxt.append((u + str(b), c))
        out = nxt
    return [u for u, _ in out]
