"""Closed subsets of Cantor space as deterministic automata over {0,1}.

A :class:`TreeAutomaton` presents a pruned tree (prefix-closed language in
which every word extends): its branch set is a closed subset of Cantor space.
Construction always prunes, so every state of a nonempty automaton has at
least one outgoing edge and the empty set is the unique automaton with no
states.

All measure computations are exact.  The branch measure solves the linear
system m_s = (m_{s0} + m_{s1}) / 2 over the rationals after fixing m = 1 on
the greatest fixpoint of "both children exist and stay in the set" (the
states that carry a full binary subtree); that fixpoint removes the
degenerate eigenspace, so the remaining system has a unique solution.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .words import ClopenSet, Word, check_word, shortlex_key


class EmptyTree(Exception):
    """Raised when an operation needs a nonempty automaton."""


class NotPositive(Exception):
    """Raised when an ideal-positivity precondition fails."""


@dataclass(frozen=True)
class TreeAutomaton:
    """Deterministic automaton over {0,1}; ``transitions[s] == (child0, child1)``."""

    transitions: tuple[tuple[int | None, int | None], ...]
    start: int | None

    # -- construction -------------------------------------------------

    @staticmethod
    def make(transitions: Sequence[Sequence[int | None]], start: int | None) -> "TreeAutomaton":
        """Build an automaton, pruning dead states and dropping unreachable ones."""
        n = len(transitions)
        if start is None or not (0 <= start < n):
            return EMPTY
        alive = [True] * n
        changed = True
        while changed:
            changed = False
            for s in range(n):
                if not alive[s]:
                    continue
                if not any(c is not None and alive[c] for c in transitions[s]):
                    alive[s] = False
                    changed = True
        if not alive[start]:
            return EMPTY
        reach = {start}
        frontier = [start]
        while frontier:
            s = frontier.pop()
            for c in transitions[s]:
                if c is not None and alive[c] and c not in reach:
                    reach.add(c)
                    frontier.append(c)
        order = sorted(reach)
        index = {old: new for new, old in enumerate(order)}
        table = []
        for old in order:
            row = tuple(
                index[c] if (c is not None and alive[c] and c in reach) else None
                for c in transitions[old]
            )
            table.append(row)
        return TreeAutomaton(tuple(table), index[start])

    @staticmethod
    def empty() -> "TreeAutomaton":
        return EMPTY

    # -- basic structure ----------------------------------------------

    def is_empty(self) -> bool:
        return self.start is None

    @property
    def state_count(self) -> int:
        return len(self.transitions)

    def child(self, state: int, bit: int) -> int | None:
        return self.transitions[state][bit]

    def walk(self, word: Word, state: int | None = None) -> int | None:
        """Follow ``word`` from ``state`` (default: start); None when the path dies."""
        if self.is_empty():
            return None
        s = self.start if state is None else state
        for ch in word:
            s = self.transitions[s][int(ch)]
            if s is None:
                return None
        return s

    def word_in_tree(self, word: Word) -> bool:
        return self.walk(check_word(word)) is not None

    def level_words(self, n: int) -> list[Word]:
        """All tree words of length ``n`` (use only at small depth)."""
        if self.is_empty():
            return []
        level = [("", self.start)]
        for _ in range(n):
            nxt = []
            for w, s in level:
                for b in (0, 1):
                    c = self.transitions[s][b]
                    if c is not None:
                        nxt.append((w + str(b), c))
            level = nxt
        return [w for w, _ in level]

    def level_count(self, n: int) -> int:
        """|T ∩ 2^n| by iterated transition counting."""
        if n < 0:
            raise ValueError("level must be nonnegative")
        if self.is_empty():
            return 0
        counts = [0] * self.state_count
        counts[self.start] = 1
        for _ in range(n):
            nxt = [0] * self.state_count
            for s, c in enumerate(counts):
                if not c:
                    continue
                for b in (0, 1):
                    t = self.transitions[s][b]
                    if t is not None:
                        nxt[t] += c
            counts = nxt
        return sum(counts)

    # -- combinations ---------------------------------------------------

    def restrict(self, word: Word) -> "TreeAutomaton":
        """The automaton of T(word): branches through ``word``."""
        check_word(word)
        if self.walk(word) is None:
            return EMPTY
        k = len(word)
        if k == 0:
            return self
        shift = k
        table: list[list[int | None]] = []
        for i, ch in enumerate(word):
            row: list[int | None] = [None, None]
            if i + 1 < k:
                row[int(ch)] = i + 1
            else:
                row[int(ch)] = shift + self.walk(word)
            table.append(row)
        for s in range(self.state_count):
            table.append([c if c is None else shift + c for c in self.transitions[s]])
        return TreeAutomaton.make(table, 0)

    def combine(self, other: "TreeAutomaton", op: str) -> "TreeAutomaton":
        """Product automaton for ``intersect`` or ``union`` of branch sets."""
        if op not in ("intersect", "union"):
            raise ValueError(f"unknown op {op!r}")
        if op == "intersect":
            if self.is_empty() or other.is_empty():
                return EMPTY
        else:
            if self.is_empty():
                return other
            if other.is_empty():
                return self
        start_pair = (self.start, other.start)
        index: dict[tuple[int | None, int | None], int] = {start_pair: 0}
        rows: list[list[int | None]] = [[None, None]]
        queue = [start_pair]
        while queue:
            pair = queue.pop(0)
            sa, sb = pair
            for b in (0, 1):
                ca = self.transitions[sa][b] if sa is not None else None
                cb = other.transitions[sb][b] if sb is not None else None
                if op == "intersect":
                    if ca is None or cb is None:
                        continue
                else:
                    if ca is None and cb is None:
                        continue
                child = (ca, cb)
                if child not in index:
                    index[child] = len(rows)
                    rows.append([None, None])
                    queue.append(child)
                rows[index[pair]][b] = index[child]
        return TreeAutomaton.make(rows, 0)

    def branches_subset(self, other: "TreeAutomaton") -> bool:
        """lim(self) ⊆ lim(other); exact, via the synchronized product."""
        if self.is_empty():
            return True
        if other.is_empty():
            return False
        seen = {(self.start, other.start)}
        queue = [(self.start, other.start)]
        while queue:
            sa, sb = queue.pop()
            for b in (0, 1):
                ca = self.transitions[sa][b]
                if ca is None:
                    continue
                cb = other.transitions[sb][b]
                if cb is None:
                    return False
                if (ca, cb) not in seen:
                    seen.add((ca, cb))
                    queue.append((ca, cb))
        return True

    def equivalent(self, other: "TreeAutomaton") -> bool:
        return self.branches_subset(other) and other.branches_subset(self)

    # -- stems ----------------------------------------------------------

    def stem(self) -> tuple[Word, bool]:
        """The maximal w with T = T(w); flag True for point-trees (no maximum)."""
        if self.is_empty():
            raise EmptyTree("empty automaton has no stem")
        w = ""
        s = self.start
        seen = {s}
        while True:
            kids = [b for b in (0, 1) if self.transitions[s][b] is not None]
            if len(kids) == 2:
                return w, False
            b = kids[0]
            nxt = self.transitions[s][b]
            if nxt in seen:
                return "", True
            w += str(b)
            s = nxt
            seen.add(s)

    # -- exact measure ----------------------------------------------------

    def full_states(self) -> set[int]:
        """Greatest fixpoint of "both children exist and stay in the set".

        These are exactly the states whose residual closed set is a full
        cylinder (measure one relative to its root).
        """
        current = set(range(self.state_count))
        changed = True
        while changed:
            changed = False
            for s in list(current):
                c0, c1 = self.transitions[s]
                if c0 not in current or c1 not in current:
                    current.discard(s)
                    changed = True
        return current

    def state_measures(self) -> dict[int, Fraction]:
        """Exact branch measure of the residual set of every state."""
        if self.is_empty():
            return {}
        full = self.full_states()
        values: dict[int, Fraction] = {s: Fraction(1) for s in full}
        unknown = [s for s in range(self.state_count) if s not in full]
        if not unknown:
            return values
        pos = {s: i for i, s in enumerate(unknown)}
        n = len(unknown)
        # rows: m_s - sum coeff*m_c = const
        matrix = [[Fraction(0)] * (n + 1) for _ in range(n)]
        for s in unknown:
            i = pos[s]
            matrix[i][i] = Fraction(1)
            for b in (0, 1):
                c = self.transitions[s][b]
                if c is None:
                    continue
                if c in full:
                    matrix[i][n] += Fraction(1, 2)
                else:
                    matrix[i][pos[c]] -= Fraction(1, 2)
        _solve_inplace(matrix)
        for s in unknown:
            values[s] = matrix[pos[s]][n]
        return values

    def branch_measure(self) -> Fraction:
        if self.is_empty():
            return Fraction(0)
        return self.state_measures()[self.start]

    def self_supporting(self) -> bool:
        """Every reachable state's residual set has positive measure."""
        if self.is_empty():
            return False
        return all(m > 0 for m in self.state_measures().values())

    # -- countability -------------------------------------------------------

    def sccs(self) -> list[int]:
        """Map state -> strongly connected component id (Kosaraju)."""
        n = self.state_count
        edges = [[c for c in row if c is not None] for row in self.transitions]
        redges: list[list[int]] = [[] for _ in range(n)]
        for s, row in enumerate(edges):
            for c in row:
                redges[c].append(s)
        order: list[int] = []
        seen = [False] * n
        for root in range(n):
            if seen[root]:
                continue
            stack = [(root, 0)]
            seen[root] = True
            while stack:
                s, i = stack.pop()
                if i < len(edges[s]):
                    stack.append((s, i + 1))
                    c = edges[s][i]
                    if not seen[c]:
                        seen[c] = True
                        stack.append((c, 0))
                else:
                    order.append(s)
        comp = [-1] * n
        cid = 0
        for s in reversed(order):
            if comp[s] != -1:
                continue
            stack = [s]
            comp[s] = cid
            while stack:
                u = stack.pop()
                for v in redges[u]:
                    if comp[v] == -1:
                        comp[v] = cid
                        stack.append(v)
            cid += 1
        return comp

    def is_countable(self) -> bool:
        """True iff the branch set has no perfect subtree.

        lim T is uncountable exactly when some state pumps two incomparable
        return words, i.e. both its children lie in its own strongly
        connected component.
        """
        if self.is_empty():
            return True
        comp = self.sccs()
        for s in range(self.state_count):
            c0, c1 = self.transitions[s]
            if c0 is not None and c1 is not None and comp[c0] == comp[s] == comp[c1]:
                return False
        return True

    # -- serialization -----------------------------------------------------

    def to_text(self) -> str:
        lines = [f"states: {self.state_count}", f"start: {self.start if self.start is not None else -1}"]
        for s, row in enumerate(self.transitions):
            for b in (0, 1):
                if row[b] is not None:
                    lines.append(f"edge: {s} {b} {row[b]}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str) -> "TreeAutomaton":
        n = 0
        start: int | None = None
        edges = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, _, rest = line.partition(":")
            rest = rest.strip()
            if key == "states":
                n = int(rest)
            elif key == "start":
                v = int(rest)
                start = None if v < 0 else v
            elif key == "edge":
                s, b, t = (int(x) for x in rest.split())
                edges.append((s, b, t))
            else:
                raise ValueError(f"bad automaton line: {raw!r}")
        table: list[list[int | None]] = [[None, None] for _ in range(n)]
        for s, b, t in edges:
            table[s][b] = t
        return TreeAutomaton.make(table, start)

    def to_json(self) -> dict:
        return {
            "states": self.state_count,
            "start": self.start,
            "edges": [
                [s, b, row[b]]
                for s, row in enumerate(self.transitions)
                for b in (0, 1)
                if row[b] is not None
            ],
        }

    @staticmethod
    def from_json(data: dict) -> "TreeAutomaton":
        table: list[list[int | None]] = [[None, None] for _ in range(data["states"])]
        for s, b, t in data["edges"]:
            table[s][b] = t
        return TreeAutomaton.make(table, data["start"])


EMPTY = TreeAutomaton((), None)


def _solve_inplace(matrix: list[list[Fraction]]) -> None:
    """Gaussian elimination for an n x (n+1) exact system; solution in last column."""
    n = len(matrix)
    for col in range(n):
        pivot = next(r for r in range(col, n) if matrix[r][col] != 0)
        matrix[col], matrix[pivot] = matrix[pivot], matrix[col]
        inv = 1 / matrix[col][col]
        matrix[col] = [x * inv for x in matrix[col]]
        for r in range(n):
            if r != col and matrix[r][col] != 0:
                f = matrix[r][col]
                matrix[r] = [a - f * b for a, b in zip(matrix[r], matrix[col])]


# -- clopen <-> automaton bridges ------------------------------------------


def automaton_of_clopen(c: ClopenSet) -> TreeAutomaton:
    """Automaton whose branch set is the clopen set (trie plus a full sink)."""
    if c.is_empty():
        return EMPTY
    prefixes = {""}
    for g in c.generators:
        for i in range(len(g) + 1):
            prefixes.add(g[:i])
    nodes = sorted(prefixes, key=shortlex_key)
    sink = len(nodes)
    index = {w: i for i, w in enumerate(nodes)}
    table: list[list[int | None]] = [[None, None] for _ in range(sink + 1)]
    table[sink] = [sink, sink]
    for w in nodes:
        if w in c.generators:
            table[index[w]] = [sink, sink]
            continue
        for b in ("0", "1"):
            if w + b in index:
                table[index[w]][int(b)] = index[w + b]
    return TreeAutomaton.make(table, index[""])


def branches_in_clopen(t: TreeAutomaton, c: ClopenSet) -> bool:
    """lim(t) ⊆ c, decided exactly.

    Walks the tree only along prefixes not yet inside a generator; a prefix
    reaching generator depth uncovered witnesses an escaping branch.
    """
    if t.is_empty():
        return True
    if c.is_empty():
        return False
    by_length: dict[int, set[Word]] = {}
    for g in c.generators:
        by_length.setdefault(len(g), set()).add(g)
    depth_cap = max(by_length)
    stack: list[tuple[Word, int]] = [("", t.start)]
    while stack:
        word, state = stack.pop()
        if any(word[:length] in gens for length, gens in by_length.items()
               if length <= len(word)):
            continue
        if len(word) >= depth_cap:
            return False
        for b in (0, 1):
            child = t.transitions[state][b]
            if child is not None:
                stack.append((word + str(b), child))
    return True


def meets_clopen(t: TreeAutomaton, c: ClopenSet) -> bool:
    return not t.combine(automaton_of_clopen(c), "intersect").is_empty()


def level_clopen(t: TreeAutomaton, n: int) -> ClopenSet:
    """The clopen over-approximation by level-n tree words."""
    return ClopenSet.from_words(t.level_words(n))


# -- eventually periodic points ---------------------------------------------


@dataclass(frozen=True)
class EventuallyPeriodicPoint:
    """The single point prefix · period^ω of Cantor space."""

    prefix: Word
    period: Word

    def __post_init__(self):
        check_word(self.prefix)
        check_word(self.period)
        if not self.period:
            raise ValueError("period must be nonempty")

    def head(self, length: int) -> Word:
        reps = 0 if length <= len(self.prefix) else -(-(length - len(self.prefix)) // len(self.period))
        return (self.prefix + self.period * reps)[:length]


def contains_point(t: TreeAutomaton, p: EventuallyPeriodicPoint) -> bool:
    """Exact membership of an eventually periodic point in lim(t)."""
    s = t.walk(p.prefix)
    if s is None:
        return False
    seen = {s}
    while True:
        s = t.walk(p.period, state=s)
        if s is None:
            return False
        if s in seen:
            return True
        seen.add(s)


def point_in_clopen(p: EventuallyPeriodicPoint, c: ClopenSet) -> bool:
    return any(p.head(len(g)) == g for g in c.generators)


def escape_point(t: TreeAutomaton, small: Sequence[TreeAutomaton], oracle) -> EventuallyPeriodicPoint:
    """A concrete branch of a positive set avoiding finitely many small closed sets.

    Stage i refines the current word to the shortest (then lexicographically
    least) tree word whose cylinder misses small[i] while the restricted set
    stays positive; afterwards the word is closed off along the least cycle
    reachable in the automaton.  All choices are deterministic.
    """
    if oracle.member(t):
        raise NotPositive("the set to escape into is not positive")
    for i, s in enumerate(small):
        if not oracle.member(s):
            raise ValueError(f"avoided set {i} is not a member of the ideal")
    word = ""
    for i, avoid in enumerate(small):
        frontier = [word]
        found = None
        while found is None:
            if not frontier or (frontier and len(frontier[0]) > len(word) + 64):
                raise NotPositive(f"no positive refinement disjoint from avoided set {i}")
            for cand in frontier:
                if avoid.walk(cand) is None and oracle.positive(t.restrict(cand)):
                    found = cand
                    break
            frontier = [
                w + b for w in frontier for b in ("0", "1") if t.walk(w + b) is not None
            ]
        word = found
    state = t.walk(word)
    lead, cycle = _least_cycle(t, state)
    return EventuallyPeriodicPoint(word + lead, cycle)


def _least_cycle(t: TreeAutomaton, state: int) -> tuple[Word, Word]:
    """Shortest-then-lex lead-in word and cycle word from a state."""
    comp = t.sccs()
    on_cycle = set()
    for s in range(t.state_count):
        for b in (0, 1):
            c = t.transitions[s][b]
            if c is not None and comp[c] == comp[s]:
                on_cycle.add(s)
                on_cycle.add(c)
    lead = ""
    frontier = [("", state)]
    seen = {state}
    target = None
    while target is None:
        for w, s in frontier:
            if s in on_cycle:
                lead, target = w, s
                break
        else:
            nxt = []
            for w, s in frontier:
                for b in (0, 1):
                    c = t.transitions[s][b]
                    if c is not None and c not in seen:
                        seen.add(c)
                        nxt.append((w + str(b), c))
            frontier = nxt
            continue
    cycle_frontier = [("", target)]
    while True:
        nxt = []
        for w, s in cycle_frontier:
            for b in (0, 1):
                c = t.transitions[s][b]
                if c is None:
                    continue
                if c == target:
                    return lead, w + str(b)
                nxt.append((w + str(b), c))
        cycle_frontier = nxt


# -- the standard zoo ----------------------------------------------------


def _zoo(table, start=0) -> TreeAutomaton:
    return TreeAutomaton.make(table, start)


FULL = _zoo([(0, 0)])
ZERO = _zoo([(0, None)])
HALF = _zoo([(1, None), (1, 1)])
AV11 = _zoo([(0, 1), (0, None)])
MIX = _zoo([(1, 2), (1, 1), (None, 2)])
COMB = _zoo([(0, 1), (1, None)])

ZOO = {"FULL": FULL, "ZERO": ZERO, "HALF": HALF, "AV11": AV11, "MIX": MIX, "COMB": COMB}
