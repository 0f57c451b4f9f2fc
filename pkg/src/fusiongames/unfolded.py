"""The general unfolded fusion game on labeled trees.

The tree lives on pairs (bit, label) with a finite explicit label alphabet;
its first-coordinate projection is computed exactly by the subset
construction and stays closed because the label product is compact.  Adam
climbs the labeled tree; Eve answers with clopen sets of the digit space,
subject to "if the projected residual is ideal-positive, the answer must
meet it positively".  Column k of a play collects the answers whose move
index pairs to k; the closed set E_k is the complement of their union.

Desk instantiation is binary: the digit alphabet is {0,1}.  Adam's first
move is exempt from the stay-inside-the-previous-answer clause (the round
zero answer is read as the whole space).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .automata import EMPTY, NotPositive, TreeAutomaton, automaton_of_clopen
from .engine import GameScheme, Play
from .oracles import IdealOracle
from .words import ClopenSet, Word

LabeledNode = tuple[tuple[int, str], ...]


class NoSuchM(Exception):
    def __init__(self, round_no: int, depth: int):
        super().__init__(
            f"no legal exhaustion stage within depth {depth} at round {round_no}")
        self.round_no = round_no
        self.depth = depth


class Stuck(Exception):
    def __init__(self, round_no: int):
        super().__init__(f"no legal extension found at round {round_no}")
        self.round_no = round_no


@dataclass(frozen=True)
class LabeledTree:
    """Deterministic automaton over {0,1} x labels presenting a pruned tree."""

    labels: tuple[str, ...]
    edges: tuple[tuple[int, int, str, int], ...]   # (state, bit, label, target)
    start: int | None
    _index: dict = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {(s, b, y): t for s, b, y, t in self.edges})

    @staticmethod
    def make(labels: Sequence[str], edges, start: int | None) -> "LabeledTree":
        """Prune (every kept state needs an outgoing edge) and drop unreachable states."""
        labels = tuple(labels)
        index = {(s, b, y): t for s, b, y, t in edges}
        states = {s for (s, _, _) in index} | set(index.values())
        if start is not None:
            states.add(start)
        alive = set(states)
        changed = True
        while changed:
            changed = False
            for s in list(alive):
                if not any((s, b, y) in index and index[s, b, y] in alive
                           for b in (0, 1) for y in labels):
                    alive.discard(s)
                    changed = True
        if start is None or start not in alive:
            return LabeledTree(labels, (), None)
        reach = {start}
        frontier = [start]
        while frontier:
            s = frontier.pop()
            for b in (0, 1):
                for y in labels:
                    t = index.get((s, b, y))
                    if t is not None and t in alive and t not in reach:
                        reach.add(t)
                        frontier.append(t)
        kept = tuple(sorted(
            (s, b, y, t) for (s, b, y), t in index.items()
            if s in reach and t in alive and t in reach
        ))
        return LabeledTree(labels, kept, start)

    def is_empty(self) -> bool:
        return self.start is None

    def child(self, state: int, bit: int, label: str) -> int | None:
        return self._index.get((state, bit, label))

    def walk(self, node: LabeledNode) -> int | None:
        s = self.start
        if s is None:
            return None
        for bit, label in node:
            s = self._index.get((s, bit, label))
            if s is None:
                return None
        return s

    def node_in_tree(self, node: LabeledNode) -> bool:
        return self.walk(node) is not None

    def successors(self, state: int) -> list[tuple[int, str, int]]:
        out = []
        for b in (0, 1):
            for y in self.labels:
                t = self._index.get((state, b, y))
                if t is not None:
                    out.append((b, y, t))
        return out

    def restrict(self, node: LabeledNode) -> "LabeledTree":
        """The tree of branches through ``node``."""
        s = self.walk(node)
        if s is None:
            return LabeledTree(self.labels, (), None)
        k = len(node)
        if k == 0:
            return self
        shift = k
        state_ids = {old: shift + old for old in
                     {e[0] for e in self.edges} | {e[3] for e in self.edges} | {self.start}}
        edges = []
        for i, (bit, label) in enumerate(node):
            target = i + 1 if i + 1 < k else state_ids[s]
            edges.append((i, bit, label, target))
        for (s0, b, y, t) in self.edges:
            edges.append((state_ids[s0], b, y, state_ids[t]))
        return LabeledTree.make(self.labels, edges, 0)

    def proj(self) -> TreeAutomaton:
        """Label-erasing projection via the subset construction; exact and closed."""
        if self.is_empty():
            return EMPTY
        start_set = frozenset({self.start})
        index = {start_set: 0}
        rows: list[list[int | None]] = [[None, None]]
        queue = [start_set]
        while queue:
            cur = queue.pop(0)
            for b in (0, 1):
                nxt = frozenset(
                    t for s in cur for y in self.labels
                    for t in [self._index.get((s, b, y))] if t is not None
                )
                if not nxt:
                    continue
                if nxt not in index:
                    index[nxt] = len(rows)
                    rows.append([None, None])
                    queue.append(nxt)
                rows[index[cur]][b] = index[nxt]
        return TreeAutomaton.make(rows, 0)

    def to_text(self) -> str:
        lines = [f"labels: {' '.join(self.labels)}",
                 f"start: {self.start if self.start is not None else -1}"]
        for s, b, y, t in self.edges:
            lines.append(f"edge: {s} {b} {y} {t}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str) -> "LabeledTree":
        labels: tuple[str, ...] = ()
        start: int | None = None
        edges = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, _, rest = line.partition(":")
            rest = rest.strip()
            if key == "labels":
                labels = tuple(rest.split())
            elif key == "start":
                v = int(rest)
                start = None if v < 0 else v
            elif key == "edge":
                s, b, y, t = rest.split()
                edges.append((int(s), int(b), y, int(t)))
            else:
                raise ValueError(f"bad labeled tree line: {raw!r}")
        return LabeledTree.make(labels, edges, start)


def constant_labels(t: TreeAutomaton, label: str = "a") -> LabeledTree:
    """Lift a plain automaton to a labeled tree with one constant label."""
    if t.is_empty():
        return LabeledTree((label,), (), None)
    edges = [
        (s, b, label, row[b])
        for s, row in enumerate(t.transitions)
        for b in (0, 1) if row[b] is not None
    ]
    return LabeledTree.make((label,), edges, t.start)


def digits(node: LabeledNode) -> Word:
    """First coordinates of a labeled node, as a binary word."""
    return "".join(str(b) for b, _ in node)


@dataclass(frozen=True)
class PairingFunction:
    """The Cantor diagonal bijection between naturals and pairs."""

    def pair(self, m: int) -> tuple[int, int]:
        d = 0
        while (d + 1) * (d + 2) // 2 <= m:
            d += 1
        i = m - d * (d + 1) // 2
        return (i, d - i)

    def index(self, i: int, k: int) -> int:
        d = i + k
        return d * (d + 1) // 2 + i


CANTOR_PAIRING = PairingFunction()


# -- legality ---------------------------------------------------------------


def adam_node(play: Play) -> LabeledNode:
    for move in reversed(play):
        if not isinstance(move, ClopenSet):
            return move
    return ()


def validate_adam(tree: LabeledTree, prev: LabeledNode, move) -> str | None:
    if not (isinstance(move, tuple) and all(
            isinstance(p, tuple) and len(p) == 2 for p in move)):
        return "move must be a tuple of (bit, label) pairs"
    if not (len(move) > len(prev) and move[: len(prev)] == prev):
        return "node must strictly extend the previous one"
    if not tree.node_in_tree(move):
        return "node is not on the tree"
    return None


def validate_eve(tree: LabeledTree, oracle: IdealOracle, node: LabeledNode, move) -> str | None:
    if not isinstance(move, ClopenSet):
        return "move must be a clopen set"
    residual = tree.restrict(node).proj()
    if oracle.positive(residual):
        meet = residual.combine(automaton_of_clopen(move), "intersect")
        if oracle.member(meet):
            return ("projected residual is positive but the answer does not "
                    "meet it positively")
    return None


def validate_move(tree: LabeledTree, oracle: IdealOracle, play: Play, move) -> str | None:
    if len(play) % 2 == 0:
        return validate_adam(tree, adam_node(play), move)
    return validate_eve(tree, oracle, play[-1], move)


def scheme(tree: LabeledTree, oracle: IdealOracle) -> GameScheme:
    return GameScheme(lambda play, move: validate_move(tree, oracle, play, move))


# -- Adam synthesis -----------------------------------------------------------


def _node_key(node: LabeledNode, labels: tuple[str, ...]):
    order = {y: i for i, y in enumerate(labels)}
    return (len(node), tuple((b, order[y]) for b, y in node))


def adam_synthesize(tree: LabeledTree, oracle: IdealOracle,
                    max_extra: int = 24) -> Callable[[Play], LabeledNode]:
    """Adam's strategy from a positive projection.

    Each move extends the previous node by the shortest (then smallest) step
    whose digit cylinder fits inside Eve's last answer and whose projected
    residual stays positive; the first move skips the cylinder clause.  When
    all prior moves were legal such an extension exists within the length of
    Eve's generators, so hitting the search bound raises Stuck only on
    illegal histories.
    """
    if not oracle.positive(tree.proj()):
        raise NotPositive("the projection of the tree is not positive")

    def respond(play: Play) -> LabeledNode:
        prev = adam_node(play)
        last_eve: ClopenSet | None = play[-1] if play else None
        prev_state = tree.walk(prev)
        if prev_state is None:
            raise Stuck(len(play) // 2 + 1)
        if last_eve is None:
            levels = 1
        else:
            maxgen = max((len(g) for g in last_eve.generators), default=0)
            levels = min(max_extra, max(1, maxgen - len(prev)) + 1)
        frontier = [(prev, prev_state)]
        for _ in range(levels):
            nxt: list[tuple[LabeledNode, int]] = []
            for node, state in frontier:
                for b, y, t in tree.successors(state):
                    cand = node + ((b, y),)
                    if last_eve is None or last_eve.meets_word(digits(cand)):
                        nxt.append((cand, t))
            nxt.sort(key=lambda ns: _node_key(ns[0], tree.labels))
            for cand, _ in nxt:
                if last_eve is not None and not last_eve.contains_word(digits(cand)):
                    continue
                if oracle.positive(tree.restrict(cand).proj()):
                    return cand
            frontier = nxt
        raise Stuck(len(play) // 2 + 1)

    return respond


# -- Eve counterplay ----------------------------------------------------------


def complement_exhaustion(cover: TreeAutomaton) -> Callable[[int], ClopenSet]:
    """Increasing clopen sets whose union is the complement of the branch set."""

    def stage(m: int) -> ClopenSet:
        if cover.is_empty():
            return ClopenSet.full()
        return ClopenSet.from_words(cover.level_words(m)).complement()

    return stage


def eve_counterplay(covers: Sequence[TreeAutomaton],
                    exhaustions: Sequence[Callable[[int], ClopenSet]] | None = None,
                    tree: LabeledTree | None = None,
                    oracle: IdealOracle | None = None,
                    pairing: PairingFunction = CANTOR_PAIRING,
                    max_stage: int = 24) -> Callable[[Play], ClopenSet]:
    """Eve's counterplay against covers declared for the columns.

    At her n-th move with pairing (i, k): when k names a declared cover, she
    plays its exhaustion at the minimal stage m >= n that keeps the answer
    legal (positively meeting the projected residual whenever that residual
    is positive); columns beyond the declared covers get the whole space.
    """
    if exhaustions is None:
        exhaustions = [complement_exhaustion(c) for c in covers]

    def respond(play: Play) -> ClopenSet:
        n = len(play) // 2 + 1
        _, k = pairing.pair(n)
        if k >= len(covers):
            return ClopenSet.full()
        if tree is None or oracle is None:
            return exhaustions[k](n)
        node = play[-1]
        residual = tree.restrict(node).proj()
        if oracle.member(residual):
            return exhaustions[k](n)
        for m in range(n, max_stage + 1):
            answer = exhaustions[k](m)
            meet = residual.combine(automaton_of_clopen(answer), "intersect")
            if oracle.positive(meet):
                return answer
        raise NoSuchM(n, max_stage)

    return respond


# -- columns ------------------------------------------------------------------


@dataclass
class ColumnState:
    k: int
    union: ClopenSet
    escaped: bool
    escape_round: int | None = None

    def to_json(self) -> dict:
        return {"k": self.k, "union": self.union.to_json(),
                "escaped": self.escaped, "escape_round": self.escape_round}


def column_status(play: Play, pairing: PairingFunction = CANTOR_PAIRING) -> dict[int, ColumnState]:
    """Per-column view of a play: accumulated answers and certified escapes.

    Column k escapes at the first round whose digit cylinder sits inside an
    answer paired to k; cylinders only shrink, so escapes are stable.
    """
    eve_moves: list[tuple[int, ClopenSet]] = []
    adam_nodes: list[LabeledNode] = []
    for idx, move in enumerate(play):
        if idx % 2 == 0:
            adam_nodes.append(move)
        else:
            eve_moves.append((idx // 2 + 1, move))
    columns: dict[int, ColumnState] = {}
    for n, answer in eve_moves:
        _, k = pairing.pair(n)
        st = columns.setdefault(k, ColumnState(k, ClopenSet.empty(), False))
        st.union = st.union.union(answer)
        if not st.escaped:
            for r in range(n, len(adam_nodes) + 1):
                if answer.contains_word(digits(adam_nodes[r - 1])):
                    st.escaped = True
                    st.escape_round = r
                    break
    return columns


def extract_front_k(adam_strategy, k: int,
                    pairing: PairingFunction = CANTOR_PAIRING) -> set[Play]:
    """Front of minimal even nodes at which column k's escape is determined."""
    from .engine import extract_front

    def escaped(play: Play) -> bool:
        state = column_status(play, pairing).get(k)
        return state is not None and state.escaped

    return extract_front(adam_strategy, escaped)
