"""Two-player game machinery: schemes, strategies, fronts, simulation, solving.

Adam moves first and moves are numbered from one, so Adam owns the odd-numbered
moves and Eve the even ones.  A partial play is a tuple of moves of even
length.  Game schemes carry a legality validator (partial play, move) ->
violation-or-None; schemes with finitely enumerable moves may also carry an
enumerator, which strategy materialization and the bounded solver require.

Payoff sets are not represented as abstract subsets of infinite plays: each
concrete game module ships finite-depth status evaluators instead, and those
evaluators are the contract the fusion-scheme axioms constrain (monotone in
the target set, countable-union friendly, and the constructed point belongs
to the target whenever Adam wins).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

Move = Any
Play = tuple
ADAM = "adam"
EVE = "eve"


class IllegalMove(Exception):
    def __init__(self, player: str, round_no: int, violation: str):
        super().__init__(f"{player} round {round_no}: {violation}")
        self.player = player
        self.round_no = round_no
        self.violation = violation


class IllegalPrefix(Exception):
    pass


class ConditionNotMet(Exception):
    def __init__(self, branch: Play):
        super().__init__(f"condition never satisfied along {branch!r}")
        self.branch = branch


def to_move(play: Play) -> str:
    return ADAM if len(play) % 2 == 0 else EVE


def round_number(play: Play) -> int:
    """Number of the move about to be made (1-based rounds, two moves per round)."""
    return len(play) // 2 + 1


@dataclass
class GameScheme:
    """Legality contract; ``moves`` enumerates legal moves when that set is finite."""

    validate: Callable[[Play, Move], str | None]
    moves: Callable[[Play], list] | None = None

    def check(self, play: Play, move: Move) -> None:
        violation = self.validate(play, move)
        if violation is not None:
            raise IllegalMove(to_move(play), round_number(play), violation)


@dataclass
class StrategyTree:
    """Explicit strategy for one player, materialized to a finite depth.

    At the owner's turns a node has exactly one child; at opponent turns it
    has one child per materialized opponent move.  Leaves are positions where
    materialization stopped.
    """

    owner: str
    children: dict = field(default_factory=dict)

    def is_leaf(self) -> bool:
        return not self.children

    def node_at(self, play: Play) -> "StrategyTree | None":
        node = self
        for move in play:
            if move not in node.children:
                return None
            node = node.children[move]
        return node

    def respond(self, play: Play) -> Move:
        node = self.node_at(play)
        if node is None or not node.children:
            raise LookupError(f"strategy tree has no move after {play!r}")
        if len(node.children) != 1:
            raise LookupError("asked for a move at an opponent node")
        return next(iter(node.children))

    def plays(self) -> Iterable[Play]:
        """All maximal plays (paths to leaves)."""
        stack: list[tuple[Play, StrategyTree]] = [((), self)]
        while stack:
            play, node = stack.pop()
            if node.is_leaf():
                yield play
            else:
                for move, child in node.children.items():
                    stack.append((play + (move,), child))

    def nodes(self) -> Iterable[tuple[Play, "StrategyTree"]]:
        stack: list[tuple[Play, StrategyTree]] = [((), self)]
        while stack:
            play, node = stack.pop()
            yield play, node
            for move, child in node.children.items():
                stack.append((play + (move,), child))


Responder = Callable[[Play], Move]


def as_responder(strategy) -> Responder:
    if isinstance(strategy, StrategyTree):
        return strategy.respond
    return strategy


def simulate(scheme: GameScheme, adam, eve, rounds: int) -> Play:
    """The unique alternating play of ``rounds`` rounds; every move checked legal."""
    adam_r, eve_r = as_responder(adam), as_responder(eve)
    play: Play = ()
    for _ in range(rounds):
        for player, responder in ((ADAM, adam_r), (EVE, eve_r)):
            move = responder(play)
            violation = scheme.validate(play, move)
            if violation is not None:
                raise IllegalMove(player, round_number(play), violation)
            play = play + (move,)
    return play


def relativize(scheme: GameScheme, prefix: Play) -> GameScheme:
    """The scheme of continuations after a legal partial play (even length)."""
    if len(prefix) % 2 != 0:
        raise IllegalPrefix("partial plays end with a move of Eve")
    probe: Play = ()
    for move in prefix:
        if scheme.validate(probe, move) is not None:
            raise IllegalPrefix(f"illegal prefix at move {len(probe) + 1}")
        probe = probe + (move,)

    def validate(play: Play, move: Move) -> str | None:
        return scheme.validate(prefix + play, move)

    moves = None
    if scheme.moves is not None:
        moves = lambda play: scheme.moves(prefix + play)
    return GameScheme(validate, moves)


def materialize(scheme: GameScheme, owner: str, strategy, opponent_moves, depth: int) -> StrategyTree:
    """Build the explicit tree of ``strategy`` against an opponent move menu.

    ``opponent_moves`` enumerates the opponent options per position (defaults
    to the scheme enumerator); ``depth`` counts moves, not rounds.
    """
    responder = as_responder(strategy)
    if opponent_moves is None:
        if scheme.moves is None:
            raise ValueError("scheme has no move enumerator; pass opponent_moves")
        opponent_moves = scheme.moves

    def build(play: Play, remaining: int) -> StrategyTree:
        node = StrategyTree(owner)
        if remaining == 0:
            return node
        if to_move(play) == owner:
            move = responder(play)
            scheme.check(play, move)
            node.children[move] = build(play + (move,), remaining - 1)
        else:
            for move in opponent_moves(play):
                scheme.check(play, move)
                node.children[move] = build(play + (move,), remaining - 1)
        return node

    return build((), depth)


# -- explicit solved games -------------------------------------------------


@dataclass
class GameNode:
    """Explicit finite game tree; leaves carry the winner."""

    player: str | None = None          # whose move at this node; None at leaves
    children: dict = field(default_factory=dict)
    winner: str | None = None          # set at leaves

    @staticmethod
    def leaf(winner: str) -> "GameNode":
        return GameNode(player=None, winner=winner)


def solve_bounded(tree: GameNode) -> tuple[str, StrategyTree]:
    """Backward induction; returns the winner and a strategy achieving the win."""
    winner = _value(tree)
    return winner, _winning_strategy(tree, winner)


def _value(node: GameNode) -> str:
    if not node.children:
        if node.winner not in (ADAM, EVE):
            raise ValueError("leaf without a winner label")
        return node.winner
    values = {move: _value(child) for move, child in node.children.items()}
    wins = [m for m, v in values.items() if v == node.player]
    return node.player if wins else _other(node.player)


def _other(player: str) -> str:
    return EVE if player == ADAM else ADAM


def _winning_strategy(node: GameNode, winner: str) -> StrategyTree:
    out = StrategyTree(winner)
    if not node.children:
        return out
    if node.player == winner:
        best = min(
            (m for m, c in node.children.items() if _value(c) == winner),
            key=_move_key,
        )
        out.children[best] = _winning_strategy(node.children[best], winner)
    else:
        for move, child in node.children.items():
            out.children[move] = _winning_strategy(child, winner)
    return out


def _move_key(move: Move):
    return repr(move)


def play_winner(tree: GameNode, play: Play) -> str:
    node = tree
    for move in play:
        node = node.children[move]
    if node.children:
        raise ValueError("play does not reach a leaf")
    return node.winner


# -- fronts ------------------------------------------------------------------


def check_front(tree, candidate: set[Play]) -> bool:
    """Antichain plus covering: every maximal branch passes through the front."""
    nodes = set()
    for play, _ in _generic_nodes(tree):
        nodes.add(play)
    if not candidate <= nodes:
        return False
    ordered = sorted(candidate, key=len)
    for i, p in enumerate(ordered):
        for q in ordered[i + 1:]:
            if len(p) < len(q) and q[: len(p)] == p:
                return False
    for play, node in _generic_nodes(tree):
        if not node.children:
            if not any(play[: len(f)] == f for f in candidate):
                return False
    return True


def _generic_nodes(tree) -> Iterable[tuple[Play, Any]]:
    stack = [((), tree)]
    while stack:
        play, node = stack.pop()
        yield play, node
        for move, child in node.children.items():
            stack.append((play + (move,), child))


def extract_front(strategy: StrategyTree, condition: Callable[[Play], bool]) -> set[Play]:
    """Minimal even-depth nodes satisfying a monotone condition; always a front."""
    front: set[Play] = set()

    def walk(play: Play, node: StrategyTree) -> None:
        if len(play) % 2 == 0 and condition(play):
            front.add(play)
            return
        if node.is_leaf():
            raise ConditionNotMet(play)
        for move, child in node.children.items():
            walk(play + (move,), child)

    walk((), strategy)
    return front
