"""The closed-null fusion game on Cantor space.

Rules, round n (n >= 1): Adam picks a word of length n strictly extending his
previous word; Eve answers with a clopen set inside Adam's cylinder whose
relative measure is strictly below 1/n.

Eve's synthesized strategy from a family of null covers answers with the
level-k cylinders of the restricted cover tree.  The cover-tree threshold
|T_n(sigma) ∩ 2^k| / 2^k < 2^-n / n bounds the *absolute* measure by the
amount that makes the *relative* bound legal; the plain 1/n threshold on the
absolute ratio would not.  Minimal k is chosen, so answers are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .automata import TreeAutomaton, branches_in_clopen
from .engine import ADAM, EVE, GameScheme, Play, as_responder
from .words import ClopenSet, Word


class IllegalStrategy(Exception):
    pass


def adam_word(play: Play) -> Word:
    """Adam's latest word in a play of the null game ("" before his first move)."""
    for move in reversed(play):
        if isinstance(move, str):
            return move
    return ""


def validate_adam(n: int, prev: Word, word) -> str | None:
    if not isinstance(word, str) or any(c not in "01" for c in word):
        return "move must be a binary word"
    if len(word) != n:
        return f"word must have length {n}"
    if not (word.startswith(prev) and len(word) > len(prev)):
        return "word must strictly extend the previous one"
    return None


def validate_eve(n: int, xi: Word, c) -> str | None:
    if not isinstance(c, ClopenSet):
        return "move must be a clopen set"
    if not all(g.startswith(xi) for g in c.generators):
        return f"clopen set must lie inside the cylinder [{xi}]"
    rel = c.measure(base=xi)
    if rel >= Fraction(1, n):
        return f"relative measure {rel} >= 1/{n}"
    return None


def validate_move(play: Play, move) -> str | None:
    """Legality of the next move after a partial play; spec for the engine."""
    n = len(play) // 2 + 1
    if len(play) % 2 == 0:
        return validate_adam(n, adam_word(play), move)
    return validate_eve(n, play[-1], move)


def scheme() -> GameScheme:
    return GameScheme(validate_move)


def eve_synthesize(covers: Sequence[TreeAutomaton]) -> Callable[[Play], ClopenSet]:
    """Eve's strategy from a list of null covers (increasing prefix unions).

    At round n with Adam at sigma, the answer is the union of the level-k
    cylinders of the restricted tree of the union of the first n covers, for
    the minimal k with level-count ratio below 2^-n / n.  The answer contains
    the covered trace inside Adam's cylinder and is always legal.
    """
    for c in covers:
        if c.branch_measure() != 0:
            raise ValueError("cover is not null")
    unions: list[TreeAutomaton] = []
    acc = TreeAutomaton.empty()
    for c in covers:
        acc = acc.combine(c, "union")
        unions.append(acc)
    cache: dict[tuple[int, Word], ClopenSet] = {}

    def respond(play: Play) -> ClopenSet:
        n = len(play) // 2 + 1
        sigma = play[-1]
        key = (n, sigma)
        if key not in cache:
            cache[key] = _cover_answer(unions, n, sigma)
        return cache[key]

    return respond


def _cover_answer(unions: list[TreeAutomaton], n: int, sigma: Word) -> ClopenSet:
    if not unions:
        return ClopenSet.empty()
    d_n = unions[min(n, len(unions)) - 1]
    restricted = d_n.restrict(sigma)
    if restricted.is_empty():
        return ClopenSet.empty()
    bound = Fraction(1, n * 2 ** n)
    k = len(sigma) + 1
    while Fraction(restricted.level_count(k), 2 ** k) >= bound:
        k += 1
    return ClopenSet.from_words(restricted.level_words(k))


def straight_line_play(eve, sigma: Word) -> Play:
    """The play in which Adam announces the successive prefixes of sigma."""
    eve_r = as_responder(eve)
    play: Play = ()
    for n in range(1, len(sigma) + 1):
        play = play + (sigma[:n],)
        play = play + (eve_r(play),)
    return play


def extract_witness(eve, depth: int) -> tuple[list[ClopenSet], list[ClopenSet]]:
    """Clopen witnesses E_n over the straight-line plays, and their tail meets.

    E_n is the union of Eve's round-n answers over all straight-line plays of
    the 2^n words of length n; exactly mu(E_n) <= 1/n.  The second list holds
    the finite tail intersections available at this depth, whose limits are
    the closed null sets covering the target.
    """
    eve_r = as_responder(eve)
    answers: dict[Word, ClopenSet] = {}
    plays: list[Play] = [()]
    for n in range(1, depth + 1):
        nxt: list[Play] = []
        for play in plays:
            for b in ("0", "1"):
                sigma = adam_word(play) + b
                violation = validate_move(play, sigma)
                if violation is not None:
                    raise IllegalStrategy(violation)
                extended = play + (sigma,)
                c = eve_r(extended)
                violation = validate_move(extended, c)
                if violation is not None:
                    raise IllegalStrategy(f"round {n} at {sigma!r}: {violation}")
                answers[sigma] = c
                nxt.append(extended + (c,))
        plays = nxt
    e_sets: list[ClopenSet] = []
    for n in range(1, depth + 1):
        e_n = ClopenSet.empty()
        for sigma, c in answers.items():
            if len(sigma) == n:
                e_n = e_n.union(c)
        if e_n.measure() > Fraction(1, n):
            raise IllegalStrategy(f"witness E_{n} has measure {e_n.measure()} > 1/{n}")
        e_sets.append(e_n)
    tails: list[ClopenSet] = []
    for n in range(1, depth + 1):
        d_n = e_sets[n - 1]
        for m in range(n, depth):
            d_n = d_n.intersect(e_sets[m])
        tails.append(d_n)
    return e_sets, tails


def minimal_cover(target: TreeAutomaton, xi: Word, level: int) -> ClopenSet:
    """The smallest clopen set with generators of length <= level containing
    the target trace inside [xi] (the level-cut of the restricted tree)."""
    return ClopenSet.from_words(target.restrict(xi).level_words(level))


def surrogate_tree(target: TreeAutomaton, rounds: int, gen_cap: int, prefix: Play = ()):
    """Explicit finite game tree of the bounded null-game surrogate.

    Adam plays both bit extensions; Eve's menu holds the empty set and the
    legal level-k minimal covers of the target trace (k <= gen_cap).  Any
    clopen answer helps Eve only through trace containment, and a containing
    answer with least measure is one of the minimal covers, so the menu is
    domination-complete for the horizon payoff.  Leaves award Eve on a
    certified escape or a tracked final round, Adam on a pending verdict.
    The tree starts below ``prefix`` when given.
    """
    from .engine import ADAM, EVE, GameNode

    def eve_menu(n: int, xi: Word) -> list[ClopenSet]:
        menu = [ClopenSet.empty()]
        for k in range(len(xi) + 1, gen_cap + 1):
            cover = minimal_cover(target, xi, k)
            if cover.is_empty():
                break
            if validate_eve(n, xi, cover) is None and cover not in menu:
                menu.append(cover)
        return menu

    def build(play: Play, n: int):
        if n > rounds:
            status = payoff_status(play, target)
            return GameNode.leaf(ADAM if status.kind == "ADAM_PENDING" else EVE)
        xi = adam_word(play)
        adam_node = GameNode(player=ADAM)
        for b in ("0", "1"):
            word = xi + b
            eve_node = GameNode(player=EVE)
            for c in eve_menu(n, word):
                eve_node.children[c] = build(play + (word, c), n + 1)
            adam_node.children[word] = eve_node
        return adam_node

    return build(prefix, len(prefix) // 2 + 1)


@dataclass(frozen=True)
class PayoffStatus:
    kind: str                 # EVE_CERT_NOT_IN_A | EVE_TRACKING | ADAM_PENDING
    since: int | None = None

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.since is not None:
            out["since"] = self.since
        return out


def payoff_status(play: Play, target: TreeAutomaton) -> PayoffStatus:
    """Finite-depth verdict for the payoff "x not in A, or x in C_n eventually".

    Certifies Eve once Adam's word leaves the target tree; reports tracking
    from round m when the current target trace inside Adam's cylinder lies in
    every answer from round m on; otherwise the play is still Adam's.
    """
    if not play:
        return PayoffStatus("ADAM_PENDING")
    xi = adam_word(play)
    if not target.word_in_tree(xi):
        return PayoffStatus("EVE_CERT_NOT_IN_A")
    eve_moves = play[1::2]
    trace = target.restrict(xi)
    since: int | None = None
    for j in range(len(eve_moves), 0, -1):
        if branches_in_clopen(trace, eve_moves[j - 1]):
            since = j
        else:
            break
    if since is not None:
        return PayoffStatus("EVE_TRACKING", since=since)
    return PayoffStatus("ADAM_PENDING")
