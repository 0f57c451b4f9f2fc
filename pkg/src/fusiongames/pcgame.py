"""The piecewise-continuity fusion game.

Adam builds a point of Cantor space bit by bit; Eve publishes, per round, a
finite batch of monotone word maps (partial continuous functions with closed
domains, coded on finite trees).  Her batch at round n must end-extend the
previous batch entrywise and every nonempty entry must be in height-n form:
terminal nodes carry images of length exactly n.

The demo target function counts ones: g(x) = 1^{#ones(x)} 0^ω.  It is Baire
class one but not piecewise continuous, so no legal Eve can chase it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .automata import TreeAutomaton
from .engine import GameScheme, Play
from .words import ClopenSet, Word, check_word, shortlex_key


class IncompatibleUnion(Exception):
    def __init__(self, index: int, node: Word):
        super().__init__(f"conflicting images for map {index} at node {node!r}")
        self.index = index
        self.node = node


@dataclass(frozen=True)
class MapViolation:
    node: Word
    clause: str
    detail: str

    def __str__(self) -> str:
        return f"{self.clause} at {self.node!r}: {self.detail}"


@dataclass(frozen=True)
class MonotoneMap:
    """Finite monotone map on binary words; ``entries`` sorted by node."""

    entries: tuple[tuple[Word, Word], ...]
    _images: dict = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_images", dict(self.entries))

    @staticmethod
    def from_dict(images: dict[Word, Word]) -> "MonotoneMap":
        items = tuple(sorted(images.items(), key=lambda kv: shortlex_key(kv[0])))
        return MonotoneMap(items)

    @staticmethod
    def empty() -> "MonotoneMap":
        return _EMPTY_MAP

    def is_empty(self) -> bool:
        return not self.entries

    @property
    def nodes(self):
        return self._images.keys()

    def image(self, node: Word) -> Word:
        return self._images[node]

    def has_node(self, node: Word) -> bool:
        return node in self._images

    def terminals(self) -> list[Word]:
        return [u for u in self._images
                if u + "0" not in self._images and u + "1" not in self._images]

    def validate(self, height: int | None = None) -> MapViolation | None:
        """Monotonicity, prefix-closed node tree, and height form when given."""
        for node in self._images:
            check_word(node)
            check_word(self._images[node])
            if node:
                parent = node[:-1]
                if parent not in self._images:
                    return MapViolation(node, "tree", "node tree is not prefix-closed")
                if not self._images[node].startswith(self._images[parent]):
                    return MapViolation(node, "monotone",
                                        "image does not extend the parent image")
        if height is not None and not self.is_empty():
            for t in self.terminals():
                if len(self._images[t]) != height:
                    return MapViolation(t, "height",
                                        f"terminal image length {len(self._images[t])} != {height}")
        return None

    def extends(self, other: "MonotoneMap") -> bool:
        """End-extension: same decided part, new nodes only below old terminals."""
        if other.is_empty():
            return True
        old_terminals = set(other.terminals())
        for node, img in other.entries:
            if not self.has_node(node) or self.image(node) != img:
                return False
        for node in self._images:
            if node in other._images:
                continue
            parent = node[:-1] if node else None
            if parent is not None and parent in other._images and parent not in old_terminals:
                return False
            if node == "":
                return False
        return True

    def truncate(self, height: int) -> "MonotoneMap":
        """The height-``height`` stage of this map: cut below the first image
        of length ``height`` on each branch.

        Image values are never rewritten (stages must end-extend each other),
        so the map must be tight: image length grows by at most one per edge
        and dead ends only occur at full image depth.  Raises otherwise.
        """
        if self.is_empty():
            return self
        keep: dict[Word, Word] = {}
        for node in sorted(self._images, key=shortlex_key):
            if node:
                parent = node[:-1]
                if parent not in keep or len(keep[parent]) >= height:
                    continue
            keep[node] = self._images[node]
        trunc = MonotoneMap.from_dict(keep)
        for t in trunc.terminals():
            if len(trunc.image(t)) != height:
                raise ValueError(
                    f"map is not tight enough for a height-{height} stage (node {t!r})")
        return trunc

    def restrict_comparable(self, word: Word) -> "MonotoneMap":
        """Restriction to nodes comparable with ``word`` (the played cylinder)."""
        keep = {u: v for u, v in self._images.items()
                if u.startswith(word) or word.startswith(u)}
        return MonotoneMap.from_dict(keep)

    def to_json(self) -> list[dict]:
        return [{"node": u, "image": v} for u, v in self.entries]

    @staticmethod
    def from_json(data: list[dict]) -> "MonotoneMap":
        return MonotoneMap.from_dict({d["node"]: d["image"] for d in data})


_EMPTY_MAP = MonotoneMap(())


def monotone_validate(m: MonotoneMap, height: int) -> MapViolation | None:
    return m.validate(height)


def eval_partial(m: MonotoneMap, x: Word) -> tuple[Word, str]:
    """Image of the deepest matched node, with inside-so-far/outside status.

    A point leaves the coded domain only when it exits the node tree at an
    internal node; stopping at a terminal leaves the membership open, since
    later rounds may extend the tree there.
    """
    if m.is_empty():
        return "", "outside"
    deepest = ""
    for i in range(1, len(x) + 1):
        if m.has_node(x[:i]):
            deepest = x[:i]
        else:
            is_terminal = not (m.has_node(deepest + "0") or m.has_node(deepest + "1"))
            return m.image(deepest), "inside-so-far" if is_terminal else "outside"
    return m.image(deepest), "inside-so-far"


def validate_eve_move(n: int, prev: Sequence[MonotoneMap],
                      nxt: Sequence[MonotoneMap]) -> str | None:
    """The three batch clauses: extension, height form, no vanishing entries."""
    for i, p in enumerate(prev):
        if not p.is_empty() and (i >= len(nxt) or nxt[i].is_empty()):
            return f"entry {i} vanished"
    for i, m in enumerate(nxt):
        p = prev[i] if i < len(prev) else MonotoneMap.empty()
        if not m.extends(p):
            return f"entry {i} does not end-extend the previous map"
        if not m.is_empty():
            violation = m.validate(n)
            if violation is not None:
                return f"entry {i}: {violation}"
    return None


def adam_word(play: Play) -> Word:
    for move in reversed(play):
        if isinstance(move, str):
            return move
    return ""


def last_maps(play: Play) -> tuple[MonotoneMap, ...]:
    for move in reversed(play):
        if isinstance(move, tuple):
            return move
    return ()


def validate_move(play: Play, move) -> str | None:
    n = len(play) // 2 + 1
    if len(play) % 2 == 0:
        prev = adam_word(play)
        if not isinstance(move, str) or any(c not in "01" for c in move):
            return "move must be a binary word"
        if len(move) != n or not move.startswith(prev):
            return f"word must extend {prev!r} to length {n}"
        return None
    if not (isinstance(move, tuple) and all(isinstance(m, MonotoneMap) for m in move)):
        return "move must be a tuple of monotone maps"
    return validate_eve_move(n, last_maps(play), move)


def scheme() -> GameScheme:
    return GameScheme(validate_move)


def eve_synthesize(decomposition: Sequence[MonotoneMap]) -> Callable[[Play], tuple[MonotoneMap, ...]]:
    """Rewrite the decomposition: entry i appears from round i+1 as its height-n part."""
    for i, m in enumerate(decomposition):
        violation = m.validate()
        if violation is not None:
            raise ValueError(f"decomposition entry {i}: {violation}")

    def respond(play: Play) -> tuple[MonotoneMap, ...]:
        n = len(play) // 2 + 1
        return tuple(
            decomposition[i].truncate(n) if i < n else MonotoneMap.empty()
            for i in range(len(decomposition))
        )

    return respond


def cover_extract(eve, depth: int) -> list[MonotoneMap]:
    """Union, per map index, of Eve's final maps cut below Adam's moves.

    Enumerates all straight-line plays of the 2^depth Adam words; unions of
    restrictions must agree node by node, otherwise the strategy was
    incoherent and IncompatibleUnion reports the clash.
    """
    from .engine import as_responder

    eve_r = as_responder(eve)
    unions: list[dict[Word, Word]] = []
    for sigma_bits in range(2 ** depth):
        sigma = format(sigma_bits, f"0{depth}b") if depth else ""
        play: Play = ()
        maps: tuple[MonotoneMap, ...] = ()
        for n in range(1, depth + 1):
            play = play + (sigma[:n],)
            violation = validate_move(play[:-1], sigma[:n])
            if violation is not None:
                raise ValueError(violation)
            maps = eve_r(play)
            violation = validate_move(play, maps)
            if violation is not None:
                raise ValueError(f"illegal Eve move: {violation}")
            play = play + (maps,)
        while len(unions) < len(maps):
            unions.append({})
        for k, m in enumerate(maps):
            piece = m.restrict_comparable(sigma)
            for node, img in piece.entries:
                if node in unions[k] and unions[k][node] != img:
                    raise IncompatibleUnion(k, node)
                unions[k][node] = img
    out = []
    for k, images in enumerate(unions):
        m = MonotoneMap.from_dict(images)
        violation = m.validate()
        if violation is not None:
            raise IncompatibleUnion(k, violation.node)
        out.append(m)
    while out and out[-1].is_empty():
        out.pop()
    return out


@dataclass(frozen=True)
class FunctionOracle:
    """Pointwise evaluator: input prefix -> longest determined output prefix."""

    evaluator: Callable[[Word], Word]
    name: str = "oracle"

    def determined(self, prefix: Word) -> Word:
        return self.evaluator(prefix)


def count_ones_oracle() -> FunctionOracle:
    """g(x) = 1^{#ones(x)} 0^ω: each seen one forces one more leading 1."""
    return FunctionOracle(lambda w: "1" * w.count("1"), name="count-ones")


def identity_oracle() -> FunctionOracle:
    return FunctionOracle(lambda w: w, name="identity")


@dataclass(frozen=True)
class PcStatus:
    kind: str                      # EVE_CERT_NOT_IN_B | EVE_AGREEING | ADAM_PENDING
    piece: int | None = None
    depth: int | None = None

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.piece is not None:
            out["piece"] = self.piece
            out["depth"] = self.depth
        return out


def payoff_status(play: Play, target: TreeAutomaton, g: FunctionOracle) -> PcStatus:
    """Finite-depth verdict for "x not in B, or some published piece matches g at x"."""
    if not play:
        return PcStatus("ADAM_PENDING")
    xi = adam_word(play)
    if not target.word_in_tree(xi):
        return PcStatus("EVE_CERT_NOT_IN_B")
    determined = g.determined(xi)
    for i, m in enumerate(last_maps(play)):
        if m.is_empty():
            continue
        img, status = eval_partial(m, xi)
        if status != "inside-so-far":
            continue
        overlap = min(len(img), len(determined))
        if img[:overlap] == determined[:overlap]:
            return PcStatus("EVE_AGREEING", piece=i, depth=overlap)
    return PcStatus("ADAM_PENDING")


# -- fixture codes -----------------------------------------------------------


def identity_code(height: int) -> MonotoneMap:
    """The identity on Cantor space as a height-``height`` monotone map."""
    images: dict[Word, Word] = {}
    frontier = [""]
    images[""] = ""
    for _ in range(height):
        nxt = []
        for w in frontier:
            for b in ("0", "1"):
                images[w + b] = w + b
                nxt.append(w + b)
        frontier = nxt
    return MonotoneMap.from_dict(images)


def code_on_domain(domain: TreeAutomaton, word_fn: Callable[[Word], Word],
                   height: int, max_depth: int = 64) -> MonotoneMap:
    """Tight monotone code of a function on a closed regular domain.

    Grows each domain branch until the assigned image reaches the height;
    image lengths are paced to grow at most one bit per edge so every stage
    truncation exists.  ``word_fn`` must be monotone along extensions and
    determine at least ``height`` bits within ``max_depth`` levels on every
    branch of the domain.
    """
    if domain.is_empty():
        return MonotoneMap.empty()
    images: dict[Word, Word] = {}
    root_out = word_fn("")
    images[""] = root_out[: min(1, len(root_out))]
    stack: list[tuple[Word, int]] = [("", domain.start)]
    while stack:
        w, s = stack.pop()
        if len(images[w]) >= height:
            continue
        if len(w) >= max_depth:
            raise ValueError(f"no height-{height} image within depth {max_depth} at {w!r}")
        for b in (0, 1):
            c = domain.transitions[s][b]
            if c is None:
                continue
            u = w + str(b)
            out = word_fn(u)
            images[u] = out[: min(len(images[w]) + 1, len(out))]
            stack.append((u, c))
    m = MonotoneMap.from_dict(images)
    violation = m.validate(height)
    if violation is not None:
        raise ValueError(f"word_fn does not give a height-{height} code: {violation}")
    return m


# -- the Baire-copy embedding --------------------------------------------------


@dataclass(frozen=True)
class BaireTuplePrefix:
    """Prefix of a point of Baire space: complete entries plus a partial block."""

    entries: tuple[int, ...] = ()
    pending_zeros: int = 0

    def __post_init__(self):
        if any(n < 0 for n in self.entries) or self.pending_zeros < 0:
            raise ValueError("tuple entries must be nonnegative")


@dataclass(frozen=True)
class TupleCylinder:
    """Constraints "leading entries equal ``fixed``, next entry >= bound"."""

    fixed: tuple[int, ...]
    next_at_least: int


def baire_embed(t: BaireTuplePrefix) -> Word:
    """b(n_0, n_1, ...) = 0^{n_0} 1 0^{n_1} 1 ...; prefix-faithful."""
    return "".join("0" * n + "1" for n in t.entries) + "0" * t.pending_zeros


def decode_blocks(w: Word) -> BaireTuplePrefix:
    check_word(w)
    entries = [len(b) for b in w.split("1")]
    return BaireTuplePrefix(tuple(entries[:-1]), entries[-1])


def baire_preimage(u: ClopenSet) -> list[TupleCylinder]:
    """The embedded preimage of a clopen set as leading-entry constraints."""
    out = []
    for g in sorted(u.generators, key=shortlex_key):
        p = decode_blocks(g)
        out.append(TupleCylinder(p.entries, p.pending_zeros))
    return out
