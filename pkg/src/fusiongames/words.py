"""Finite binary words, cylinders and exact clopen-set algebra on Cantor space.

Words are plain ``str`` over the alphabet ``{"0", "1"}``.  A clopen set is a
finite union of cylinders ``[w]`` kept in a canonical form: the generators are
an antichain (no generator is a prefix of another) and no two sibling words
``w0``, ``w1`` are both present.  Canonical form makes equality syntactic.

Measures are exact :class:`fractions.Fraction` values; ``measure([w]) ==
2**-len(w)`` under the coin-flip measure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

Word = str

_BITS = ("0", "1")


def check_word(w: Word) -> Word:
    if any(c not in "01" for c in w):
        raise ValueError(f"not a binary word: {w!r}")
    return w


def is_prefix(u: Word, w: Word) -> bool:
    """True iff [w] is contained in [u]."""
    return w.startswith(u)


def comparable(u: Word, w: Word) -> bool:
    """True iff the cylinders [u] and [w] intersect."""
    return u.startswith(w) or w.startswith(u)


def sibling(w: Word) -> Word:
    if not w:
        raise ValueError("the root has no sibling")
    return w[:-1] + ("1" if w[-1] == "0" else "0")


def cylinder_measure(w: Word) -> Fraction:
    return Fraction(1, 2 ** len(w))


def shortlex_key(w: Word) -> tuple[int, str]:
    return (len(w), w)


def _antichain(words: Iterable[Word]) -> set[Word]:
    kept: set[Word] = set()
    for w in sorted(set(words), key=len):
        if not any(w.startswith(k) for k in kept):
            kept.add(w)
    return kept


def _merge_siblings(words: set[Word]) -> set[Word]:
    # Merging w0, w1 -> w preserves the antichain property, so iterating
    # plain sibling merges reaches the canonical form.
    out = set(words)
    stack = sorted(out, key=len, reverse=True)
    while stack:
        w = stack.pop()
        if not w or w not in out:
            continue
        sib = sibling(w)
        if sib in out:
            out.discard(w)
            out.discard(sib)
            parent = w[:-1]
            out.add(parent)
            stack.append(parent)
    return out


@dataclass(frozen=True)
class ClopenSet:
    """Canonical finite union of cylinders.

    Construct through :meth:`from_words`; the raw constructor trusts its
    argument to be canonical already.
    """

    generators: frozenset[Word]

    @staticmethod
    def from_words(words: Iterable[Word]) -> "ClopenSet":
        ws = [check_word(w) for w in words]
        return ClopenSet(frozenset(_merge_siblings(_antichain(ws))))

    @staticmethod
    def empty() -> "ClopenSet":
        return _EMPTY

    @staticmethod
    def full() -> "ClopenSet":
        return _FULL

    @staticmethod
    def cylinder(w: Word) -> "ClopenSet":
        return ClopenSet(frozenset({check_word(w)}))

    def is_empty(self) -> bool:
        return not self.generators

    def sorted_words(self) -> list[Word]:
        return sorted(self.generators, key=shortlex_key)

    def contains_word(self, w: Word) -> bool:
        """True iff the cylinder [w] is contained in this set."""
        return any(w.startswith(g) for g in self.generators)

    def meets_word(self, w: Word) -> bool:
        """True iff the cylinder [w] intersects this set."""
        return any(comparable(g, w) for g in self.generators)

    def union(self, other: "ClopenSet") -> "ClopenSet":
        return ClopenSet.from_words(self.generators | other.generators)

    def intersect(self, other: "ClopenSet") -> "ClopenSet":
        words = []
        for u in self.generators:
            for v in other.generators:
                if u.startswith(v):
                    words.append(u)
                elif v.startswith(u):
                    words.append(v)
        return ClopenSet.from_words(words)

    def complement(self) -> "ClopenSet":
        out: list[Word] = []

        def descend(prefix: Word) -> None:
            if self.contains_word(prefix):
                return
            if not self.meets_word(prefix):
                out.append(prefix)
                return
            descend(prefix + "0")
            descend(prefix + "1")

        descend("")
        return ClopenSet.from_words(out)

    def is_subset(self, other: "ClopenSet") -> bool:
        return self.union(other) == other

    def measure(self, base: Word | None = None) -> Fraction:
        """Exact measure; relative to the cylinder [base] when given."""
        if base is None:
            return sum((cylinder_measure(g) for g in self.generators), Fraction(0))
        check_word(base)
        total = Fraction(0)
        for g in self.generators:
            if g.startswith(base):
                total += cylinder_measure(g)
            elif base.startswith(g):
                total += cylinder_measure(base)
        return total / cylinder_measure(base)

    def to_json(self) -> list[Word]:
        return self.sorted_words()

    @staticmethod
    def from_json(words: list[Word]) -> "ClopenSet":
        return ClopenSet.from_words(words)


_EMPTY = ClopenSet(frozenset())
_FULL = ClopenSet(frozenset({""}))


def clopen_normalize(words: Iterable[Word]) -> ClopenSet:
    return ClopenSet.from_words(words)


def clopen_combine(a: ClopenSet, b: ClopenSet, op: str):
    """Boolean algebra dispatch: union, intersect, complement-of-a, subset-test."""
    if op == "union":
        return a.union(b)
    if op == "intersect":
        return a.intersect(b)
    if op == "complement-of-a":
        return a.complement()
    if op == "subset-test":
        return a.is_subset(b)
    raise ValueError(f"unknown op {op!r}")


def measure(a: ClopenSet, base: Word | None = None) -> Fraction:
    return a.measure(base)
