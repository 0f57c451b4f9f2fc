"""Seeded generators of random automata and labeled trees for tests and scripts."""

from __future__ import annotations

import random

from .automata import TreeAutomaton

DEFAULT_SEED = 20260811


def random_automaton(rng: random.Random, max_states: int) -> TreeAutomaton:
    """A random nonempty pruned automaton with at most ``max_states`` states."""
    while True:
        n = rng.randint(1, max_states)
        table: list[list[int | None]] = []
        for _ in range(n):
            row: list[int | None] = [None, None]
            for b in (0, 1):
                if rng.random() < 0.7:
                    row[b] = rng.randrange(n)
            table.append(row)
        t = TreeAutomaton.make(table, 0)
        if not t.is_empty():
            return t


def automaton_corpus(count: int, max_states: int, seed: int = DEFAULT_SEED) -> list[TreeAutomaton]:
    rng = random.Random(seed)
    return [random_automaton(rng, max_states) for _ in range(count)]


def random_labeled_table(rng: random.Random, n_states: int, labels: tuple[str, ...]):
    """Raw (state, bit, label) -> state edge dict; may present an empty tree."""
    edges = {}
    for s in range(n_states):
        for b in (0, 1):
            for y in labels:
                if rng.random() < 0.45:
                    edges[(s, b, y)] = rng.randrange(n_states)
    return edges
