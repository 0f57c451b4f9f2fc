import itertools

import pytest

from fusiongames.engine import (
    ADAM, EVE, ConditionNotMet, GameNode, GameScheme, IllegalMove, IllegalPrefix,
    StrategyTree, check_front, extract_front, materialize, play_winner,
    relativize, simulate, solve_bounded, to_move,
)


def counting_scheme(limit=10):
    """Toy scheme: moves are integers 0..limit, any move always legal."""
    return GameScheme(
        validate=lambda play, move: None if isinstance(move, int) and 0 <= move <= limit else "out of range",
        moves=lambda play: list(range(limit + 1)),
    )


def bit_scheme():
    return GameScheme(
        validate=lambda play, move: None if move in (0, 1) else "bit expected",
        moves=lambda play: [0, 1],
    )


class TestSimulate:
    def test_lengths(self):
        scheme = counting_scheme()
        play = simulate(scheme, lambda p: 1, lambda p: 2, 3)
        assert play == (1, 2, 1, 2, 1, 2)
        assert simulate(scheme, lambda p: 0, lambda p: 0, 0) == ()

    def test_illegal_move_reported(self):
        scheme = counting_scheme()

        def eve(play):
            return 99 if len(play) >= 3 else 0

        with pytest.raises(IllegalMove) as err:
            simulate(scheme, lambda p: 1, eve, 3)
        assert err.value.player == EVE and err.value.round_no == 2

    def test_parity(self):
        assert to_move(()) == ADAM
        assert to_move((1,)) == EVE
        assert to_move((1, 2)) == ADAM


class TestRelativize:
    def test_empty_prefix(self):
        scheme = counting_scheme()
        assert relativize(scheme, ()).validate((), 3) is None

    def test_rule_shift(self):
        # Adam must echo the round number in this scheme
        def validate(play, move):
            n = len(play) // 2 + 1
            if len(play) % 2 == 0 and move != n:
                return f"adam must play {n}"
            return None

        scheme = GameScheme(validate)
        rel = relativize(scheme, (1, 0))
        assert rel.validate((), 2) is None
        assert rel.validate((), 1) == "adam must play 2"

    def test_odd_prefix_rejected(self):
        with pytest.raises(IllegalPrefix):
            relativize(counting_scheme(), (1,))

    def test_illegal_prefix_rejected(self):
        with pytest.raises(IllegalPrefix):
            relativize(counting_scheme(), (99, 0))

    def test_composition(self):
        scheme = counting_scheme(3)
        p, q = (1, 2), (3, 0)
        lhs = relativize(relativize(scheme, p), q)
        rhs = relativize(scheme, p + q)
        for play in itertools.product(range(4), repeat=3):
            for move in range(4):
                assert lhs.validate(play, move) == rhs.validate(play, move)


class TestSolver:
    def test_single_leaf(self):
        winner, _ = solve_bounded(GameNode.leaf(EVE))
        assert winner == EVE

    def test_adam_choice(self):
        node = GameNode(player=ADAM, children={
            0: GameNode.leaf(EVE), 1: GameNode.leaf(ADAM)})
        winner, strat = solve_bounded(node)
        assert winner == ADAM
        assert list(strat.children) == [1]

    def test_eve_choice_all_bad(self):
        node = GameNode(player=EVE, children={
            0: GameNode.leaf(ADAM), 1: GameNode.leaf(ADAM)})
        winner, _ = solve_bounded(node)
        assert winner == ADAM

    @staticmethod
    def random_tree(rng, depth, player=ADAM):
        import random
        if depth == 0 or rng.random() < 0.2:
            return GameNode.leaf(rng.choice([ADAM, EVE]))
        other = EVE if player == ADAM else ADAM
        return GameNode(player=player, children={
            m: TestSolver.random_tree(rng, depth - 1, other)
            for m in range(rng.randint(1, 3))
        })

    def test_winner_strategy_beats_all_opposition(self, rng):
        for _ in range(30):
            tree = self.random_tree(rng, 5)
            winner, strat = solve_bounded(tree)

            def walk(tnode, snode, play):
                if not tnode.children:
                    assert tnode.winner == winner, play
                    return
                if tnode.player == winner:
                    move = next(iter(snode.children))
                    walk(tnode.children[move], snode.children[move], play + (move,))
                else:
                    for move, child in tnode.children.items():
                        walk(child, snode.children[move], play + (move,))

            walk(tree, strat, ())

    def test_play_winner(self):
        node = GameNode(player=ADAM, children={0: GameNode.leaf(EVE)})
        assert play_winner(node, (0,)) == EVE


def full_binary_tree(depth):
    node = StrategyTree(ADAM)
    if depth:
        node.children = {b: full_binary_tree(depth - 1) for b in (0, 1)}
    return node


class TestFronts:
    def test_check_front_examples(self):
        tree = full_binary_tree(4)
        assert check_front(tree, {(0,), (1,)})
        assert not check_front(tree, {(0,)})            # misses branches through 1
        assert check_front(tree, {()})
        assert not check_front(tree, {(), (0,)})        # not an antichain

    def test_extract_front_minimal(self):
        tree = full_binary_tree(6)
        front = extract_front(tree, lambda play: len(play) >= 2)
        assert front == {(a, b) for a in (0, 1) for b in (0, 1)}
        assert check_front(tree, front)

    def test_extract_front_mixed_depths(self):
        tree = full_binary_tree(4)
        # monotone: satisfied once a one has been played, or at the horizon
        front = extract_front(tree, lambda play: sum(play) >= 1 or len(play) >= 4)
        assert (0, 1) in front and (1, 0) in front and (1, 1) in front
        assert (0, 0, 0, 0) in front and (0, 0, 0, 1) in front
        assert check_front(tree, front)
        assert all(len(p) % 2 == 0 for p in front)

    def test_extract_front_root(self):
        tree = full_binary_tree(2)
        assert extract_front(tree, lambda play: True) == {()}

    def test_condition_not_met(self):
        tree = full_binary_tree(4)
        with pytest.raises(ConditionNotMet):
            extract_front(tree, lambda play: False)


class TestMaterialize:
    def test_owner_single_child(self):
        scheme = bit_scheme()
        tree = materialize(scheme, ADAM, lambda play: 0, scheme.moves, 4)
        for play, node in tree.nodes():
            if node.children:
                if to_move(play) == ADAM:
                    assert list(node.children) == [0]
                else:
                    assert sorted(node.children) == [0, 1]

    def test_respond_walks_tree(self):
        scheme = bit_scheme()
        tree = materialize(scheme, ADAM, lambda play: len(play) % 2, scheme.moves, 4)
        assert tree.respond(()) == 0
        assert tree.respond((0, 1)) == 0

    def test_illegal_strategy_caught(self):
        scheme = bit_scheme()
        with pytest.raises(IllegalMove):
            materialize(scheme, ADAM, lambda play: 7, scheme.moves, 2)
