import itertools
from fractions import Fraction

import pytest

from fusiongames.automata import AV11, COMB, FULL, HALF, ZERO, branches_in_clopen
from fusiongames.engine import ADAM, EVE, IllegalMove, simulate, solve_bounded
from fusiongames.nullgame import (
    IllegalStrategy, adam_word, eve_synthesize, extract_witness, minimal_cover,
    payoff_status, scheme, straight_line_play, surrogate_tree, validate_eve,
    validate_move,
)
from fusiongames.words import ClopenSet


class TestValidation:
    def test_eve_measure_bound_is_strict(self):
        # relative measure exactly 1/2 at round 2 is already illegal
        c = ClopenSet.from_words(["000"])
        assert validate_eve(2, "00", c) is not None
        assert validate_eve(2, "00", ClopenSet.from_words(["0000"])) is None

    def test_empty_always_fine(self):
        assert validate_eve(3, "010", ClopenSet.empty()) is None

    def test_containment_clause(self):
        assert "inside" in validate_eve(2, "00", ClopenSet.from_words(["10000"]))

    def test_adam_extension(self):
        assert validate_move((), "1") is None
        assert validate_move(("0", ClopenSet.empty()), "10") is not None
        assert validate_move(("0", ClopenSet.empty()), "01") is None
        assert validate_move((), "11") is not None


class TestSynthesis:
    def test_cover_zero_round2(self):
        eve = eve_synthesize([ZERO])
        c = eve(("0", ClopenSet.empty(), "00"))
        assert c.sorted_words() == ["0000"]
        assert c.measure(base="00") == Fraction(1, 4)

    def test_empty_restriction(self):
        eve = eve_synthesize([ZERO])
        assert eve(("0", ClopenSet.empty(), "01")).is_empty()

    def test_cover_av11_round1(self):
        eve = eve_synthesize([AV11])
        assert eve(("1",)).sorted_words() == ["10"]

    def test_rejects_positive_cover(self):
        with pytest.raises(ValueError):
            eve_synthesize([HALF])

    def test_no_covers(self):
        eve = eve_synthesize([])
        assert eve(("0",)).is_empty()

    @pytest.mark.parametrize("covers", [[ZERO], [AV11], [COMB], [ZERO, AV11]])
    def test_exhaustive_soundness_depth8(self, covers):
        # the synthesized answer depends only on (round, Adam word), so
        # checking every (n, sigma) pair covers every depth-8 Adam play
        eve = eve_synthesize(covers)
        unions = []
        acc = None
        for c in covers:
            acc = c if acc is None else acc.combine(c, "union")
            unions.append(acc)
        for n in range(1, 9):
            d_n = unions[min(n, len(unions)) - 1]
            for bits in itertools.product("01", repeat=n):
                sigma = "".join(bits)
                play = _straight_prefix(eve, sigma)
                answer = eve(play + (sigma,))
                assert validate_move(play + (sigma,), answer) is None
                trace = d_n.restrict(sigma)
                if not trace.is_empty():
                    assert branches_in_clopen(trace, answer), (covers, sigma)

    def test_deterministic(self):
        a = eve_synthesize([ZERO, AV11])
        b = eve_synthesize([ZERO, AV11])
        play = _straight_prefix(a, "0101")
        assert a(play + ("0101",)) == b(play + ("0101",))


def _straight_prefix(eve, sigma):
    play = ()
    for n in range(1, len(sigma)):
        play = play + (sigma[:n],)
        play = play + (eve(play),)
    return play


class TestWitness:
    def test_zero_depth2(self):
        es, tails = extract_witness(eve_synthesize([ZERO]), 2)
        assert es[0].sorted_words() == ["00"]
        assert es[1].sorted_words() == ["0000"]
        assert es[1].measure() == Fraction(1, 16)

    def test_allempty(self):
        es, tails = extract_witness(lambda play: ClopenSet.empty(), 4)
        assert all(e.is_empty() for e in es)
        assert all(t.is_empty() for t in tails)

    def test_av11_depth1(self):
        es, _ = extract_witness(eve_synthesize([AV11]), 1)
        assert es[0].measure() <= 1

    def test_measure_bound_exact(self):
        es, _ = extract_witness(eve_synthesize([ZERO, AV11]), 8)
        for n, e in enumerate(es, start=1):
            assert e.measure() <= Fraction(1, n)
            assert e.measure() < Fraction(1, n)   # corrected threshold is strict

    def test_tails_nested(self):
        es, tails = extract_witness(eve_synthesize([AV11]), 6)
        for n in range(1, 6):
            assert tails[n].is_subset(es[n])

    def test_illegal_strategy_caught(self):
        def cheat(play):
            return ClopenSet.from_words([adam_word(play)])  # relative measure 1

        with pytest.raises(IllegalStrategy):
            extract_witness(cheat, 2)


class TestPayoff:
    def test_escape_certificate(self):
        assert payoff_status(("1", ClopenSet.empty()), ZERO).kind == "EVE_CERT_NOT_IN_A"

    def test_tracking_on_spine(self):
        eve = eve_synthesize([ZERO])
        play = straight_line_play(eve, "0" * 6)
        status = payoff_status(play, ZERO)
        assert status.kind == "EVE_TRACKING" and status.since == 1

    def test_pending(self):
        play = ("0", ClopenSet.empty(), "00", ClopenSet.empty())
        assert payoff_status(play, FULL).kind == "ADAM_PENDING"

    def test_empty_play(self):
        assert payoff_status((), FULL).kind == "ADAM_PENDING"


class TestSimulation:
    def test_synthesized_eve_is_legal_in_simulation(self):
        eve = eve_synthesize([ZERO, COMB])

        def adam(play):
            return adam_word(play) + "0"

        play = simulate(scheme(), adam, eve, 10)
        assert len(play) == 20

    def test_illegal_eve_raises(self):
        def bad_eve(play):
            return ClopenSet.from_words([adam_word(play)])

        with pytest.raises(IllegalMove) as err:
            simulate(scheme(), lambda p: adam_word(p) + "0", bad_eve, 3)
        assert err.value.player == EVE


class TestSolverAgreement:
    @pytest.mark.parametrize("target,expected", [
        (ZERO, EVE), (COMB, EVE), (AV11, EVE), (HALF, ADAM)])
    def test_surrogate_winner(self, target, expected):
        winner, _ = solve_bounded(surrogate_tree(target, rounds=3, gen_cap=9))
        assert winner == expected

    def test_minimal_cover_is_minimal(self):
        cover = minimal_cover(COMB, "000", 6)
        trace = COMB.restrict("000")
        assert branches_in_clopen(trace, cover)
        # dropping any generator loses the trace
        for g in cover.generators:
            smaller = ClopenSet.from_words(cover.generators - {g})
            assert not branches_in_clopen(trace, smaller)

    def test_winner_strategy_wins_exhaustively(self):
        tree = surrogate_tree(ZERO, rounds=3, gen_cap=9)
        winner, strat = solve_bounded(tree)
        assert winner == EVE

        def walk(tnode, snode):
            if not tnode.children:
                assert tnode.winner == EVE
                return
            if tnode.player == EVE:
                move = next(iter(snode.children))
                walk(tnode.children[move], snode.children[move])
            else:
                for move, child in tnode.children.items():
                    walk(child, snode.children[move])

        walk(tree, strat)
