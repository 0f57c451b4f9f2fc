import pytest

from fusiongames.automata import COMB, FULL, HALF, ZERO
from fusiongames.gdelta import (
    ClosedCode, SouslinScheme, closed_code_validate, closure_approx,
    code_of_automaton, constant_scheme, gdelta_from_removal, meets_open,
    scheme_validate,
)
from fusiongames.words import ClopenSet


class TestClosedCode:
    def test_code_of_half_ok(self):
        code = ClosedCode(lambda w: w.startswith("1"))
        assert closed_code_validate(code, 5) is None

    def test_unsaturated(self):
        code = ClosedCode(lambda w: w in ("10", "11") or w.startswith(("10", "11")))
        violation = closed_code_validate(code, 4)
        assert violation is not None and violation.where == "1"
        assert violation.clause == "saturation"

    def test_empty_family(self):
        assert closed_code_validate(ClosedCode(lambda w: False), 4) is None

    def test_automaton_codes_saturated(self, zoo):
        for t in zoo.values():
            assert closed_code_validate(code_of_automaton(t), 6) is None

    def test_depth_precondition(self):
        with pytest.raises(ValueError):
            closed_code_validate(ClosedCode(lambda w: False), 0)


def spine_scheme(width=4):
    """U_node = [0^depth] along the 0-spine, empty elsewhere."""

    def expand(node):
        if any(d != 0 for d in node):
            return frozenset()
        return frozenset({"0" * len(node)})

    return SouslinScheme(expand, width=width)


class TestSchemeValidate:
    def test_spine_ok(self):
        assert scheme_validate(spine_scheme(), 4) is None

    def test_short_generator_violates_diameter(self):
        def expand(node):
            return frozenset({"0" * max(0, len(node) - 1)}) if all(d == 0 for d in node) else frozenset()

        violation = scheme_validate(SouslinScheme(expand), 3)
        assert violation is not None and violation.clause == "diameter"

    def test_escaping_child_violates_nesting(self):
        def expand(node):
            if any(d != 0 for d in node):
                return frozenset()
            return frozenset({"1" * len(node)}) if len(node) != 1 else frozenset({"0"})

        violation = scheme_validate(SouslinScheme(expand), 2)
        assert violation is not None and violation.clause == "nesting"

    def test_dead_node_violates_productivity(self):
        def expand(node):
            return frozenset({"0" * len(node)}) if len(node) == 0 else frozenset()

        violation = scheme_validate(SouslinScheme(expand), 1)
        assert violation is not None and violation.clause == "productivity"
        assert violation.where == ""


class TestMeetsOpen:
    def test_one_point_scheme(self):
        def expand(node):
            if any(d != 0 for d in node):
                return frozenset()
            return frozenset({"1" * len(node)})

        ones = SouslinScheme(expand)
        assert not meets_open(ones, ClopenSet.from_words(["0"]), 5).meets
        answer = meets_open(ones, ClopenSet.from_words(["1"]), 5)
        assert answer.meets and answer.witness == (0,)
        assert not meets_open(ones, ClopenSet.empty(), 5).meets

    def test_monotone_in_depth_and_open_set(self):
        s = spine_scheme()
        u_small = ClopenSet.from_words(["00"])
        u_big = ClopenSet.from_words(["0"])
        for depth in range(1, 5):
            if meets_open(s, u_small, depth).meets:
                assert meets_open(s, u_small, depth + 1).meets
                assert meets_open(s, u_big, depth).meets

    def test_witness_is_inside(self):
        s = spine_scheme()
        answer = meets_open(s, ClopenSet.from_words(["00"]), 4)
        assert answer.meets
        val = ClopenSet.from_words(s.value(answer.witness))
        assert not val.is_empty()
        assert val.is_subset(ClopenSet.from_words(["00"]))


class TestClosureApprox:
    def test_constant_clopen(self):
        s = constant_scheme(ClopenSet.from_words(["0"]))
        assert closure_approx(s, 4) == ClopenSet.from_words(["0"])

    def test_one_point(self):
        def expand(node):
            return frozenset({"1" * len(node)}) if all(d == 0 for d in node) else frozenset()

        assert closure_approx(SouslinScheme(expand), 3) == ClopenSet.from_words(["111"])

    def test_breadth_first_dense_scheme_covers_at_level_one(self):
        # level-one nodes enumerate [0], [1], ...: the union is everything
        def expand(node):
            if not node:
                return frozenset({""})
            first = node[0]
            word = format(first, "02b")[:2]
            rest = "0" * (len(node) - 1)
            return frozenset({word + rest})

        s = SouslinScheme(expand, width=4)
        assert closure_approx(s, 1) == ClopenSet.full()

    def test_decreasing(self):
        s = constant_scheme(ClopenSet.from_words(["01", "1"]))
        for depth in range(1, 5):
            assert closure_approx(s, depth + 1).is_subset(closure_approx(s, depth))


class TestRemoval:
    def test_full_minus_zero_cylinder(self):
        s = gdelta_from_removal(FULL, ["0"])
        assert scheme_validate(s, 4) is None
        assert closure_approx(s, 3) == ClopenSet.from_words(["1"])

    def test_half_no_removal(self):
        s = gdelta_from_removal(HALF, [])
        assert scheme_validate(s, 4) is None
        assert closure_approx(s, 4) == ClopenSet.from_words(["0"])

    def test_comb_spine_removal(self):
        # removing the comb teeth below FULL leaves ever-thinner closures
        removed = ["0", "10", "110"]
        s = gdelta_from_removal(FULL, removed)
        assert scheme_validate(s, 4) is None
        closure = closure_approx(s, 2)
        for w in removed:
            assert not closure.intersect(ClopenSet.from_words([w])).generators

    def test_everything_removed(self):
        s = gdelta_from_removal(HALF, ["0"])
        assert scheme_validate(s, 3) is None
        assert closure_approx(s, 2).is_empty()

    def test_rejects_off_tree_word(self):
        with pytest.raises(ValueError):
            gdelta_from_removal(HALF, ["1"])

    def test_roundtrip_validates(self, corpus50):
        for t in corpus50[:10]:
            words = [w for w in t.level_words(3)[:2]]
            s = gdelta_from_removal(t, words)
            assert scheme_validate(s, 3) is None

    def test_gdelta_points_survive(self):
        # branches of COMB other than the removed tooth remain in every level
        s = gdelta_from_removal(COMB, ["01"])
        level2 = closure_approx(s, 2)
        assert level2.contains_word("0000")
        assert not level2.meets_word("01")
