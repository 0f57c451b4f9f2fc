import random

from fusiongames.automata import AV11, COMB, FULL, HALF, MIX, ZERO, TreeAutomaton
from fusiongames.oracles import (
    CTBL, E_NULL, NWD, dichotomy, kernel, kernel_with_passes, member_closed,
)

ALL_ORACLES = (E_NULL, NWD, CTBL)


class TestMember:
    def test_examples(self):
        assert member_closed(E_NULL, AV11)
        assert not member_closed(NWD, MIX)     # [0] is interior
        assert member_closed(CTBL, ZERO)

    def test_zoo_table(self):
        expected = {
            # name: (E-null, NWD, CTBL)
            "FULL": (False, False, False),
            "ZERO": (True, True, True),
            "HALF": (False, False, False),
            "AV11": (True, True, False),
            "MIX": (False, False, False),
            "COMB": (True, True, True),
        }
        zoo = {"FULL": FULL, "ZERO": ZERO, "HALF": HALF,
               "AV11": AV11, "MIX": MIX, "COMB": COMB}
        for name, (e, nwd, ctbl) in expected.items():
            t = zoo[name]
            assert member_closed(E_NULL, t) == e, name
            assert member_closed(NWD, t) == nwd, name
            assert member_closed(CTBL, t) == ctbl, name

    def test_presentation_independence(self):
        # AV11's branch set with every state duplicated
        bloated = TreeAutomaton.make(
            [(1, 2), (3, 2), (1, None), (3, 4), (1, None)], 0)
        assert bloated.equivalent(AV11)
        for oracle in ALL_ORACLES:
            assert oracle.member(bloated) == oracle.member(AV11)

    def test_hereditary_on_intersections(self, corpus50):
        rng = random.Random(3)
        for _ in range(40):
            small = rng.choice(corpus50)
            big = rng.choice(corpus50)
            sub = small.combine(big, "intersect")
            for oracle in ALL_ORACLES:
                if oracle.member(big):
                    assert oracle.member(sub)


class TestKernel:
    def test_examples(self):
        assert kernel(MIX, E_NULL).equivalent(HALF)
        assert kernel(AV11, E_NULL).is_empty()
        assert kernel(FULL, E_NULL).equivalent(FULL)

    def test_empty_iff_member(self, corpus50, zoo):
        for t in corpus50 + list(zoo.values()):
            for oracle in ALL_ORACLES:
                assert kernel(t, oracle).is_empty() == oracle.member(t)

    def test_idempotent(self, corpus50):
        for t in corpus50[:20]:
            for oracle in ALL_ORACLES:
                k = kernel(t, oracle)
                assert kernel(k, oracle).equivalent(k)

    def test_kernel_is_ideal_perfect(self, corpus50, zoo):
        # every cylinder trace of the kernel is empty or positive
        for t in corpus50[:25] + list(zoo.values()):
            for oracle in ALL_ORACLES:
                k = kernel(t, oracle)
                if k.is_empty():
                    continue
                for i in range(2 ** 6):
                    w = format(i, "06b")
                    piece = k.restrict(w)
                    assert piece.is_empty() or oracle.positive(piece)

    def test_kernel_inside_original(self, corpus50):
        for t in corpus50[:20]:
            k = kernel(t, E_NULL)
            assert k.branches_subset(t)


class TestDichotomy:
    def test_perfect_cases(self):
        r = dichotomy(E_NULL, MIX)
        assert r.verdict == "perfect"
        assert r.kernel.equivalent(HALF)
        r = dichotomy(NWD, FULL)
        assert r.verdict == "perfect"
        assert r.kernel.equivalent(FULL)

    def test_member_cases(self):
        r = dichotomy(CTBL, COMB)
        assert r.verdict == "member"
        assert r.certificate["kind"] == "generator"
        r = dichotomy(NWD, AV11)
        assert r.verdict == "member"
        assert r.certificate["kind"] == "nowhere-dense-pieces"
        assert r.certificate["passes"]

    def test_passes_name_removed_pieces(self):
        _, passes = kernel_with_passes(MIX, E_NULL)
        # the null trace through "1" goes in the first pass
        assert any("1" in p for p in passes)

    def test_json(self):
        data = dichotomy(E_NULL, MIX).to_json()
        assert data["verdict"] == "perfect"
        assert TreeAutomaton.from_json(data["kernel"]).equivalent(HALF)
