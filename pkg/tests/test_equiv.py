import random

import pytest
from hypothesis import given, settings

from autmin.core import (
    BOTTOM,
    BUCHI,
    COBUCHI,
    FINITE,
    PARITY,
    TOP,
    Automaton,
    Lasso,
    restrict_reachable,
    run_lasso,
    view_as,
)
from autmin.equiv import (
    Partition,
    almost_equiv_quotient,
    almost_equivalent,
    buchi_diff_states,
    dfa_difference,
    dfa_equiv,
    omega_diff_nonempty,
    omega_diff_states,
    omega_difference,
    omega_equiv,
    omega_equiv_quotient,
    product,
)
from autmin.errors import InputError, ModeError
from autmin.hardness import NiceGraph, characteristic_dba, characteristic_labels
from autmin.minimise import hopcroft_min

from gen import automata, random_automaton
from oracles import almost_oracle, almost_oracle_classes, moore_classes

AB = ("a", "b")
INF_A = Automaton(AB, ((0, 1), (0, 1)), 0, BUCHI, frozenset({0}))
INF_B = Automaton(AB, ((0, 1), (0, 1)), 0, BUCHI, frozenset({1}))
P2 = NiceGraph(("v0", "v1"), frozenset({("v0", "v1")}), "v0")


def classes(p: Partition) -> set[frozenset[int]]:
    return {frozenset(c) for c in p.classes}


class TestProduct:
    def test_one_state_with_itself(self):
        a = Automaton(AB, ((0, TOP),), 0)
        g = product(a, a)
        assert [p for p in g.pairs if p[0] >= 0] == [(0, 0)]
        assert set(g.pairs) == {(0, 0), (TOP, TOP)}

    def test_cardinality_bound(self):
        a = Automaton(AB, ((1, 0), (0, 1)), 0)
        b = Automaton(AB, ((1, 2), (2, 0), (0, 1)), 0)
        plain = [p for p in product(a, b).pairs if p[0] >= 0 and p[1] >= 0]
        assert len(plain) <= 6

    def test_diagonal(self):
        assert sorted(product(INF_A, INF_A).pairs) == [(0, 0), (1, 1)]

    def test_alphabet_mismatch(self):
        other = Automaton(("a", "c"), (), TOP)
        with pytest.raises(InputError, match="alphabet mismatch"):
            product(INF_A, other)


class TestOmegaDifference:
    def test_empty_left(self):
        bottom = Automaton(AB, (), BOTTOM, BUCHI)
        assert omega_diff_nonempty(bottom, INF_A) is None

    def test_universal_minus_empty(self):
        top = Automaton(AB, (), TOP, PARITY, priority=())
        bottom = Automaton(AB, (), BOTTOM, PARITY, priority=())
        w = omega_diff_nonempty(top, bottom)
        assert w.lasso.prefix == () and len(w.lasso.loop) == 1

    def test_inf_a_minus_inf_b(self):
        w = omega_diff_nonempty(view_as(INF_A, PARITY), view_as(INF_B, PARITY))
        assert w.lasso == Lasso((), ("a",))
        assert run_lasso(INF_A, w.lasso)[0] and not run_lasso(INF_B, w.lasso)[0]

    def test_side_of_second_direction(self):
        w = omega_difference(INF_A, Automaton(AB, (), TOP, BUCHI))
        assert w.side == "right"

    def test_finite_mode_rejected(self):
        with pytest.raises(ModeError):
            omega_diff_nonempty(view_as(INF_A, FINITE), INF_A)


class TestEquivalence:
    def test_reflexive(self):
        assert omega_equiv(INF_A, INF_A)

    def test_inf_a_vs_inf_b(self):
        assert not omega_equiv(INF_A, INF_B)

    def test_characteristic_dbas_agree(self):
        assert omega_equiv(characteristic_dba(P2, ["v0"]), characteristic_dba(P2, ["v0", "v1"]))
        assert omega_equiv(characteristic_dba(P2, ["v1"]), characteristic_dba(P2, ["v0", "v1"]))

    def test_dfa_equiv(self):
        a = view_as(INF_A, FINITE)
        empty = Automaton(AB, ((0, 0),), 0)
        assert dfa_equiv(a, a)
        assert dfa_equiv(empty, Automaton(AB, (), BOTTOM))
        assert not dfa_equiv(a, empty)
        assert dfa_equiv(a, hopcroft_min(a))

    def test_dfa_difference_is_shortest(self):
        a = Automaton(AB, ((1, 0), (2, 0), (2, 2)), 0, FINITE, frozenset({2}))
        assert dfa_difference(a, Automaton(AB, (), BOTTOM)) == ("a", "a")


class TestAlmostEquivalence:
    def test_no_final_states(self):
        a = Automaton(AB, ((1, 0), (1, BOTTOM)), 0)
        assert classes(almost_equiv_quotient(a)) == {frozenset({0, 1, BOTTOM}), frozenset({TOP})}

    def test_disjoint_self_loops(self):
        a = Automaton(AB, ((0, 1), (1, 1)), 0, FINITE, frozenset({0}))
        assert not almost_equiv_quotient(a).same(0, 1)

    def test_single_finite_disagreement(self):
        s = Automaton(("a",), ((1,), (1,)), 0, FINITE, frozenset({0}))
        t = Automaton(("a",), ((1,), (1,)), 0, FINITE)
        assert almost_equivalent(s, t)
        assert almost_oracle(s, t, 0, 0)
        assert not dfa_equiv(s, t)

    def test_sinks_never_merge(self):
        rng = random.Random(3)
        for _ in range(50):
            p = almost_equiv_quotient(random_automaton(rng, 4))
            assert not p.same(TOP, BOTTOM)

    def test_matches_oracle_on_random_dfas(self):
        rng = random.Random(11)
        for _ in range(150):
            a = random_automaton(rng, rng.randint(0, 5))
            assert classes(almost_equiv_quotient(a)) == almost_oracle_classes(a)

    @settings(max_examples=80, deadline=None)
    @given(automata(max_n=6))
    def test_congruence(self, a):
        a = restrict_reachable(a)
        p = almost_equiv_quotient(a)
        table = a.table
        for members in p.classes:
            for q in members:
                for k in range(len(a.alphabet)):
                    assert p.same(table[members[0]][k], table[q][k])


class TestBuchiDiffStates:
    def test_no_final_states(self):
        b = Automaton(AB, ((1, 0), (0, 1)), 0, BUCHI)
        assert not {(p, q) for p, q in buchi_diff_states(b) if p >= 0}

    def test_diagonal_absent(self):
        rng = random.Random(4)
        for _ in range(30):
            b = random_automaton(rng, 5, mode=BUCHI)
            diff = buchi_diff_states(b)
            assert all(p != q for p, q in diff)

    def test_infinitely_many_a(self):
        diff = buchi_diff_states(INF_A)
        assert (0, 1) not in diff and (1, 0) not in diff

    def test_generic_agrees_on_random(self):
        rng = random.Random(8)
        for _ in range(60):
            b = restrict_reachable(random_automaton(rng, rng.randint(1, 6), mode=BUCHI))
            states = b.states()
            expected = {(p, q) for p in states for q in states
                        if omega_diff_nonempty(b.with_initial(p), b.with_initial(q))}
            assert buchi_diff_states(b) == expected
            assert omega_diff_states(b) == expected


class TestOmegaQuotient:
    def test_accepting_loops_in_different_sccs(self):
        b = Automaton(AB, ((1, 2), (1, 1), (2, 2)), 0, BUCHI, frozenset({1, 2}))
        assert omega_equiv_quotient(b).same(1, 2)

    def test_infinitely_many_a(self):
        assert omega_equiv_quotient(INF_A).same(0, 1)

    def test_characteristic_twins(self):
        b = characteristic_dba(P2, ["v0", "v1"])
        index = {lab: i for i, lab in enumerate(characteristic_labels(P2, ["v0", "v1"]))}
        p = omega_equiv_quotient(b)
        for v in P2.vertices:
            assert p.same(index[v, "r"], index[v, "a"])

    def test_cobuchi(self):
        cob = view_as(INF_A, COBUCHI)
        # finitely many b from state 0 and from state 1 alike
        assert omega_equiv_quotient(cob).same(0, 1)

    def test_partition_consistent(self):
        rng = random.Random(2)
        for _ in range(40):
            b = restrict_reachable(random_automaton(rng, 6, mode=rng.choice((BUCHI, COBUCHI))))
            p = omega_equiv_quotient(b)
            flat = [q for c in p.classes for q in c]
            assert sorted(flat) == sorted(b.states())
            for c in p.classes:
                for q in c:
                    assert p.class_of[q] == p.classes.index(c)


class TestRefinementChain:
    def test_random(self):
        rng = random.Random(21)
        for _ in range(60):
            mode = rng.choice((BUCHI, COBUCHI))
            a = restrict_reachable(random_automaton(rng, rng.randint(1, 10), rng.randint(1, 3), mode))
            nerode = moore_classes(a)
            almost = almost_equiv_quotient(view_as(a, FINITE))
            omega = omega_equiv_quotient(a)
            for c in nerode:
                assert len({almost.class_of[q] for q in c}) == 1
            for c in almost.classes:
                assert len({omega.class_of[q] for q in c}) == 1


@settings(max_examples=100, deadline=None)
@given(automata(max_n=5, modes=(BUCHI, COBUCHI, PARITY), m=2),
       automata(max_n=5, modes=(BUCHI, COBUCHI, PARITY), m=2))
def test_witnesses_replay(a, b):
    w = omega_diff_nonempty(view_as(a, PARITY), view_as(b, PARITY))
    if w is not None:
        assert run_lasso(a, w.lasso)[0] and not run_lasso(b, w.lasso)[0]
    w = omega_difference(a, b)
    if w is not None:
        left, right = (a, b) if w.side == "left" else (b, a)
        assert run_lasso(left, w.lasso)[0] and not run_lasso(right, w.lasso)[0]
    else:
        assert omega_equiv(b, a)
