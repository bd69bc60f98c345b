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
    canonical,
    normalize_priorities,
    reachable_states,
    restrict_reachable,
    run_finite,
    run_lasso,
    scc_decompose,
    state_key,
    view_as,
)
from autmin.equiv import omega_equiv
from autmin.errors import InputError, ModeError
from autmin.hardness import NiceGraph, characteristic_dba

from gen import automata, lassos

AB = ("a", "b")
# F = {0}; every a leads to 0, every b to 1
INF_A = Automaton(AB, ((0, 1), (0, 1)), 0, BUCHI, frozenset({0}))


def parity(pri, delta=None):
    n = len(pri)
    delta = delta or tuple((q, (q + 1) % n) for q in range(n))
    return Automaton(AB, delta, 0, PARITY, priority=tuple(pri))


class TestAutomaton:
    def test_alphabet_sorted_and_columns_permuted(self):
        a = Automaton(("b", "a"), ((TOP, BOTTOM),), 0)
        assert a.alphabet == AB
        assert a.delta == ((BOTTOM, TOP),)

    def test_top_dropped_from_final(self):
        a = Automaton(AB, ((0, 0),), 0, BUCHI, frozenset({0, TOP}))
        assert a.final == frozenset({0})

    @pytest.mark.parametrize("kwargs", [
        dict(alphabet=(), delta=(), initial=TOP),
        dict(alphabet=("a", "a"), delta=(), initial=TOP),
        dict(alphabet=("a",), delta=((0, 0),), initial=0),
        dict(alphabet=("a",), delta=((3,),), initial=0),
        dict(alphabet=("a",), delta=((0,),), initial=2),
        dict(alphabet=("a",), delta=((0,),), initial=0, final=frozenset({BOTTOM})),
        dict(alphabet=("a",), delta=((0,),), initial=0, mode=PARITY),
        dict(alphabet=("a",), delta=((0,),), initial=0, mode=BUCHI, priority=(1,)),
        dict(alphabet=("a",), delta=((0,),), initial=0, mode="rabin"),
    ])
    def test_rejects_malformed(self, kwargs):
        with pytest.raises(InputError):
            Automaton(**kwargs)

    def test_empty_automaton_is_legal(self):
        assert Automaton(AB, (), TOP).n == 0

    def test_parity_has_no_accepting_view(self):
        with pytest.raises(ModeError):
            parity([2, 1]).accepting

    def test_sink_priorities(self):
        assert INF_A.priorities[TOP] == 2 and INF_A.priorities[BOTTOM] == 1
        assert parity([2]).priorities[TOP] % 2 == 0
        assert parity([2]).priorities[BOTTOM] % 2 == 1
        cob = view_as(INF_A, COBUCHI)
        assert cob.priorities[TOP] == 2 and cob.priorities[BOTTOM] == 3

    def test_state_key_orders_sinks_last(self):
        assert sorted([BOTTOM, 1, TOP, 0], key=state_key) == [0, 1, TOP, BOTTOM]


class TestRunFinite:
    def test_single_accepting_loop(self):
        a = Automaton(AB, ((0, 0),), 0, FINITE, frozenset({0}))
        assert run_finite(a, "a b") == (0, True)

    def test_empty_word(self):
        a = Automaton(AB, ((0, 0),), 0, FINITE)
        assert run_finite(a, ()) == (0, False)
        assert run_finite(Automaton(AB, (), TOP), ()) == (TOP, True)

    def test_bottom_is_rejecting(self):
        a = Automaton(AB, ((BOTTOM, 0),), 0, FINITE, frozenset({0}))
        assert run_finite(a, ["a", "b"]) == (BOTTOM, False)

    def test_unknown_symbol(self):
        with pytest.raises(InputError, match="'c' at word position 1"):
            run_finite(INF_A, ["a", "c"])


class TestRunLasso:
    def test_sinks(self):
        top = Automaton(AB, (), TOP, BUCHI)
        bottom = Automaton(AB, (), BOTTOM, BUCHI)
        ok, pri = run_lasso(top, Lasso((), ("a",)))
        assert ok and pri % 2 == 0
        ok, pri = run_lasso(bottom, Lasso(("a",), ("b",)))
        assert not ok and pri % 2 == 1

    def test_infinitely_many_a(self):
        assert run_lasso(INF_A, Lasso((), ("a", "b"))) == (True, 2)
        assert run_lasso(INF_A, Lasso((), ("b",))) == (False, 1)

    def test_cobuchi_reading(self):
        # as co-Buchi: eventually only state 0, i.e. finitely many b
        cob = view_as(INF_A, COBUCHI)
        assert run_lasso(cob, Lasso(("b",), ("a",))) == (True, 2)
        assert run_lasso(cob, Lasso((), ("a", "b"))) == (False, 3)

    def test_finite_mode_rejected(self):
        with pytest.raises(ModeError):
            run_lasso(view_as(INF_A, FINITE), Lasso((), ("a",)))

    def test_unknown_symbol(self):
        with pytest.raises(InputError):
            run_lasso(INF_A, Lasso((), ("z",)))

    def test_lasso_needs_loop(self):
        with pytest.raises(InputError):
            Lasso(("a",), ())

    @settings(max_examples=150, deadline=None)
    @given(automata(max_n=5, modes=(BUCHI, COBUCHI, PARITY), m=2), lassos(AB))
    def test_unrolling_one_loop_keeps_verdict(self, a, lasso):
        shifted = Lasso(lasso.prefix + lasso.loop, lasso.loop)
        doubled = Lasso(lasso.prefix, lasso.loop + lasso.loop)
        assert run_lasso(a, lasso)[0] == run_lasso(a, shifted)[0] == run_lasso(a, doubled)[0]


class TestScc:
    def test_self_loop(self):
        a = Automaton(AB, ((0, 0),), 0)
        scc = scc_decompose(a)
        assert len(scc.sccs) == 3
        assert not scc.trivial[scc.scc_of[0]]
        assert not scc.trivial[scc.scc_of[TOP]] and not scc.trivial[scc.scc_of[BOTTOM]]

    def test_two_way_edges(self):
        a = Automaton(AB, ((1, 1), (0, 0)), 0)
        scc = scc_decompose(a)
        assert scc.same_scc(0, 1)
        assert sorted(scc.sccs[scc.scc_of[0]]) == [0, 1]

    def test_characteristic_dba_stop_states_trivial(self):
        g = NiceGraph(("v0", "v1"), frozenset({("v0", "v1")}), "v0")
        b = characteristic_dba(g, ["v1"])
        scc = scc_decompose(b)
        # states: (v0,r)=0 (v1,r)=1 (v0,#)=2 (v1,#)=3 (v1,a)=4
        assert scc.same_scc(0, 1) and scc.same_scc(0, 4)
        assert scc.trivial[scc.scc_of[2]] and scc.trivial[scc.scc_of[3]]
        assert scc.rank(2) > scc.rank(0) and scc.rank(3) > scc.rank(0)

    def test_unreachable_states_skipped(self):
        a = Automaton(AB, ((0, 0), (0, 1)), 0)
        assert 1 not in scc_decompose(a).scc_of

    @settings(max_examples=150, deadline=None)
    @given(automata(max_n=7))
    def test_ranks_monotone_and_sinks_maximal(self, a):
        scc = scc_decompose(a)
        table = a.table
        for q in scc.scc_of:
            for t in table[q]:
                assert scc.rank(q) <= scc.rank(t)
                if scc.rank(q) == scc.rank(t) and q >= 0 and t >= 0:
                    assert scc.same_scc(q, t)
        top = scc.rank(TOP)
        assert top == scc.rank(BOTTOM)
        assert all(scc.rank(q) < top for q in scc.scc_of if q >= 0)


class TestViewAs:
    def test_finite_to_buchi_keeps_f(self):
        a = Automaton(AB, ((0, 0),), 0, FINITE, frozenset({0}))
        assert view_as(a, BUCHI).final == frozenset({0})
        assert view_as(view_as(a, BUCHI), FINITE) == a

    def test_buchi_to_parity(self):
        p = view_as(INF_A, PARITY)
        assert p.priority == (2, 1)
        assert view_as(p, BUCHI) == INF_A

    def test_cobuchi_to_parity(self):
        assert view_as(view_as(INF_A, COBUCHI), PARITY).priority == (2, 3)

    def test_parity_out_of_window(self):
        with pytest.raises(ModeError):
            view_as(parity([4]), BUCHI)

    @settings(max_examples=100, deadline=None)
    @given(automata(max_n=5, modes=(BUCHI, COBUCHI), m=2))
    def test_parity_view_same_language(self, a):
        assert omega_equiv(a, view_as(a, PARITY))


class TestNormalizePriorities:
    def test_no_gap(self):
        assert normalize_priorities(parity([2])).priority == (2,)

    def test_gap_at_two(self):
        a = parity([1, 4])
        b = normalize_priorities(a)
        assert b.priority == (1, 2)
        assert omega_equiv(a, b)

    def test_gap_at_three(self):
        a = parity([5, 2])
        b = normalize_priorities(a)
        assert b.priority == (3, 2)
        assert omega_equiv(a, b)

    def test_requires_parity(self):
        with pytest.raises(ModeError):
            normalize_priorities(INF_A)

    @settings(max_examples=150, deadline=None)
    @given(automata(min_n=1, max_n=5, modes=(PARITY,), m=2, max_priority=9))
    def test_preserves_language_and_bounds(self, a):
        b = normalize_priorities(a)
        assert omega_equiv(a, b)
        assert max(b.priority) <= a.n + 1
        assert all(q <= p for p, q in zip(a.priority, b.priority))


class TestReachability:
    def test_restrict_and_canonical(self):
        a = Automaton(AB, ((2, 2), (1, 1), (0, TOP)), 0, BUCHI, frozenset({2}))
        r = restrict_reachable(a)
        assert r.n == 2 and r.final == frozenset({1})
        assert reachable_states(a) == [0, 2]
        assert canonical(a) == canonical(r)

    @settings(max_examples=100, deadline=None)
    @given(automata(max_n=6, modes=(BUCHI,), m=2))
    def test_canonical_is_language_preserving_and_idempotent(self, a):
        c = canonical(a)
        assert canonical(c) == c
        assert omega_equiv(a, c)
