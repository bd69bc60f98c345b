"""Products of automata, language differences and state quotients."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Sequence

from .core import (
    BUCHI,
    OMEGA_MODES,
    Automaton,
    Lasso,
    restrict_reachable,
    state_key,
    strongly_connected_components,
)
from .errors import InputError, ModeError


@dataclass(frozen=True)
class Partition:
    """A partition of StateRefs into equivalence classes.

    Classes are tuples sorted by :func:`state_key` and ordered by their
    smallest member.
    """

    classes: tuple[tuple[int, ...], ...]
    representative: tuple[int, ...] | None = None

    @cached_property
    def class_of(self) -> dict[int, int]:
        return {q: c for c, members in enumerate(self.classes) for q in members}

    def same(self, p: int, q: int) -> bool:
        return self.class_of[p] == self.class_of[q]

    def __len__(self):
        return len(self.classes)

    @classmethod
    def from_relation(cls, states: Iterable[int],
                      equivalent: Callable[[int, int], bool]) -> "Partition":
        classes: list[list[int]] = []
        for q in sorted(states, key=state_key):
            for members in classes:
                if equivalent(members[0], q):
                    members.append(q)
                    break
            else:
                classes.append([q])
        return cls(tuple(tuple(c) for c in classes))


@dataclass(frozen=True)
class DiffWitness:
    """A lasso accepted by the ``side`` automaton and rejected by the other."""

    lasso: Lasso
    side: str = "left"


class PairGraph:
    """Synchronous product of two automata over pairs of StateRefs.

    Node ``i`` is ``pairs[i]``; ``succ[i][k]`` is its successor on the k-th
    symbol.  Nodes are numbered in BFS discovery order from ``starts``, and
    ``parent`` records a BFS tree (node, symbol) for path extraction.
    """

    def __init__(self, a: Automaton, b: Automaton, starts: Sequence[tuple[int, int]]):
        check_alphabets(a, b)
        self.alphabet = a.alphabet
        ta, tb = a.table, b.table
        m = len(a.alphabet)
        pairs: list[tuple[int, int]] = []
        index: dict[tuple[int, int], int] = {}
        parent: list[tuple[int, int] | None] = []
        for s in starts:
            if s not in index:
                index[s] = len(pairs)
                pairs.append(s)
                parent.append(None)
        succ: list[tuple[int, ...]] = []
        i = 0
        while i < len(pairs):
            p, q = pairs[i]
            rp, rq = ta[p], tb[q]
            row = []
            for k in range(m):
                t = (rp[k], rq[k])
                j = index.get(t)
                if j is None:
                    j = index[t] = len(pairs)
                    pairs.append(t)
                    parent.append((i, k))
                row.append(j)
            succ.append(tuple(row))
            i += 1
        self.pairs = pairs
        self.index = index
        self.succ = succ
        self.parent = parent

    def __len__(self):
        return len(self.pairs)

    def predecessors(self) -> list[list[int]]:
        pred: list[list[int]] = [[] for _ in self.pairs]
        for i, row in enumerate(self.succ):
            for j in row:
                pred[j].append(i)
        return pred

    def components(self, keep: Sequence[bool] | None = None) -> list[list[int]]:
        """SCCs of the subgraph induced by ``keep`` (default: everything)."""
        succ = self.succ
        if keep is None:
            return strongly_connected_components(range(len(succ)), succ.__getitem__)
        nodes = [i for i in range(len(succ)) if keep[i]]
        return strongly_connected_components(
            nodes, lambda i: [j for j in succ[i] if keep[j]])

    def nontrivial(self, comp: Sequence[int]) -> bool:
        return len(comp) > 1 or comp[0] in self.succ[comp[0]]

    def backward_closure(self, targets: Iterable[int]) -> set[int]:
        """Nodes from which some target is reachable."""
        pred = self.predecessors()
        seen = set(targets)
        queue = deque(seen)
        while queue:
            j = queue.popleft()
            for i in pred[j]:
                if i not in seen:
                    seen.add(i)
                    queue.append(i)
        return seen

    def path_to(self, node: int) -> list[int]:
        """Symbols along the BFS tree from a start node to ``node``."""
        path = []
        while self.parent[node] is not None:
            node, k = self.parent[node]
            path.append(k)
        path.reverse()
        return path

    def bfs_path(self, src: int, goal: Callable[[int], bool], allowed,
                 nonempty: bool = False) -> tuple[list[int], int]:
        """Shortest path inside ``allowed`` from ``src`` to a goal node."""
        if not nonempty and goal(src):
            return [], src
        back: dict[int, tuple[int, int]] = {}
        queue = deque([src])
        visited = set() if nonempty else {src}
        while queue:
            i = queue.popleft()
            for k, j in enumerate(self.succ[i]):
                if j in visited or j not in allowed:
                    continue
                visited.add(j)
                back[j] = (i, k)
                if goal(j):
                    path = []
                    node = j
                    while True:
                        prev, sym = back[node]
                        path.append(sym)
                        node = prev
                        if node == src and (not nonempty or len(path) > 0):
                            break
                    path.reverse()
                    return path, j
                queue.append(j)
        raise ValueError("no path")  # callers only ask inside an SCC


def check_alphabets(a: Automaton, b: Automaton) -> None:
    if a.alphabet != b.alphabet:
        diff = sorted(set(a.alphabet) ^ set(b.alphabet))
        raise InputError(f"alphabet mismatch: {' '.join(diff) or '(order differs)'}")


def product(a: Automaton, b: Automaton, *, all_pairs: bool = False) -> PairGraph:
    """Pairs reachable from ``(a.initial, b.initial)``, or from every pair."""
    if all_pairs:
        starts = [(p, q) for p in a.states() for q in b.states()]
    else:
        starts = [(a.initial, b.initial)]
    return PairGraph(a, b, starts)


def _require_omega(*automata: Automaton) -> None:
    for x in automata:
        if x.mode not in OMEGA_MODES:
            raise ModeError(f"expected a Buchi, co-Buchi or parity automaton, got {x.mode}")


def _thresholds(pri1: Sequence[int], pri2: Sequence[int]):
    evens = sorted({p for p in pri1 if p % 2 == 0})
    odds = sorted({p for p in pri2 if p % 2 == 1})
    return [(e, o) for e in evens for o in odds]


def _threshold_comps(graph: PairGraph, pri1, pri2, e: int, o: int) -> list[list[int]]:
    """SCCs of the pairs with priorities at most ``(e, o)`` that contain a
    cycle whose maximal left priority is ``e`` and maximal right one ``o``."""
    keep = [x <= e and y <= o for x, y in zip(pri1, pri2)]
    return [comp for comp in graph.components(keep)
            if graph.nontrivial(comp)
            and any(pri1[i] == e for i in comp)
            and any(pri2[i] == o for i in comp)]


def omega_diff_nonempty(p1: Automaton, p2: Automaton) -> DiffWitness | None:
    """A lasso in L(p1) minus L(p2), or None if that difference is empty.

    Thresholds ``(e, o)`` are tried in ascending order; the first SCC found
    (the one closest to the initial pair) yields the witness.
    """
    _require_omega(p1, p2)
    graph = product(p1, p2)
    pri1 = [p1.priorities[p] for p, _ in graph.pairs]
    pri2 = [p2.priorities[q] for _, q in graph.pairs]
    for e, o in _thresholds(pri1, pri2):
        comps = _threshold_comps(graph, pri1, pri2, e, o)
        if comps:
            return _witness(graph, min(comps, key=min), pri1, pri2, e, o)
    return None


def _witness(graph: PairGraph, comp, pri1, pri2, e, o) -> DiffWitness:
    allowed = set(comp)
    entry = min(comp)
    prefix = graph.path_to(entry)
    to_even, mid = graph.bfs_path(entry, lambda i: pri1[i] == e, allowed)
    to_odd, last = graph.bfs_path(mid, lambda i: pri2[i] == o, allowed)
    back, _ = graph.bfs_path(last, lambda i: i == entry, allowed,
                             nonempty=not (to_even or to_odd))
    loop = to_even + to_odd + back
    sym = graph.alphabet
    return DiffWitness(Lasso(tuple(sym[k] for k in prefix), tuple(sym[k] for k in loop)))


def omega_difference(a: Automaton, b: Automaton) -> DiffWitness | None:
    """A lasso on which ``a`` and ``b`` disagree, or None if equivalent."""
    w = omega_diff_nonempty(a, b)
    if w is not None:
        return w
    w = omega_diff_nonempty(b, a)
    if w is not None:
        return DiffWitness(w.lasso, "right")
    return None


def omega_equiv(a: Automaton, b: Automaton) -> bool:
    return omega_difference(a, b) is None


def dfa_difference(a: Automaton, b: Automaton) -> tuple[str, ...] | None:
    """A shortest finite word accepted by exactly one automaton, or None."""
    graph = product(a, b)
    fa, fb = a.accepting, b.accepting
    for i, (p, q) in enumerate(graph.pairs):
        if fa[p] != fb[q]:
            return tuple(graph.alphabet[k] for k in graph.path_to(i))
    return None


def dfa_equiv(a: Automaton, b: Automaton) -> bool:
    return dfa_difference(a, b) is None


def _discordant_cycles(graph: PairGraph, fa, fb) -> list[int]:
    """Discordant pairs that lie on a cycle of the pair graph."""
    out = []
    for comp in graph.components():
        if graph.nontrivial(comp):
            out.extend(i for i in comp if fa[graph.pairs[i][0]] != fb[graph.pairs[i][1]])
    return out


def almost_equivalent(a: Automaton, b: Automaton) -> bool:
    """Whether the runs of ``a`` and ``b`` disagree on finality only finitely
    often on every infinite word."""
    graph = product(a, b)
    return not _discordant_cycles(graph, a.accepting, b.accepting)


def almost_equiv_quotient(a: Automaton) -> Partition:
    """Classes of almost equivalent states among the reachable ones and the
    two sinks, computed on the pair graph over all of those states."""
    a = restrict_reachable(a)
    states = a.states()
    graph = PairGraph(a, a, [(p, q) for p in states for q in states])
    bad = graph.backward_closure(_discordant_cycles(graph, a.accepting, a.accepting))
    index = graph.index
    return Partition.from_relation(states, lambda p, q: index[p, q] not in bad)


def buchi_diff_states(b: Automaton, states: Sequence[int] | None = None) -> set[tuple[int, int]]:
    """Ordered pairs ``(p, q)`` with L(B_p) minus L(B_q) non-empty, reading
    ``b`` as a Buchi automaton.

    Pairs get priority 3 if the right state accepts, 2 if only the left one
    does, and 1 otherwise.  A difference exists iff a non-trivial SCC of the
    pairs below 3 contains a priority-2 pair reachable from ``(p, q)``.
    """
    acc = b.accepting
    states = b.states() if states is None else list(states)
    graph = PairGraph(b, b, [(p, q) for p in states for q in states])
    pri = [3 if acc[q] else 2 if acc[p] else 1 for p, q in graph.pairs]
    keep = [x < 3 for x in pri]
    targets = []
    for comp in graph.components(keep):
        if graph.nontrivial(comp):
            targets.extend(i for i in comp if pri[i] == 2)
    return {graph.pairs[i] for i in graph.backward_closure(targets)}


def omega_diff_states(a: Automaton, states: Sequence[int] | None = None) -> set[tuple[int, int]]:
    """Ordered pairs ``(p, q)`` with L(A_p) minus L(A_q) non-empty, for any
    omega acceptance mode, via priority thresholds on the pair graph."""
    _require_omega(a)
    states = a.states() if states is None else list(states)
    graph = PairGraph(a, a, [(p, q) for p in states for q in states])
    pri = a.priorities
    pri1 = [pri[p] for p, _ in graph.pairs]
    pri2 = [pri[q] for _, q in graph.pairs]
    targets = set()
    for e, o in _thresholds(pri1, pri2):
        for comp in _threshold_comps(graph, pri1, pri2, e, o):
            targets.update(comp)
    return {graph.pairs[i] for i in graph.backward_closure(targets)}


def omega_equiv_quotient(a: Automaton) -> Partition:
    """Classes of omega-language equivalent states (reachable ones and sinks)."""
    _require_omega(a)
    a = restrict_reachable(a)
    states = a.states()
    if a.mode == BUCHI:
        diff = buchi_diff_states(a, states)
    else:
        diff = omega_diff_states(a, states)
    return Partition.from_relation(
        states, lambda p, q: (p, q) not in diff and (q, p) not in diff)
