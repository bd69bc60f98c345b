"""Vertex cover versus Buchi minimisation.

A nice graph (simple, connected, more than one vertex, with an initial
vertex) defines an omega-language over its vertices plus the stop symbol
``#``.  A Buchi automaton for it built from a vertex cover ``C`` has
``2|V| + |C|`` states, and every Buchi automaton for it has at least that
many states for some cover, so minimising the automaton of the trivial
cover finds a minimum cover.
"""

from __future__ import annotations

import itertools
import os
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

from .core import (
    BOTTOM,
    BUCHI,
    TOP,
    Automaton,
    Lasso,
    canonical,
    restrict_reachable,
    strongly_connected_components,
)
from .equiv import Partition, omega_equiv, omega_equiv_quotient
from .errors import BudgetError, InputError

STOP = "#"

DEFAULT_BUDGET = 9
COVER_BUDGET = 25


def get_budget() -> int:
    """Largest plain-state count a brute-force search may try.

    ``AUTMIN_BUDGET`` overrides the default.
    """
    raw = os.environ.get("AUTMIN_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"AUTMIN_BUDGET must be an integer, got {raw!r}") from None


# -- graphs -----------------------------------------------------------------


def _edge(u: str, v: str) -> tuple[str, str]:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class Graph:
    """A simple undirected graph; edges are sorted name pairs."""

    vertices: tuple[str, ...]
    edges: frozenset[tuple[str, str]]

    def __post_init__(self):
        vertices = tuple(self.vertices)
        if len(set(vertices)) != len(vertices):
            raise InputError("duplicate vertex names")
        for v in vertices:
            if not v or any(c.isspace() or c in '#;"\\' for c in v):
                raise InputError(f"invalid vertex name {v!r}")
        known = set(vertices)
        edges = set()
        for u, v in self.edges:
            if u not in known or v not in known:
                raise InputError(f"edge {u}-{v} uses an unknown vertex")
            if u == v:
                raise InputError(f"self-loop on {u}")
            edges.add(_edge(u, v))
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", frozenset(edges))

    def neighbours(self, v: str) -> list[str]:
        return [w for w in self.vertices if _edge(v, w) in self.edges]

    def has_edge(self, u: str, v: str) -> bool:
        return _edge(u, v) in self.edges

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        seen = {self.vertices[0]}
        queue = deque(seen)
        while queue:
            v = queue.popleft()
            for w in self.neighbours(v):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == len(self.vertices)


@dataclass(frozen=True)
class NiceGraph(Graph):
    initial: str = ""

    def __post_init__(self):
        super().__post_init__()
        if len(self.vertices) < 2:
            raise InputError("a nice graph needs at least two vertices")
        if self.initial not in self.vertices:
            raise InputError(f"initial vertex {self.initial!r} is not a vertex")
        if not self.is_connected():
            raise InputError("a nice graph must be connected")


def _fresh(name: str, taken: set[str]) -> str:
    if name not in taken:
        return name
    for i in itertools.count(1):
        candidate = f"{name}_{i}"
        if candidate not in taken:
            return candidate


def make_nice(g: Graph) -> NiceGraph:
    """Add a hub joined to every vertex plus a pendant leaf on the hub.

    The hub (``hub``, or ``hub_1``, ``hub_2``... on a clash) becomes the
    initial vertex; the leaf is named ``leaf`` the same way.  The minimum
    cover grows by exactly one.
    """
    taken = set(g.vertices)
    hub = _fresh("hub", taken)
    leaf = _fresh("leaf", taken | {hub})
    edges = set(g.edges) | {_edge(hub, w) for w in g.vertices} | {_edge(hub, leaf)}
    return NiceGraph(g.vertices + (hub, leaf), frozenset(edges), hub)


def is_vertex_cover(g: Graph, cover: Iterable[str]) -> bool:
    cover = set(cover)
    unknown = cover - set(g.vertices)
    if unknown:
        raise InputError(f"unknown vertices in cover: {' '.join(sorted(unknown))}")
    return all(u in cover or v in cover for u, v in g.edges)


def min_cover_bruteforce(g: Graph) -> tuple[str, ...]:
    """A minimum vertex cover, lexicographically least by vertex order."""
    n = len(g.vertices)
    if n > COVER_BUDGET:
        raise BudgetError(f"graph has {n} vertices, budget is {COVER_BUDGET}", n)
    pos = {v: i for i, v in enumerate(g.vertices)}
    masks = [(1 << pos[u]) | (1 << pos[v]) for u, v in g.edges]
    for k in range(n + 1):
        for combo in itertools.combinations(range(n), k):
            chosen = 0
            for i in combo:
                chosen |= 1 << i
            if all(e & chosen for e in masks):
                return tuple(g.vertices[i] for i in combo)
    raise AssertionError("the full vertex set is always a cover")


# -- the characteristic language ----------------------------------------------


def characteristic_labels(g: NiceGraph, cover: Sequence[str]) -> list[tuple[str, str]]:
    """State labels of :func:`characteristic_dba`: ``(v, 'r')``, ``(v, '#')``
    and ``(v, 'a')`` for ``v`` in the cover, in state order."""
    members = set(cover)
    return ([(v, "r") for v in g.vertices] + [(v, STOP) for v in g.vertices]
            + [(v, "a") for v in g.vertices if v in members])


def characteristic_dba(g: NiceGraph, cover: Iterable[str]) -> Automaton:
    """The Buchi automaton for the characteristic language built from a cover.

    States: a rejecting and a stop state per vertex, and an accepting copy
    per cover vertex, entered only when an edge leads into that vertex.
    """
    cover = set(cover)
    if not is_vertex_cover(g, cover):
        raise InputError("not a vertex cover")
    labels = characteristic_labels(g, cover)
    index = {lab: i for i, lab in enumerate(labels)}
    alphabet = g.vertices + (STOP,)

    def from_vertex(v: str) -> tuple[int, ...]:
        row = []
        for sym in alphabet:
            if sym == STOP:
                row.append(index[v, STOP])
            elif sym == v:
                row.append(index[v, "r"])
            elif g.has_edge(v, sym):
                row.append(index[sym, "a"] if sym in cover else index[sym, "r"])
            else:
                row.append(BOTTOM)
        return tuple(row)

    delta = []
    for v, tag in labels:
        if tag == STOP:
            delta.append(tuple(TOP if sym == v else BOTTOM for sym in alphabet))
        else:
            delta.append(from_vertex(v))
    final = [index[v, "a"] for v in g.vertices if v in cover]
    return Automaton(alphabet, delta, index[g.initial, "r"], BUCHI, frozenset(final))


def _path_shaped(g: NiceGraph, symbols: Sequence[str]) -> bool:
    """Whether ``symbols`` reads ``v0* v1+ ... vn+`` along edges of ``g``."""
    current = g.initial
    for s in symbols:
        if s != current:
            if s == STOP or not g.has_edge(current, s):
                return False
            current = s
    return True


def characteristic_member(g: NiceGraph, lasso: Lasso) -> bool:
    """Membership of ``prefix . loop^omega`` in the characteristic language,
    decided from its definition."""
    known = set(g.vertices) | {STOP}
    for part, syms in (("prefix", lasso.prefix), ("loop", lasso.loop)):
        for pos, s in enumerate(syms):
            if s not in known:
                raise InputError(f"unknown symbol {s!r} at {part} position {pos}")
    word = lasso.prefix + lasso.loop + lasso.loop
    if STOP in word:
        cut = word.index(STOP)
        path = word[:cut]
        last = path[-1] if path else g.initial
        return _path_shaped(g, path) and word[cut + 1] == last
    # no stop symbol: an infinite path needs infinitely many vertex changes
    return len(set(lasso.loop)) > 1 and _path_shaped(g, word)


def extract_cover(b: Automaton, g: NiceGraph) -> tuple[str, ...]:
    """Vertices with an accepting v-state, in vertex order.

    v-states are found by a fixpoint over (vertex, state) pairs: start at
    ``(v0, initial)``, and from ``(v, q)`` read ``v`` again or move to a
    neighbour ``w``.
    """
    seed = (g.initial, b.initial)
    seen = {seed}
    queue = deque([seed])
    while queue:
        v, q = queue.popleft()
        for w in [v] + g.neighbours(v):
            nxt = (w, b.step(q, w))
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    accepting = {v for v, q in seen if b.is_final(q)}
    return tuple(v for v in g.vertices if v in accepting)


# -- exhaustive search --------------------------------------------------------


@dataclass(frozen=True)
class Skeleton:
    """A transition structure found by :func:`consistent_skeletons`.

    ``pairs`` lists the (reference state, candidate state) pairs reachable
    in the product with the reference.
    """

    alphabet: tuple[str, ...]
    delta: tuple[tuple[int, ...], ...]
    initial: int
    pairs: tuple[tuple[int, int], ...]

    def automaton(self, mode: str, final: Iterable[int] = ()) -> Automaton:
        return Automaton(self.alphabet, self.delta, self.initial, mode, frozenset(final))


def consistent_skeletons(reference: Automaton, size: int, partition: Partition,
                         sink_states: bool = False) -> Iterator[Skeleton]:
    """All transition structures with exactly ``size`` reachable plain states
    whose states can each be labelled by a class of ``partition`` so that
    every product pair with ``reference`` matches its label.

    ``partition`` must be a congruence over the reachable states of
    ``reference`` and the sinks.  Any automaton whose states are all
    equivalent to their partners in the product is among the results, one
    per isomorphism class.  Unless ``sink_states`` is set, plain states
    labelled with the class of a sink are not generated: for omega-language
    equivalence such a state can always be replaced by the sink, so minimal
    automata never have one.  Candidate states are numbered by
    first use in the product BFS; targets are tried as existing states, a
    new state, TOP, BOTTOM.
    """
    ref = reference
    cls = partition.class_of
    m = len(ref.alphabet)
    rt = ref.table
    top_cls, bottom_cls = cls[TOP], cls[BOTTOM]

    if size == 0:
        for sink, c in ((TOP, top_cls), (BOTTOM, bottom_cls)):
            if cls[ref.initial] == c:
                seen = [ref.initial]
                for d in seen:
                    seen.extend(t for t in ref.table[d] if t not in seen)
                pairs = tuple((d, sink) for d in seen)
                yield Skeleton(ref.alphabet, (), sink, pairs)
        return

    sink_classes = () if sink_states else (top_cls, bottom_cls)
    if cls[ref.initial] in sink_classes:
        return
    table: list[list[int | None]] = [[None] * m for _ in range(size)]
    label: list[int] = [cls[ref.initial]] + [-1] * (size - 1)
    created = [1]
    start = (ref.initial, 0)
    queue: list[tuple[int, int]] = [start]
    seen = {start}

    def label_of(e: int) -> int:
        if e == TOP:
            return top_cls
        if e == BOTTOM:
            return bottom_cls
        return label[e]

    def explore(pos: int) -> Iterator[Skeleton]:
        while pos < len(queue):
            d, e = queue[pos]
            for k in range(m):
                d2 = rt[d][k]
                want = cls[d2]
                if e < 0:
                    e2 = e
                else:
                    e2 = table[e][k]
                    if e2 is None:
                        yield from branch(pos, e, k, want)
                        return
                if label_of(e2) != want:
                    return
                if (d2, e2) not in seen:
                    seen.add((d2, e2))
                    queue.append((d2, e2))
            pos += 1
        if created[0] == size:
            yield Skeleton(ref.alphabet, tuple(tuple(r) for r in table), 0, tuple(queue))

    def branch(pos: int, e: int, k: int, want: int) -> Iterator[Skeleton]:
        options = [j for j in range(created[0]) if label[j] == want]
        if created[0] < size and want not in sink_classes:
            options.append(created[0])
        if want == top_cls:
            options.append(TOP)
        if want == bottom_cls:
            options.append(BOTTOM)
        for target in options:
            fresh = target == created[0]
            if fresh:
                label[target] = want
                created[0] += 1
            table[e][k] = target
            mark = len(queue)
            yield from explore(pos)
            for pair in queue[mark:]:
                seen.discard(pair)
            del queue[mark:]
            table[e][k] = None
            if fresh:
                created[0] -= 1
                label[target] = -1

    yield from explore(0)


def cyclic_pairs(skeleton: Skeleton, reference: Automaton) -> list[tuple[int, int]]:
    """Product pairs lying on a cycle of the product with ``reference``."""
    index = {p: i for i, p in enumerate(skeleton.pairs)}
    rt = reference.table
    delta = skeleton.delta
    succ = []
    for d, e in skeleton.pairs:
        succ.append([index[rt[d][k], e if e < 0 else delta[e][k]]
                     for k in range(len(skeleton.alphabet))])
    out = []
    for comp in strongly_connected_components(range(len(succ)), succ.__getitem__):
        if len(comp) > 1 or comp[0] in succ[comp[0]]:
            out.extend(skeleton.pairs[i] for i in comp)
    return out


def forced_rejecting(skeleton: Skeleton, reference: Automaton) -> set[int]:
    """Candidate states on a product cycle the reference rejects.

    Such a state must be non-final in every Buchi automaton on this skeleton
    that is equivalent to ``reference``.
    """
    acc = reference.accepting
    keep = [p for p in skeleton.pairs if not acc[p[0]]]
    index = {p: i for i, p in enumerate(keep)}
    rt = reference.table
    delta = skeleton.delta
    succ = []
    for d, e in keep:
        nxt = ((rt[d][k], e if e < 0 else delta[e][k]) for k in range(len(skeleton.alphabet)))
        succ.append([index[p] for p in nxt if p in index])
    out = set()
    for comp in strongly_connected_components(range(len(succ)), succ.__getitem__):
        if len(comp) > 1 or comp[0] in succ[comp[0]]:
            out.update(keep[i][1] for i in comp if keep[i][1] >= 0)
    return out


def _order_key(a: Automaton) -> tuple:
    """Canonical order: size, transition table (plain states, TOP, BOTTOM),
    acceptance set as a binary number, initial state."""
    n = a.n

    def code(t: int) -> int:
        return n if t == TOP else n + 1 if t == BOTTOM else t

    table = tuple(code(t) for row in a.delta for t in row)
    mask = sum(1 << q for q in a.final)
    return (n, table, mask, code(a.initial))


def equivalent_dbas(reference: Automaton, size: int,
                    accept: Callable[[Automaton], bool] | None = None,
                    partition: Partition | None = None) -> list[Automaton]:
    """All Buchi automata with exactly ``size`` plain states that are
    omega-equivalent to ``reference`` and pass ``accept``, as canonical
    forms in canonical order.

    Final flags of states that never sit on a product cycle cannot change
    the language and are fixed to non-final.  A skeleton is dropped early
    when even the largest admissible final set fails, since shrinking the
    final set can only lose accepted words.
    """
    ref = restrict_reachable(reference)
    if partition is None:
        partition = omega_equiv_quotient(ref)
    found = set()
    for sk in consistent_skeletons(ref, size, partition):
        forced = forced_rejecting(sk, ref)
        relevant = sorted({e for _, e in cyclic_pairs(sk, ref) if e >= 0} - forced)
        if not omega_equiv(sk.automaton(BUCHI, relevant), ref):
            continue
        for bits in range(1 << len(relevant)):
            final = [q for i, q in enumerate(relevant) if bits >> i & 1]
            cand = sk.automaton(BUCHI, final)
            if accept is not None and not accept(cand):
                continue
            if omega_equiv(cand, ref):
                found.add(canonical(cand))
    return sorted(found, key=_order_key)


def _check_budget(max_states: int) -> None:
    budget = get_budget()
    if max_states > budget:
        raise BudgetError(
            f"search up to {max_states} states exceeds the budget of {budget} "
            f"(set AUTMIN_BUDGET to raise it)", max_states)


def exact_min_dba(reference: Automaton, max_states: int,
                  accept: Callable[[Automaton], bool] | None = None) -> Automaton | None:
    """The canonically least smallest Buchi automaton with at most
    ``max_states`` plain states equivalent to ``reference``, or None.

    Sizes are searched in ascending order.  ``accept`` restricts the
    candidates (e.g. to weak automata).
    """
    _check_budget(max_states)
    ref = restrict_reachable(reference)
    partition = omega_equiv_quotient(ref)
    for size in range(max_states + 1):
        found = equivalent_dbas(ref, size, accept, partition)
        if found:
            return found[0]
    return None


def cover_via_minimisation(g: NiceGraph) -> tuple[str, ...]:
    """A minimum vertex cover read off a minimal automaton for the
    characteristic language of ``g``."""
    ref = restrict_reachable(characteristic_dba(g, g.vertices))
    partition = omega_equiv_quotient(ref)
    for size in range(2 * len(g.vertices), ref.n + 1):
        _check_budget(size)
        found = equivalent_dbas(ref, size, partition=partition)
        if found:
            return extract_cover(found[0], g)
    raise AssertionError("the trivial-cover automaton is itself a solution")
