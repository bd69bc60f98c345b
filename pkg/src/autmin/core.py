"""Deterministic automata over finite and infinite words.

States are dense integers ``0..n-1``.  The two sinks are the sentinels
:data:`TOP` (accepting, even priority) and :data:`BOTTOM` (rejecting, odd
priority); they loop on every symbol and are never stored in the tables.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence

from .errors import InputError, ModeError

TOP = -1
BOTTOM = -2
SINKS = (TOP, BOTTOM)

FINITE = "finite"
BUCHI = "buchi"
COBUCHI = "cobuchi"
PARITY = "parity"
MODES = (FINITE, BUCHI, COBUCHI, PARITY)
OMEGA_MODES = (BUCHI, COBUCHI, PARITY)

# (priority of BOTTOM, priority of TOP) per mode; finite automata run on
# infinite words are read as Buchi automata.
_SINK_PRIORITIES = {
    FINITE: (1, 2),
    BUCHI: (1, 2),
    COBUCHI: (3, 2),
    PARITY: (1, 0),
}


def state_name(q: int) -> str:
    if q == TOP:
        return "TOP"
    if q == BOTTOM:
        return "BOT"
    return str(q)


def state_key(q: int) -> tuple[int, int]:
    """Sort key: plain states ascending, then TOP, then BOTTOM."""
    return (0, q) if q >= 0 else (1, -1 - q)


def _words(word) -> tuple[str, ...]:
    if isinstance(word, str):
        return tuple(word.split())
    return tuple(word)


@dataclass(frozen=True)
class Lasso:
    """The ultimately periodic word ``prefix . loop^omega``."""

    prefix: tuple[str, ...]
    loop: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "prefix", _words(self.prefix))
        object.__setattr__(self, "loop", _words(self.loop))
        if not self.loop:
            raise InputError("lasso loop must be non-empty")

    def __str__(self):
        return " ".join(self.prefix + (";",) + self.loop)


@dataclass(frozen=True)
class Automaton:
    """A complete deterministic automaton.

    ``delta[q][k]`` is the successor of plain state ``q`` on ``alphabet[k]``.
    The alphabet is kept sorted; columns are permuted accordingly on
    construction.  ``final`` holds plain states only (TOP is accepting and
    BOTTOM rejecting by rule); ``priority`` is used in parity mode only.
    """

    alphabet: tuple[str, ...]
    delta: tuple[tuple[int, ...], ...]
    initial: int
    mode: str = FINITE
    final: frozenset[int] = frozenset()
    priority: tuple[int, ...] | None = None

    def __post_init__(self):
        alphabet = tuple(self.alphabet)
        delta = tuple(tuple(row) for row in self.delta)
        if not alphabet:
            raise InputError("alphabet must be non-empty")
        if any(not isinstance(s, str) or not s for s in alphabet):
            raise InputError("alphabet symbols must be non-empty strings")
        if len(set(alphabet)) != len(alphabet):
            raise InputError("alphabet symbols must be distinct")
        if self.mode not in MODES:
            raise InputError(f"unknown acceptance mode {self.mode!r}")
        n, m = len(delta), len(alphabet)
        for q, row in enumerate(delta):
            if len(row) != m:
                raise InputError(f"state {q} has {len(row)} transitions, expected {m}")
            for t in row:
                if not (BOTTOM <= t < n):
                    raise InputError(f"state {q} has a transition to unknown state {t}")
        if not (BOTTOM <= self.initial < n):
            raise InputError(f"unknown initial state {self.initial}")

        order = sorted(range(m), key=alphabet.__getitem__)
        if order != list(range(m)):
            alphabet = tuple(alphabet[k] for k in order)
            delta = tuple(tuple(row[k] for k in order) for row in delta)
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "delta", delta)

        final = frozenset(self.final) - {TOP}
        if self.mode == PARITY:
            if final:
                raise InputError("parity automata carry priorities, not final states")
            if self.priority is None or len(self.priority) != n:
                raise InputError(f"parity automaton needs exactly {n} priorities")
            priority = tuple(int(p) for p in self.priority)
            if any(p < 0 for p in priority):
                raise InputError("priorities must be non-negative")
            object.__setattr__(self, "priority", priority)
        else:
            if self.priority is not None:
                raise InputError(f"{self.mode} automata carry final states, not priorities")
            if any(not (0 <= q < n) for q in final):
                raise InputError("final states must be plain states")
        object.__setattr__(self, "final", final)

    @property
    def n(self) -> int:
        return len(self.delta)

    def states(self) -> list[int]:
        return list(range(self.n)) + [TOP, BOTTOM]

    @cached_property
    def table(self) -> tuple[tuple[int, ...], ...]:
        # Rows -2 and -1 are the sink rows, so a StateRef indexes it directly.
        m = len(self.alphabet)
        return self.delta + ((BOTTOM,) * m, (TOP,) * m)

    @cached_property
    def accepting(self) -> tuple[bool, ...]:
        """Final-state membership indexed by StateRef (sinks by rule)."""
        if self.mode == PARITY:
            raise ModeError("parity automata have no final states; use view_as first")
        return tuple(q in self.final for q in range(self.n)) + (False, True)

    @cached_property
    def priorities(self) -> tuple[int, ...]:
        """Priority indexed by StateRef, reading F-modes as parity."""
        bottom, top = _SINK_PRIORITIES[self.mode]
        if self.mode == PARITY:
            plain = self.priority
        else:
            hi = 2
            lo = 3 if self.mode == COBUCHI else 1
            plain = tuple(hi if q in self.final else lo for q in range(self.n))
        return tuple(plain) + (bottom, top)

    @cached_property
    def symbol_index(self) -> dict[str, int]:
        return {s: k for k, s in enumerate(self.alphabet)}

    def is_final(self, q: int) -> bool:
        return self.accepting[q]

    def step(self, q: int, symbol: str) -> int:
        return self.table[q][self.symbol_index[symbol]]

    def with_initial(self, q: int) -> "Automaton":
        return replace(self, initial=q)

    def encode(self, word, what="word") -> list[int]:
        """Translate symbols to column indices, rejecting unknown symbols."""
        index = self.symbol_index
        out = []
        for pos, sym in enumerate(_words(word)):
            k = index.get(sym)
            if k is None:
                raise InputError(f"unknown symbol {sym!r} at {what} position {pos}")
            out.append(k)
        return out


# -- graph plumbing ---------------------------------------------------------


def strongly_connected_components(
    nodes: Iterable[Hashable], successors: Callable[[Hashable], Iterable[Hashable]]
) -> list[list]:
    """Tarjan's algorithm, iterative.

    Components come out in reverse topological order: every component is
    emitted after all components reachable from it.
    """
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    out: list[list] = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(successors(root)))]
        while work:
            v, it = work[-1]
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(successors(w))))
                    break
                if w in on_stack and index[w] < low[v]:
                    low[v] = index[w]
            else:
                work.pop()
                if work:
                    u = work[-1][0]
                    if low[v] < low[u]:
                        low[u] = low[v]
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack.discard(w)
                        comp.append(w)
                        if w == v:
                            break
                    out.append(comp)
    return out


def reachable_states(a: Automaton, start: int | None = None) -> list[int]:
    """Plain states reachable from ``start`` (default: initial), BFS order."""
    start = a.initial if start is None else start
    if start < 0:
        return []
    seen = {start}
    order = [start]
    queue = deque(order)
    table = a.table
    while queue:
        q = queue.popleft()
        for t in table[q]:
            if t >= 0 and t not in seen:
                seen.add(t)
                order.append(t)
                queue.append(t)
    return order


def _renumber(a: Automaton, keep: Sequence[int]) -> Automaton:
    new = {q: i for i, q in enumerate(keep)}
    new[TOP] = TOP
    new[BOTTOM] = BOTTOM
    delta = tuple(tuple(new[t] for t in a.delta[q]) for q in keep)
    if a.mode == PARITY:
        return replace(a, delta=delta, initial=new[a.initial],
                       priority=tuple(a.priority[q] for q in keep))
    return replace(a, delta=delta, initial=new[a.initial],
                   final=frozenset(new[q] for q in a.final if q in new))


def restrict_reachable(a: Automaton) -> Automaton:
    """Drop unreachable states, keeping the relative order of the rest."""
    keep = sorted(reachable_states(a))
    if len(keep) == a.n:
        return a
    return _renumber(a, keep)


def canonical(a: Automaton) -> Automaton:
    """Renumber reachable states by BFS discovery in alphabet order.

    Two automata are isomorphic (on their reachable parts) iff their
    canonical forms are equal.
    """
    return _renumber(a, reachable_states(a))


# -- runs -------------------------------------------------------------------


def run_finite(a: Automaton, word) -> tuple[int, bool]:
    """Run on a finite word; returns the end state and whether it accepts."""
    table = a.table
    q = a.initial
    for k in a.encode(word):
        q = table[q][k]
    return q, a.is_final(q)


def run_lasso(a: Automaton, lasso: Lasso) -> tuple[bool, int]:
    """Run on ``prefix . loop^omega``.

    Returns acceptance and the maximal priority on the state cycle that the
    run eventually repeats (Buchi read as {1, 2}, co-Buchi as {2, 3}).
    """
    if a.mode == FINITE:
        raise ModeError("run_lasso needs a Buchi, co-Buchi or parity automaton")
    table = a.table
    q = a.initial
    for k in a.encode(lasso.prefix, "prefix"):
        q = table[q][k]
    loop = a.encode(lasso.loop, "loop")
    pri = a.priorities
    m = len(loop)
    seen: dict[tuple[int, int], int] = {}
    trace: list[int] = []
    i = 0
    while q >= 0 and (q, i) not in seen:
        seen[q, i] = len(trace)
        trace.append(q)
        q = table[q][loop[i]]
        i = (i + 1) % m
    if q < 0:
        top = pri[q]
    else:
        top = max(pri[s] for s in trace[seen[q, i]:])
    return top % 2 == 0, top


# -- SCC view ---------------------------------------------------------------


@dataclass(frozen=True)
class SccDecomposition:
    """SCCs of the reachable part plus the two sinks.

    SCC ids are topological: plain SCCs get ids ``0..k-1`` with every
    transition going to an equal or larger id; TOP gets ``k`` and BOTTOM
    ``k+1``, and both share the maximal rank ``k``.
    """

    scc_of: dict[int, int]
    sccs: tuple[frozenset[int], ...]
    topo_rank: tuple[int, ...]
    trivial: tuple[bool, ...]

    def same_scc(self, p: int, q: int) -> bool:
        return self.scc_of[p] == self.scc_of[q]

    def rank(self, q: int) -> int:
        return self.topo_rank[self.scc_of[q]]


def scc_decompose(a: Automaton) -> SccDecomposition:
    table = a.table
    plain = reachable_states(a)
    comps = strongly_connected_components(
        plain, lambda q: [t for t in table[q] if t >= 0])
    comps.reverse()
    scc_of: dict[int, int] = {}
    sccs = []
    trivial = []
    for cid, comp in enumerate(comps):
        for q in comp:
            scc_of[q] = cid
        sccs.append(frozenset(comp))
        trivial.append(len(comp) == 1 and comp[0] not in table[comp[0]])
    k = len(comps)
    scc_of[TOP] = k
    scc_of[BOTTOM] = k + 1
    sccs += [frozenset([TOP]), frozenset([BOTTOM])]
    trivial += [False, False]
    ranks = tuple(range(k)) + (k, k)
    return SccDecomposition(scc_of, tuple(sccs), ranks, tuple(trivial))


# -- acceptance conversions -------------------------------------------------


def view_as(a: Automaton, mode: str) -> Automaton:
    """Re-label the acceptance condition; states and transitions are kept.

    F-modes convert into each other keeping F.  Into parity, Buchi maps
    F to 2 and the rest to 1, co-Buchi maps F to 2 and the rest to 3 (finite
    automata are read as Buchi).  Out of parity is allowed only when the
    priorities lie in {1, 2} or in {2, 3}; F is then the priority-2 states.
    """
    if mode not in MODES:
        raise ModeError(f"unknown acceptance mode {mode!r}")
    if mode == a.mode:
        return a
    if mode == PARITY:
        return replace(a, mode=PARITY, final=frozenset(), priority=a.priorities[:a.n])
    if a.mode == PARITY:
        image = set(a.priority)
        if not (image <= {1, 2} or image <= {2, 3}):
            raise ModeError(
                f"priorities {sorted(image)} do not fit {{1,2}} or {{2,3}}; "
                f"cannot view as {mode}")
        final = frozenset(q for q, p in enumerate(a.priority) if p == 2)
        return replace(a, mode=mode, final=final, priority=None)
    return replace(a, mode=mode)


def normalize_priorities(a: Automaton) -> Automaton:
    """Close gaps in the priority image without changing the language.

    While some ``p >= 2`` is unused but a larger priority is used, every
    priority above ``p`` drops by two.  Afterwards the maximal priority is at
    most ``n + 1``.
    """
    if a.mode != PARITY:
        raise ModeError("normalize_priorities needs a parity automaton")
    pri = list(a.priority)
    while pri:
        used = set(pri)
        gaps = [p for p in range(2, max(used)) if p not in used]
        if not gaps:
            break
        gap = gaps[0]
        pri = [p - 2 if p > gap else p for p in pri]
    return replace(a, priority=tuple(pri))
