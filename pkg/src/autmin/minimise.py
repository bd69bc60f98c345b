"""DFA minimisation, relative minimisation and omega-automaton reduction."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .core import (
    BOTTOM,
    BUCHI,
    COBUCHI,
    FINITE,
    PARITY,
    TOP,
    Automaton,
    SccDecomposition,
    canonical,
    reachable_states,
    restrict_reachable,
    scc_decompose,
    state_key,
    strongly_connected_components,
    view_as,
)
from .equiv import Partition, almost_equiv_quotient, omega_equiv, omega_equiv_quotient
from .errors import ModeError


def _require_f_mode(a: Automaton, *modes: str) -> None:
    if a.mode not in modes:
        raise ModeError(f"expected a {' or '.join(modes)} automaton, got {a.mode}")


# -- Hopcroft ---------------------------------------------------------------


def _hopcroft_blocks(a: Automaton, states: list[int]) -> list[int]:
    """Block number of each state under language equivalence."""
    pos = {q: i for i, q in enumerate(states)}
    m = len(a.alphabet)
    table = a.table
    inverse = [[[] for _ in states] for _ in range(m)]
    for i, q in enumerate(states):
        for k in range(m):
            inverse[k][pos[table[q][k]]].append(i)

    acc = a.accepting
    yes = [i for i, q in enumerate(states) if acc[q]]
    no = [i for i, q in enumerate(states) if not acc[q]]
    blocks = [set(b) for b in (yes, no) if b]
    block_of = [0] * len(states)
    for b, members in enumerate(blocks):
        for i in members:
            block_of[i] = b

    smaller = min(range(len(blocks)), key=lambda b: len(blocks[b]))
    work = {(smaller, k) for k in range(m)}
    while work:
        b, k = work.pop()
        splitter = set()
        for j in blocks[b]:
            splitter.update(inverse[k][j])
        touched: dict[int, set[int]] = {}
        for i in splitter:
            touched.setdefault(block_of[i], set()).add(i)
        for y, inside in touched.items():
            if len(inside) == len(blocks[y]):
                continue
            rest = blocks[y] - inside
            blocks[y] = rest
            new = len(blocks)
            blocks.append(inside)
            for i in inside:
                block_of[i] = new
            for c in range(m):
                if (y, c) in work:
                    work.add((new, c))
                else:
                    work.add((new, c) if len(inside) <= len(rest) else (y, c))
    return block_of


def hopcroft_min(a: Automaton) -> Automaton:
    """Minimal automaton for the finite-word language of ``a``.

    Works on the final states of any F-mode (the mode is kept).  States
    equivalent to TOP or BOTTOM collapse into that sink; the result is in
    canonical BFS numbering.
    """
    _require_f_mode(a, FINITE, BUCHI, COBUCHI)
    a = restrict_reachable(a)
    states = a.states()
    block_of = _hopcroft_blocks(a, states)
    top_block, bottom_block = block_of[-2], block_of[-1]
    rep: dict[int, int] = {}
    for i, q in enumerate(states):
        rep.setdefault(block_of[i], q)
    image = {}
    plain_blocks = [b for b in sorted(rep, key=lambda b: rep[b])
                    if b not in (top_block, bottom_block)]
    for new, b in enumerate(plain_blocks):
        image[b] = new
    image[top_block] = TOP
    image[bottom_block] = BOTTOM
    target = [image[block_of[i]] for i in range(len(states))]
    pos = {q: i for i, q in enumerate(states)}
    table = a.table
    delta = tuple(
        tuple(target[pos[t]] for t in table[rep[b]]) for b in plain_blocks)
    final = frozenset(image[b] for b in plain_blocks if a.accepting[rep[b]])
    return canonical(replace(a, delta=delta, initial=target[pos[a.initial]], final=final))


# -- Construction pipeline --------------------------------------------------


@dataclass(frozen=True)
class Ranking:
    """Topological rank of each state's SCC; the sinks rank above all."""

    rank: dict[int, int]

    def __getitem__(self, q: int) -> int:
        return self.rank[q]


def build_ranking(a: Automaton, scc: SccDecomposition | None = None) -> Ranking:
    scc = scc_decompose(a) if scc is None else scc
    return Ranking({q: scc.rank(q) for q in scc.scc_of})


def pick_representatives(partition: Partition, ranking: Ranking) -> dict[int, int]:
    """Per class, a member of maximal rank (smallest state on ties)."""
    return {
        c: min(members, key=lambda q: (-ranking[q], state_key(q)))
        for c, members in enumerate(partition.classes)
    }


def rewire(b: Automaton, partition: Partition, reps: dict[int, int],
           scc: SccDecomposition | None = None) -> Automaton:
    """Redirect transitions to class representatives.

    A transition ``q -> t`` is kept when ``q`` lies in the SCC of the
    representative of ``t``'s class, and goes to that representative
    otherwise.  The initial state becomes the representative of its class.
    """
    scc = scc_decompose(b) if scc is None else scc
    class_of = partition.class_of
    scc_of = scc.scc_of
    reachable = set(reachable_states(b))

    def target(q: int, t: int) -> int:
        r = reps[class_of[t]]
        return t if scc_of[q] == scc_of[r] else r

    delta = tuple(
        tuple(target(q, t) for t in row) if q in reachable else row
        for q, row in enumerate(b.delta))
    initial = reps[class_of[b.initial]]
    return replace(b, delta=delta, initial=initial)


def _construction(b: Automaton, partition: Partition) -> Automaton:
    scc = scc_decompose(b)
    reps = pick_representatives(partition, build_ranking(b, scc))
    return hopcroft_min(rewire(b, partition, reps, scc))


def relative_minimise(a: Automaton) -> Automaton:
    """A minimal automaton almost equivalent to ``a`` (read as a DFA)."""
    b = hopcroft_min(a)
    return _construction(b, almost_equiv_quotient(b))


def reduce_omega(a: Automaton) -> Automaton:
    """Language-preserving reduction of a Buchi or co-Buchi automaton.

    Same pipeline as :func:`relative_minimise`, with omega-language
    equivalence classes in place of almost equivalence.
    """
    _require_f_mode(a, BUCHI, COBUCHI)
    b = hopcroft_min(a)
    return _construction(b, omega_equiv_quotient(b))


# -- weak automata ----------------------------------------------------------


def is_weak(a: Automaton) -> bool:
    """Whether every reachable SCC is homogeneous in acceptance."""
    scc = scc_decompose(a)
    if a.mode == PARITY:
        label = a.priorities
    else:
        label = a.accepting
    return all(len({label[q] for q in comp}) == 1 for comp in scc.sccs)


def _has_cycle(nodes: set[int], table) -> bool:
    comps = strongly_connected_components(
        nodes, lambda q: [t for t in table[q] if t in nodes])
    return any(len(c) > 1 or c[0] in table[c[0]] for c in comps)


def normalize_weak_sccs(a: Automaton) -> Automaton:
    """Make every weak SCC uniformly accepting or rejecting.

    Buchi: an SCC whose non-final part is acyclic becomes all final.
    co-Buchi: an SCC whose final part is acyclic becomes all non-final.
    Trivial SCCs keep their flag.
    """
    _require_f_mode(a, BUCHI, COBUCHI)
    scc = scc_decompose(a)
    table = a.table
    final = set(a.final)
    for comp, trivial in zip(scc.sccs, scc.trivial):
        if trivial or min(comp) < 0:
            continue
        inside = set(comp) & final
        outside = set(comp) - final
        if not inside or not outside:
            continue
        if a.mode == BUCHI and not _has_cycle(outside, table):
            final |= outside
        elif a.mode == COBUCHI and not _has_cycle(inside, table):
            final -= inside
    return replace(a, final=frozenset(final))


def weak_minimise(a: Automaton, require_weak: bool = True) -> Automaton:
    """Minimal weak automaton for the language of ``a``."""
    _require_f_mode(a, BUCHI, COBUCHI)
    if require_weak and not is_weak(a):
        raise ModeError("automaton is not weak")
    b = normalize_weak_sccs(a)
    return view_as(relative_minimise(view_as(b, FINITE)), a.mode)


# -- greedy merging ---------------------------------------------------------


def merge_states(a: Automaton, p: int, q: int) -> Automaton:
    """Redirect every transition into ``p`` to ``q`` and delete ``p``."""

    def fix(t: int) -> int:
        if t == p:
            t = q
        return t - 1 if t > p else t

    keep = [s for s in range(a.n) if s != p]
    delta = tuple(tuple(fix(t) for t in a.delta[s]) for s in keep)
    out = replace(a, delta=delta, initial=fix(a.initial),
                  final=frozenset(fix(s) for s in a.final if s != p))
    if a.mode == PARITY:
        out = replace(out, priority=tuple(a.priority[s] for s in keep))
    return out


def greedy_merge(a: Automaton) -> Automaton:
    """Merge omega-equivalent states of one SCC while the language survives.

    Candidates ``(p, q)`` are scanned in ascending order; after a successful
    merge the scan restarts on the smaller automaton.
    """
    _require_f_mode(a, BUCHI, COBUCHI)
    current = restrict_reachable(a)
    while True:
        partition = omega_equiv_quotient(current)
        scc = scc_decompose(current)
        merged = None
        for p in range(current.n):
            for q in range(current.n):
                if p == q or not scc.same_scc(p, q) or not partition.same(p, q):
                    continue
                candidate = restrict_reachable(merge_states(current, p, q))
                if omega_equiv(current, candidate):
                    merged = candidate
                    break
            if merged is not None:
                break
        if merged is None:
            return current
        current = merged
