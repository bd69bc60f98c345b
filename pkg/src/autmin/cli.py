"""Command-line front end.

Exit codes: 0 success or affirmative verdict, 1 negative verdict, 2 usage or
input error, 3 brute-force budget exceeded.  ``-`` reads from stdin.
"""

from __future__ import annotations

import argparse
import sys

from .core import FINITE, scc_decompose, state_name
from .equiv import (
    almost_equiv_quotient,
    dfa_difference,
    omega_diff_nonempty,
    omega_difference,
    omega_equiv_quotient,
)
from .errors import AutminError, BudgetError
from .formats import (
    format_lasso,
    format_partition,
    parse_automaton,
    parse_graph,
    quote,
    serialise_automaton,
)
from .hardness import (
    NiceGraph,
    characteristic_dba,
    cover_via_minimisation,
    exact_min_dba,
    extract_cover,
    make_nice,
)
from .minimise import (
    greedy_merge,
    hopcroft_min,
    is_weak,
    normalize_weak_sccs,
    reduce_omega,
    relative_minimise,
)

OK, NEGATIVE, USAGE, BUDGET = 0, 1, 2, 3


class UsageError(AutminError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(USAGE, f"{self.prog}: {message}\n")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load(path: str):
    try:
        return parse_automaton(_read(path))
    except AutminError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _load_graph(path: str, nice: bool = True):
    try:
        g = parse_graph(_read(path))
    except AutminError as exc:
        raise UsageError(f"{path}: {exc}") from None
    if nice and not isinstance(g, NiceGraph):
        raise UsageError(f"{path}: graph has no initial vertex")
    return g


def _emit_automaton(a) -> int:
    sys.stdout.write(serialise_automaton(a))
    return OK


def _emit_vertices(vs) -> int:
    print(" ".join(vs))
    return OK


def cmd_info(args) -> int:
    a = _load(args.automaton)
    scc = scc_decompose(a)
    plain = sum(1 for comp in scc.sccs if min(comp) >= 0)
    print(f"states {a.n}")
    print("alphabet " + " ".join(quote(s) for s in a.alphabet))
    print(f"initial {state_name(a.initial)}")
    print(f"mode {a.mode}")
    print(f"sccs {plain}")
    print(f"weak {'yes' if is_weak(a) else 'no'}")
    return OK


def cmd_min_dfa(args) -> int:
    return _emit_automaton(hopcroft_min(_load(args.automaton)))


def cmd_rel_min(args) -> int:
    return _emit_automaton(relative_minimise(_load(args.automaton)))


def cmd_reduce(args) -> int:
    a = _load(args.automaton)
    if args.weak_normalize:
        a = normalize_weak_sccs(a)
    a = reduce_omega(a)
    if args.greedy:
        a = greedy_merge(a)
    return _emit_automaton(a)


def cmd_equiv(args) -> int:
    a, b = _load(args.left), _load(args.right)
    mode = args.mode
    if mode is None:
        mode = "finite" if a.mode == FINITE and b.mode == FINITE else "omega"
    if mode == "finite":
        word = dfa_difference(a, b)
        if word is None:
            return OK
        if args.witness:
            print(" ".join(quote(s) for s in word) if word else "ε", file=sys.stderr)
        return NEGATIVE
    witness = omega_difference(a, b)
    if witness is None:
        return OK
    if args.witness:
        print(format_lasso(witness.lasso), file=sys.stderr)
    return NEGATIVE


def cmd_diff(args) -> int:
    witness = omega_diff_nonempty(_load(args.left), _load(args.right))
    if witness is None:
        return NEGATIVE
    print(format_lasso(witness.lasso))
    return OK


def cmd_quotient(args) -> int:
    a = _load(args.automaton)
    part = almost_equiv_quotient(a) if args.relation == "almost" else omega_equiv_quotient(a)
    sys.stdout.write(format_partition(part))
    return OK


def cmd_gen_vc(args) -> int:
    g = _load_graph(args.graph, nice=not args.nice)
    if args.nice:
        g = make_nice(g)
    cover = g.vertices if args.cover is None else tuple(
        v for v in args.cover.split(",") if v)
    return _emit_automaton(characteristic_dba(g, cover))


def cmd_extract_cover(args) -> int:
    return _emit_vertices(extract_cover(_load(args.automaton), _load_graph(args.graph)))


def cmd_brute_min(args) -> int:
    found = exact_min_dba(_load(args.automaton), args.max)
    if found is None:
        print(f"no equivalent automaton with at most {args.max} states", file=sys.stderr)
        return NEGATIVE
    return _emit_automaton(found)


def cmd_cover(args) -> int:
    return _emit_vertices(cover_via_minimisation(_load_graph(args.graph)))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="autmin", description="Minimise and compare deterministic automata.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.set_defaults(func=func)
        return p

    p = add("info", cmd_info, "summarise an automaton")
    p.add_argument("automaton")
    p = add("min-dfa", cmd_min_dfa, "minimal DFA for the finite-word language")
    p.add_argument("automaton")
    p = add("rel-min", cmd_rel_min, "minimal almost-equivalent DFA")
    p.add_argument("automaton")
    p = add("reduce", cmd_reduce, "language-preserving Buchi/co-Buchi reduction")
    p.add_argument("automaton")
    p.add_argument("--greedy", action="store_true", help="then merge states greedily")
    p.add_argument("--weak-normalize", action="store_true",
                   help="first normalise weak SCCs")
    p = add("equiv", cmd_equiv, "exit 0 if equivalent, 1 otherwise")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--mode", choices=("finite", "omega"))
    p.add_argument("--witness", action="store_true",
                   help="print a distinguishing word on stderr")
    p = add("diff", cmd_diff, "print a lasso in L(A) minus L(B); exit 1 if none")
    p.add_argument("left")
    p.add_argument("right")
    p = add("quotient", cmd_quotient, "print state classes, one per line")
    p.add_argument("automaton")
    p.add_argument("--relation", choices=("almost", "omega"), default="almost")
    p = add("gen-vc", cmd_gen_vc, "Buchi automaton of a graph's characteristic language")
    p.add_argument("graph")
    p.add_argument("--cover", help="comma-separated vertex cover (default: all vertices)")
    p.add_argument("--nice", action="store_true", help="apply the hub/leaf gadget first")
    p = add("extract-cover", cmd_extract_cover, "vertices with an accepting v-state")
    p.add_argument("automaton")
    p.add_argument("graph")
    p = add("brute-min", cmd_brute_min, "exhaustive minimal Buchi automaton search")
    p.add_argument("automaton")
    p.add_argument("--max", type=int, required=True, metavar="N")
    p = add("cover", cmd_cover, "minimum vertex cover via automaton minimisation")
    p.add_argument("graph")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetError as exc:
        print(f"autmin: {exc}", file=sys.stderr)
        return BUDGET
    except AutminError as exc:
        print(f"autmin: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
