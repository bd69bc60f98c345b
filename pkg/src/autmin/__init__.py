"""Minimisation and reduction of deterministic automata on finite and infinite words."""

from .core import (
    BOTTOM,
    BUCHI,
    COBUCHI,
    FINITE,
    PARITY,
    TOP,
    Automaton,
    Lasso,
    normalize_priorities,
    restrict_reachable,
    run_finite,
    run_lasso,
    scc_decompose,
    view_as,
)
from .equiv import (
    DiffWitness,
    Partition,
    almost_equiv_quotient,
    almost_equivalent,
    buchi_diff_states,
    dfa_equiv,
    omega_diff_nonempty,
    omega_equiv,
    omega_equiv_quotient,
)
from .errors import AutminError, BudgetError, InputError, ModeError, ParseError
from .formats import (
    format_lasso,
    format_partition,
    parse_automaton,
    parse_graph,
    parse_lasso,
    parse_partition,
    serialise_automaton,
    serialise_graph,
)
from .hardness import (
    Graph,
    NiceGraph,
    characteristic_dba,
    characteristic_member,
    cover_via_minimisation,
    exact_min_dba,
    extract_cover,
    make_nice,
    min_cover_bruteforce,
)
from .minimise import (
    greedy_merge,
    hopcroft_min,
    is_weak,
    normalize_weak_sccs,
    reduce_omega,
    relative_minimise,
    weak_minimise,
)

__version__ = "0.1.0"
