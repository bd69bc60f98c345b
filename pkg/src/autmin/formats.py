"""Text formats for automata, graphs, lassos and partitions.

Automaton documents::

    daut 1
    alphabet a b
    states 2
    initial 0
    acceptance buchi 1
    trans 0 a 1
    ...

``#`` starts a comment outside double quotes.  A quoted token may contain
any character; ``\\#``, ``\\"``, ``\\\\`` and ``\\n`` are escapes, so the
stop symbol of the vertex-cover automata is written ``"\\#"``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import BOTTOM, MODES, PARITY, TOP, Automaton, Lasso, state_key, state_name
from .equiv import Partition
from .errors import InputError, ParseError
from .hardness import Graph, NiceGraph

HEADER = ("daut", "1")

_ESCAPES = {"#": "#", '"': '"', "\\": "\\", "n": "\n"}
_UNESCAPES = {"\\": "\\\\", '"': '\\"', "#": "\\#", "\n": "\\n"}


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    column: int
    quoted: bool = False


def tokenize_line(line: str, lineno: int, comments: bool = True,
                  separators: str = "") -> list[Token]:
    """Split one line into tokens, honouring quotes and ``#`` comments.

    Characters in ``separators`` form tokens of their own when unquoted.
    """
    tokens: list[Token] = []
    i, n = 0, len(line)
    while i < n:
        c = line[i]
        if c.isspace():
            i += 1
        elif comments and c == "#":
            break
        elif c in separators:
            tokens.append(Token(c, lineno, i + 1))
            i += 1
        elif c == '"':
            start = i
            i += 1
            chars = []
            while True:
                if i >= n:
                    raise ParseError("unterminated quoted token", lineno, start + 1)
                c = line[i]
                if c == '"':
                    i += 1
                    break
                if c == "\\":
                    if i + 1 >= n or line[i + 1] not in _ESCAPES:
                        raise ParseError("bad escape in quoted token", lineno, i + 1)
                    chars.append(_ESCAPES[line[i + 1]])
                    i += 2
                else:
                    chars.append(c)
                    i += 1
            if not chars:
                raise ParseError("empty quoted token", lineno, start + 1)
            tokens.append(Token("".join(chars), lineno, start + 1, quoted=True))
        else:
            start = i
            while i < n and not line[i].isspace() and line[i] not in separators:
                if line[i] == '"' or (comments and line[i] == "#"):
                    break
                i += 1
            tokens.append(Token(line[start:i], lineno, start + 1))
    return tokens


def _lines(text: str, **kw) -> list[list[Token]]:
    out = []
    for lineno, line in enumerate(_split(text), start=1):
        tokens = tokenize_line(line, lineno, **kw)
        if tokens:
            out.append(tokens)
    return out


def quote(sym: str, plain_ok: str = "") -> str:
    """Render a symbol, quoting it unless it is a safe bare word."""
    special = set('"\\#;') - set(plain_ok)
    if sym and not any(c.isspace() or c in special for c in sym):
        return sym
    return '"' + "".join(_UNESCAPES.get(c, c) for c in sym) + '"'


def _split(text: str) -> list[str]:
    # only "\n" ends a line; str.splitlines would also split inside quotes
    lines = text.split("\n")
    if lines[-1] == "":
        lines.pop()
    return lines


def _end_line(text: str) -> int:
    return max(1, len(_split(text)))


# -- automata -----------------------------------------------------------------


def _int(tok: Token, what: str) -> int:
    if tok.quoted or not tok.text.isdigit():
        raise ParseError(f"{what} must be a non-negative integer, got {tok.text!r}",
                         tok.line, tok.column)
    return int(tok.text)


def _state(tok: Token, n: int, sinks: bool = True) -> int:
    if sinks and not tok.quoted and tok.text in ("TOP", "BOT"):
        return TOP if tok.text == "TOP" else BOTTOM
    q = _int(tok, "state")
    if q >= n:
        raise ParseError(f"state {q} out of range (states {n})", tok.line, tok.column)
    return q


def _arity(tokens: list[Token], count: int, usage: str) -> None:
    if len(tokens) != count:
        where = tokens[count] if len(tokens) > count else tokens[-1]
        raise ParseError(f"expected `{usage}`", where.line, where.column)


def parse_automaton(text: str) -> Automaton:
    """Parse an automaton document; errors carry line and column."""
    lines = _lines(text)
    if not lines:
        raise ParseError("empty document, expected `daut 1`", 1)
    head = lines[0]
    if tuple(t.text for t in head) != HEADER or any(t.quoted for t in head):
        raise ParseError("expected header `daut 1`", head[0].line, head[0].column)

    alphabet: list[str] | None = None
    n: int | None = None
    initial = None
    mode = None
    final: set[int] = set()
    priority: list[int] | None = None
    delta: dict[tuple[int, int], int] = {}
    seen: dict[str, int] = {}

    def need(what: str, tok: Token, value) -> None:
        if value is None:
            raise ParseError(f"`{tok.text}` before `{what}`", tok.line, tok.column)

    for tokens in lines[1:]:
        key = tokens[0]
        word = key.text if not key.quoted else ""
        if word in seen and word != "trans":
            raise ParseError(f"duplicate `{word}` directive (first on line {seen[word]})",
                             key.line, key.column)
        if word == "alphabet":
            if len(tokens) < 2:
                raise ParseError("alphabet needs at least one symbol", key.line, key.column)
            alphabet = []
            for tok in tokens[1:]:
                if tok.text in alphabet:
                    raise ParseError(f"duplicate symbol {tok.text!r}", tok.line, tok.column)
                alphabet.append(tok.text)
        elif word == "states":
            _arity(tokens, 2, "states <n>")
            n = _int(tokens[1], "state count")
        elif word == "initial":
            need("states", key, n)
            _arity(tokens, 2, "initial <state|TOP|BOT>")
            initial = _state(tokens[1], n)
        elif word == "acceptance":
            need("states", key, n)
            if len(tokens) < 2 or tokens[1].text not in MODES or tokens[1].quoted:
                where = tokens[1] if len(tokens) > 1 else key
                raise ParseError("acceptance mode must be one of " + ", ".join(MODES),
                                 where.line, where.column)
            mode = tokens[1].text
            if mode == PARITY:
                if len(tokens) - 2 != n:
                    where = tokens[-1]
                    raise ParseError(f"parity acceptance needs {n} priorities, got "
                                     f"{len(tokens) - 2}", where.line, where.column)
                priority = []
                for tok in tokens[2:]:
                    p = _int(tok, "priority")
                    if p > n + 1:
                        raise ParseError(f"priority {p} exceeds n+1 = {n + 1}",
                                         tok.line, tok.column)
                    priority.append(p)
            else:
                for tok in tokens[2:]:
                    q = _state(tok, n, sinks=False)
                    if q in final:
                        raise ParseError(f"state {q} listed twice", tok.line, tok.column)
                    final.add(q)
        elif word == "trans":
            need("states", key, n)
            need("alphabet", key, alphabet)
            _arity(tokens, 4, "trans <state> <sym> <state|TOP|BOT>")
            q = _state(tokens[1], n, sinks=False)
            sym = tokens[2]
            if sym.text not in alphabet:
                raise ParseError(f"unknown symbol {sym.text!r}", sym.line, sym.column)
            k = alphabet.index(sym.text)
            if (q, k) in delta:
                raise ParseError(f"duplicate transition for state {q} on {sym.text!r}",
                                 key.line, key.column)
            delta[q, k] = _state(tokens[3], n)
        else:
            raise ParseError(f"unknown directive {key.text!r}", key.line, key.column)
        seen.setdefault(word, key.line)

    end = _end_line(text)
    for what, value in (("alphabet", alphabet), ("states", n),
                        ("initial", initial), ("acceptance", mode)):
        if value is None:
            raise ParseError(f"missing `{what}` directive", end)
    for q in range(n):
        for k, sym in enumerate(alphabet):
            if (q, k) not in delta:
                raise ParseError(f"missing transition for state {q} on symbol {sym!r}", end)
    rows = tuple(tuple(delta[q, k] for k in range(len(alphabet))) for q in range(n))
    try:
        return Automaton(tuple(alphabet), rows, initial, mode, frozenset(final),
                         tuple(priority) if priority is not None else None)
    except InputError as exc:
        raise ParseError(str(exc), end) from None


def serialise_automaton(a: Automaton) -> str:
    """Canonical document: sorted alphabet, transitions by (state, symbol)."""
    out = ["daut 1",
           "alphabet " + " ".join(quote(s) for s in a.alphabet),
           f"states {a.n}",
           f"initial {state_name(a.initial)}"]
    if a.mode == PARITY:
        out.append(" ".join(["acceptance", PARITY] + [str(p) for p in a.priority]))
    else:
        out.append(" ".join(["acceptance", a.mode] + [str(q) for q in sorted(a.final)]))
    for q, row in enumerate(a.delta):
        for sym, t in zip(a.alphabet, row):
            out.append(f"trans {q} {quote(sym)} {state_name(t)}")
    return "\n".join(out) + "\n"


# -- graphs -------------------------------------------------------------------


def parse_graph(text: str) -> Graph:
    """Parse a graph document; with an ``initial`` line the result is a
    :class:`NiceGraph` and niceness is checked."""
    lines = _lines(text)
    if not lines or [t.text for t in lines[0]] != ["graph"]:
        where = lines[0][0] if lines else Token("", 1, 1)
        raise ParseError("expected header `graph`", where.line, where.column)
    vertices: list[str] | None = None
    initial: Token | None = None
    edges: set[tuple[str, str]] = set()
    for tokens in lines[1:]:
        key = tokens[0]
        if key.text == "vertices":
            if vertices is not None:
                raise ParseError("duplicate `vertices` directive", key.line, key.column)
            if len(tokens) < 2:
                raise ParseError("vertices needs at least one name", key.line, key.column)
            vertices = []
            for tok in tokens[1:]:
                if tok.text in vertices:
                    raise ParseError(f"duplicate vertex {tok.text!r}", tok.line, tok.column)
                if tok.text in (";", "#"):
                    raise ParseError(f"reserved vertex name {tok.text!r}",
                                     tok.line, tok.column)
                vertices.append(tok.text)
        elif key.text in ("initial", "edge"):
            if vertices is None:
                raise ParseError(f"`{key.text}` before `vertices`", key.line, key.column)
            if key.text == "initial":
                if initial is not None:
                    raise ParseError("duplicate `initial` directive", key.line, key.column)
                _arity(tokens, 2, "initial <vertex>")
                initial = tokens[1]
                names = [initial]
            else:
                _arity(tokens, 3, "edge <u> <v>")
                names = tokens[1:]
            for tok in names:
                if tok.text not in vertices:
                    raise ParseError(f"unknown vertex {tok.text!r}", tok.line, tok.column)
            if key.text == "edge":
                u, v = tokens[1].text, tokens[2].text
                if u == v:
                    raise ParseError(f"self-loop on {u!r}", key.line, key.column)
                e = (u, v) if u <= v else (v, u)
                if e in edges:
                    raise ParseError(f"duplicate edge {u} {v}", key.line, key.column)
                edges.add(e)
        else:
            raise ParseError(f"unknown directive {key.text!r}", key.line, key.column)
    if vertices is None:
        raise ParseError("missing `vertices` directive", _end_line(text))
    if initial is None:
        return Graph(tuple(vertices), frozenset(edges))
    try:
        return NiceGraph(tuple(vertices), frozenset(edges), initial.text)
    except InputError as exc:
        raise ParseError(f"not a nice graph: {exc}", initial.line, initial.column) from None


def serialise_graph(g: Graph) -> str:
    pos = {v: i for i, v in enumerate(g.vertices)}
    out = ["graph", "vertices " + " ".join(g.vertices)]
    if isinstance(g, NiceGraph):
        out.append(f"initial {g.initial}")
    ordered = sorted((tuple(sorted(e, key=pos.__getitem__)) for e in g.edges),
                     key=lambda e: (pos[e[0]], pos[e[1]]))
    out.extend(f"edge {u} {v}" for u, v in ordered)
    return "\n".join(out) + "\n"


# -- lassos -------------------------------------------------------------------


def parse_lasso(text: str) -> Lasso:
    """Parse ``<sym>* ; <sym>+``.  ``#`` is an ordinary symbol here."""
    lines = _lines(text, comments=False, separators=";")
    if not lines:
        raise ParseError("empty lasso", 1)
    if len(lines) > 1:
        raise ParseError("a lasso is written on one line", lines[1][0].line)
    tokens = lines[0]
    seps = [t for t in tokens if t.text == ";" and not t.quoted]
    if len(seps) != 1:
        where = seps[1] if len(seps) > 1 else tokens[-1]
        raise ParseError("a lasso needs exactly one `;`", where.line, where.column)
    cut = tokens.index(seps[0])
    prefix = tuple(t.text for t in tokens[:cut])
    loop = tuple(t.text for t in tokens[cut + 1:])
    if not loop:
        raise ParseError("empty loop", seps[0].line, seps[0].column)
    return Lasso(prefix, loop)


def format_lasso(lasso: Lasso) -> str:
    syms = [quote(s, plain_ok="#") for s in lasso.prefix] + [";"]
    syms += [quote(s, plain_ok="#") for s in lasso.loop]
    return " ".join(syms)


# -- partitions -----------------------------------------------------------------


def _parse_state_name(tok: Token) -> int:
    if tok.text == "TOP":
        return TOP
    if tok.text == "BOT":
        return BOTTOM
    return _int(tok, "state")


def parse_partition(text: str) -> Partition:
    """One class per line; members are state indices, TOP or BOT."""
    classes = []
    seen: set[int] = set()
    for tokens in _lines(text):
        members = []
        for tok in tokens:
            q = _parse_state_name(tok)
            if q in seen:
                raise ParseError(f"state {tok.text} in two classes", tok.line, tok.column)
            seen.add(q)
            members.append(q)
        classes.append(tuple(sorted(members, key=state_key)))
    classes.sort(key=lambda c: state_key(c[0]))
    return Partition(tuple(classes))


def format_partition(p: Partition) -> str:
    return "".join(" ".join(state_name(q) for q in members) + "\n"
                   for members in p.classes)
