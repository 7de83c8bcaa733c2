"""Line-oriented text formats for every object the command line reads or writes.

Each file starts with a header naming its kind, followed by whitespace
separated decimal integers (``inf`` for infinity).  Blank lines and lines
starting with ``#`` are skipped when parsing; emitters never produce them, so
``emit(parse(text)) == text`` for any emitted text.

    tropical m n [int|inf]          then m rows of n entries
    minplus (eq|le) m n [int|inf]   then m rows of A, then m rows of B
    map nvars natoms                then lines ``atom z k t v1 o1 ... vt ot``
    mpg n1 n2 nE start              then nE lines ``u v w``
    graph n m                       then m lines ``u v``
    cert K                          then the witness line, ``blocks d`` with d
                                    lines of column indices, ``rows m`` and one
                                    line with the block index of every row
    vector n                        then one line of n entries

The optional domain tag is written only when it cannot be inferred (an
extended system without infinite entries).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

from .core import INF, Domain, Relation, TropicalSystem, TropkitError, TwoSidedSystem, Vector
from .dimension import BlockTriangularForm, DimensionCertificate, Graph
from .maxatom import MaxAtom, MaxAtomSystem
from .mpgame import MeanPayoffGame

_INT = re.compile(r"[-+]?[0-9]+\Z")


class ParseError(TropkitError, ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.msg = msg
        self.line = line
        self.col = col


@dataclass(frozen=True)
class _Tok:
    text: str
    line: int
    col: int


class _Lines:
    """Content lines as token lists, with positions for error messages."""

    def __init__(self, text: str):
        self.lines: List[List[_Tok]] = []
        for no, raw in enumerate(text.split("\n"), start=1):
            if not raw.strip() or raw.lstrip().startswith("#"):
                continue
            toks = [_Tok(m.group(), no, m.start() + 1) for m in re.finditer(r"\S+", raw)]
            self.lines.append(toks)
        self.pos = 0
        self.last = (len(text.split("\n")), 1)

    def next(self, what: str) -> List[_Tok]:
        if self.pos >= len(self.lines):
            raise ParseError(f"unexpected end of input, expected {what}", *self.last)
        self.pos += 1
        return self.lines[self.pos - 1]

    def done(self):
        if self.pos < len(self.lines):
            t = self.lines[self.pos][0]
            raise ParseError("unexpected trailing content", t.line, t.col)


def _int(tok: _Tok) -> int:
    if not _INT.match(tok.text):
        raise ParseError(f"expected an integer, got {tok.text!r}", tok.line, tok.col)
    return int(tok.text)


def _count(tok: _Tok, lo: int = 0) -> int:
    v = _int(tok)
    if v < lo:
        raise ParseError(f"expected a count of at least {lo}, got {v}", tok.line, tok.col)
    return v


def _entry(tok: _Tok, allow_inf: bool):
    if tok.text == "inf":
        if not allow_inf:
            raise ParseError("'inf' in an integer-domain file", tok.line, tok.col)
        return INF
    return _int(tok)


def _expect(toks: List[_Tok], n: int, what: str):
    if len(toks) != n:
        t = toks[min(n, len(toks) - 1)] if toks else None
        line, col = (t.line, t.col) if t else (0, 0)
        raise ParseError(f"{what}: expected {n} tokens, got {len(toks)}", line, col)


def _row(lines: _Lines, n: int, allow_inf: bool, what: str) -> Vector:
    toks = lines.next(what)
    _expect(toks, n, what)
    return tuple(_entry(t, allow_inf) for t in toks)


def _domain_tag(toks: List[_Tok], idx: int) -> Optional[Domain]:
    if len(toks) <= idx:
        return None
    t = toks[idx]
    if t.text not in ("int", "inf"):
        raise ParseError(f"unknown domain tag {t.text!r}", t.line, t.col)
    return Domain(t.text)


def _header(lines: _Lines, word: str, lo: int, hi: int) -> List[_Tok]:
    toks = lines.next(f"a '{word}' header")
    if toks[0].text != word:
        raise ParseError(f"expected '{word}', got {toks[0].text!r}", toks[0].line, toks[0].col)
    if not lo <= len(toks) - 1 <= hi:
        raise ParseError(f"malformed '{word}' header", toks[0].line, toks[0].col)
    return toks


# -- tropical and min-plus systems ---------------------------------------------------


def _parse_tropical(lines: _Lines) -> TropicalSystem:
    h = _header(lines, "tropical", 2, 3)
    m, n = _count(h[1]), _count(h[2], 1)
    domain = _domain_tag(h, 3)
    allow = domain is not Domain.INT
    rows = [_row(lines, n, allow, f"row {r + 1}") for r in range(m)]
    return TropicalSystem.of(rows, n, domain)


def _parse_minplus(lines: _Lines) -> TwoSidedSystem:
    h = _header(lines, "minplus", 3, 4)
    if h[1].text not in ("eq", "le"):
        raise ParseError(f"relation must be 'eq' or 'le', got {h[1].text!r}", h[1].line, h[1].col)
    m, n = _count(h[2]), _count(h[3], 1)
    domain = _domain_tag(h, 4)
    allow = domain is not Domain.INT
    lhs = [_row(lines, n, allow, f"left row {r + 1}") for r in range(m)]
    rhs = [_row(lines, n, allow, f"right row {r + 1}") for r in range(m)]
    return TwoSidedSystem.of(lhs, rhs, Relation(h[1].text), n, domain)


def _fmt(v) -> str:
    return "inf" if v is INF else str(v)


def _fmt_row(row) -> str:
    return " ".join(_fmt(v) for v in row)


def _tag(domain: Domain, has_inf: bool) -> str:
    return " inf" if domain is Domain.INT_INF and not has_inf else ""


def emit_tropical(A: TropicalSystem) -> str:
    out = [f"tropical {A.m} {A.ncols}{_tag(A.domain, A.has_inf)}"]
    out += [_fmt_row(r) for r in A.rows]
    return "\n".join(out) + "\n"


def emit_twosided(S: TwoSidedSystem) -> str:
    out = [f"minplus {S.relation.value} {S.m} {S.ncols}{_tag(S.domain, S.has_inf)}"]
    out += [_fmt_row(r) for r in S.lhs]
    out += [_fmt_row(r) for r in S.rhs]
    return "\n".join(out) + "\n"


# -- max-atom systems ------------------------------------------------------------------


def _parse_map(lines: _Lines) -> MaxAtomSystem:
    h = _header(lines, "map", 2, 2)
    nvars, natoms = _count(h[1]), _count(h[2])
    atoms = []
    for a in range(natoms):
        toks = lines.next(f"atom {a + 1}")
        if toks[0].text != "atom" or len(toks) < 4:
            raise ParseError("expected 'atom z k t ...'", toks[0].line, toks[0].col)
        z, k, t = _int(toks[1]), _int(toks[2]), _count(toks[3], 1)
        _expect(toks, 4 + 2 * t, f"atom {a + 1}")
        terms = [(_int(toks[4 + 2 * i]), _int(toks[5 + 2 * i])) for i in range(t)]
        for i, (v, _) in enumerate(terms + [(z, 0)]):
            if not 0 <= v < nvars:
                tok = toks[1] if i == t else toks[4 + 2 * i]
                raise ParseError(f"variable {v} out of range", tok.line, tok.col)
        atoms.append(MaxAtom.of(z, terms, k))
    return MaxAtomSystem.of(nvars, atoms)


def emit_map(S: MaxAtomSystem) -> str:
    out = [f"map {S.nvars} {len(S.atoms)}"]
    for a in S.atoms:
        terms = " ".join(f"{v} {o}" for v, o in a.terms)
        out.append(f"atom {a.target} {a.k} {len(a.terms)} {terms}")
    return "\n".join(out) + "\n"


# -- games and graphs ---------------------------------------------------------------------


def _parse_mpg(lines: _Lines) -> MeanPayoffGame:
    h = _header(lines, "mpg", 4, 4)
    n1, n2, ne, start = _count(h[1], 1), _count(h[2]), _count(h[3]), _count(h[4])
    edges = []
    for e in range(ne):
        toks = lines.next(f"edge {e + 1}")
        _expect(toks, 3, f"edge {e + 1}")
        edges.append(tuple(_int(t) for t in toks))
    try:
        return MeanPayoffGame.of(n1, n2, edges, start)
    except ValueError as exc:
        raise ParseError(str(exc), h[0].line, h[0].col) from None


def emit_mpg(g: MeanPayoffGame) -> str:
    out = [f"mpg {g.n1} {g.n2} {len(g.edges)} {g.start}"]
    out += [f"{u} {v} {w}" for u, v, w in g.edges]
    return "\n".join(out) + "\n"


def _parse_graph(lines: _Lines) -> Graph:
    h = _header(lines, "graph", 2, 2)
    n, m = _count(h[1]), _count(h[2])
    edges = []
    for e in range(m):
        toks = lines.next(f"edge {e + 1}")
        _expect(toks, 2, f"edge {e + 1}")
        edges.append((_int(toks[0]), _int(toks[1])))
    try:
        return Graph.of(n, edges)
    except ValueError as exc:
        raise ParseError(str(exc), h[0].line, h[0].col) from None


def emit_graph(G: Graph) -> str:
    out = [f"graph {G.n} {len(G.edges)}"]
    out += [f"{u} {v}" for u, v in G.edges]
    return "\n".join(out) + "\n"


# -- vectors and certificates -----------------------------------------------------------------


def emit_vector(x) -> str:
    return _fmt_row(x) + "\n"


def parse_vector_arg(text: str) -> Vector:
    """A comma separated vector such as ``0,1,inf``."""
    lines = _Lines(text.replace(",", " "))
    toks = lines.next("a vector")
    lines.done()
    return tuple(_entry(t, True) for t in toks)


def _parse_vector(lines: _Lines) -> Vector:
    h = _header(lines, "vector", 1, 1)
    return _row(lines, _count(h[1], 1), True, "the vector")


def emit_vector_file(x) -> str:
    return f"vector {len(x)}\n" + emit_vector(x)


def _parse_cert(lines: _Lines) -> DimensionCertificate:
    h = _header(lines, "cert", 1, 1)
    k = _int(h[1])
    w = lines.next("the witness line")
    witness = tuple(_entry(t, True) for t in w)
    b = _header(lines, "blocks", 1, 1)
    blocks_ = []
    for i in range(_count(b[1])):
        toks = lines.next(f"block {i + 1}")
        blocks_.append(tuple(_count(t) for t in toks))
    r = _header(lines, "rows", 1, 1)
    m = _count(r[1])
    assign: Tuple[int, ...] = ()
    if m:
        toks = lines.next("the row assignment")
        _expect(toks, m, "the row assignment")
        assign = tuple(_count(t) for t in toks)
    return DimensionCertificate(witness, BlockTriangularForm.of(blocks_, assign), k)


def emit_cert(c: DimensionCertificate) -> str:
    f = c.form
    out = [f"cert {c.claimed_k}", _fmt_row(c.witness), f"blocks {len(f.column_blocks)}"]
    out += [" ".join(str(v) for v in b) for b in f.column_blocks]
    out.append(f"rows {len(f.row_assignment)}")
    if f.row_assignment:
        out.append(" ".join(str(v) for v in f.row_assignment))
    return "\n".join(out) + "\n"


# -- dispatch -------------------------------------------------------------------------------------

Instance = Union[TropicalSystem, TwoSidedSystem, MaxAtomSystem, MeanPayoffGame, Graph, DimensionCertificate, Vector]

_PARSERS = {
    "tropical": _parse_tropical,
    "minplus": _parse_minplus,
    "map": _parse_map,
    "mpg": _parse_mpg,
    "graph": _parse_graph,
    "cert": _parse_cert,
    "vector": _parse_vector,
}


def parse(text: str, expect: Optional[str] = None) -> Instance:
    """Parse one instance; ``expect`` restricts the accepted header word."""
    lines = _Lines(text)
    if not lines.lines:
        raise ParseError("empty input", 1, 1)
    head = lines.lines[0][0]
    if head.text not in _PARSERS:
        raise ParseError(f"unknown file kind {head.text!r}", head.line, head.col)
    if expect is not None and head.text != expect:
        raise ParseError(f"expected a '{expect}' file, got '{head.text}'", head.line, head.col)
    try:
        obj = _PARSERS[head.text](lines)
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc), head.line, head.col) from None
    lines.done()
    return obj


def parse_matrix(text: str) -> TropicalSystem:
    return parse(text, "tropical")


def parse_twosided(text: str) -> TwoSidedSystem:
    return parse(text, "minplus")


def parse_map(text: str) -> MaxAtomSystem:
    return parse(text, "map")


def parse_mpg(text: str) -> MeanPayoffGame:
    return parse(text, "mpg")


def parse_graph(text: str) -> Graph:
    return parse(text, "graph")


def parse_certificate(text: str) -> DimensionCertificate:
    return parse(text, "cert")


emit_matrix = emit_tropical


def emit(obj: Instance) -> str:
    if isinstance(obj, TropicalSystem):
        return emit_tropical(obj)
    if isinstance(obj, TwoSidedSystem):
        return emit_twosided(obj)
    if isinstance(obj, MaxAtomSystem):
        return emit_map(obj)
    if isinstance(obj, MeanPayoffGame):
        return emit_mpg(obj)
    if isinstance(obj, Graph):
        return emit_graph(obj)
    if isinstance(obj, DimensionCertificate):
        return emit_cert(obj)
    if isinstance(obj, tuple):
        return emit_vector_file(obj)
    raise TypeError(f"cannot emit {type(obj).__name__}")
