"""Local and global dimension of solution sets through block triangular forms
of star tables, dimension certificates, vertex-cover instance generators and
tropical rank.

Dimensions are projective unless a function says otherwise; the affine
dimension is one larger.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ._grid import blocks, dtype_for, minplus_mask, tropical_mask
from .core import (
    INF,
    BudgetExceeded,
    InvalidSolutionError,
    PreconditionError,
    Relation,
    ShapeError,
    StarTable,
    TropicalSystem,
    TwoSidedSystem,
    Vector,
    as_vector,
    is_solution,
    max_entry,
    normalize,
    normalize_twosided,
)

BTF_CAP = 16
GRID_CAP = 10**8

System = Union[TropicalSystem, TwoSidedSystem]


class Kind(enum.Enum):
    TROPICAL = "tropical"
    MINPLUS_EQ = "minplus-eq"
    MINPLUS_INEQ = "minplus-ineq"


class Convention(enum.Enum):
    AFFINE = "affine"
    PROJECTIVE = "projective"


def kind_of(system: System) -> Kind:
    if isinstance(system, TropicalSystem):
        return Kind.TROPICAL
    return Kind.MINPLUS_EQ if system.relation is Relation.EQ else Kind.MINPLUS_INEQ


@dataclass(frozen=True)
class BlockTriangularForm:
    """Ordered column blocks and, for every table row, the index of its block."""

    column_blocks: Tuple[Tuple[int, ...], ...]
    row_assignment: Tuple[int, ...]

    @classmethod
    def of(cls, column_blocks, row_assignment) -> "BlockTriangularForm":
        return cls(tuple(tuple(b) for b in column_blocks), tuple(row_assignment))

    @property
    def size(self) -> int:
        return len(self.column_blocks)


# -- star masks -------------------------------------------------------------------


def _row_masks(t: StarTable) -> List[Tuple[int, int]]:
    """Per row, bit masks of starred variables in the A-part and the B-part.

    For a plain tropical table everything is in the A-part.
    """
    n = t.ncols
    out = []
    for row in t.stars:
        a = sum(1 << j for j in range(n) if row[j])
        b = sum(1 << j for j in range(n) if t.split is not None and row[n + j])
        out.append((a, b))
    return out


def _cond_holds(a: int, b: int, block: int, kind: Kind) -> bool:
    sa, sb = a & block, b & block
    if kind is Kind.TROPICAL:
        return bin(sa).count("1") >= 2
    if kind is Kind.MINPLUS_EQ:
        return sa != 0 and sb != 0
    return sb == 0 or sa != 0


def _check_form(t: StarTable, f: BlockTriangularForm):
    cols = [c for b in f.column_blocks for c in b]
    if any(len(b) == 0 for b in f.column_blocks):
        raise ValueError("empty column block")
    if sorted(cols) != list(range(t.ncols)):
        raise ValueError("column blocks do not partition the columns")
    if len(f.row_assignment) != t.nrows:
        raise ValueError("row assignment does not cover every row")
    if any(not 0 <= i < f.size for i in f.row_assignment):
        raise ValueError("row assigned to a missing block")


def _row_ok(a: int, b: int, masks: Sequence[int], i: int, kind: Kind) -> bool:
    if a == 0 and b == 0:
        return True
    if not _cond_holds(a, b, masks[i], kind):
        return False
    later = 0
    for m in masks[i + 1:]:
        later |= m
    return (a | b) & later == 0


def verify_btf(t: StarTable, f: BlockTriangularForm, kind: Kind = Kind.TROPICAL) -> bool:
    """Check both conditions of a block triangular form row by row.

    A row in block i needs (1) the kind's star condition inside ``C_i``
    (two stars; a star in each part; a B-part star only together with an
    A-part star) and (2) no star in any later block, in either part.  Rows
    without stars impose nothing.
    """
    _check_form(t, f)
    masks = [sum(1 << c for c in b) for b in f.column_blocks]
    return all(_row_ok(a, b, masks, i, kind) for (a, b), i in zip(_row_masks(t), f.row_assignment))


def _assign_rows(rows, masks: Sequence[int], kind: Kind) -> Tuple[int, ...]:
    """Each starred row goes to the block of its last star when that works,
    otherwise (possible only for inequality tables) to the final block."""
    d = len(masks)
    out = []
    for a, b in rows:
        s = a | b
        if s == 0:
            out.append(d - 1)
            continue
        last = max(i for i in range(d) if s & masks[i])
        out.append(last if _cond_holds(a, b, masks[last], kind) else d - 1)
    return tuple(out)


def _max_btf_masks(rows: Tuple[Tuple[int, int], ...], n: int, kind: Kind):
    """Dynamic program over the set P of columns already placed.

    In a valid form every starred row sits in the block holding its last star
    (an inequality row may also sit later, where condition (1) is vacuous), so
    appending block T to prefix P is allowed iff every row whose stars lie in
    ``P | T`` and meet T satisfies condition (1) on T.  For inequality tables
    only the final block is checked.
    """
    full = (1 << n) - 1
    rows = [(a, b) for a, b in rows if a | b]

    def valid(P: int, T: int) -> bool:
        PT = P | T
        if kind is Kind.MINPLUS_INEQ and PT != full:
            return True
        for a, b in rows:
            s = a | b
            if s & T and s & ~PT == 0 and not _cond_holds(a, b, T, kind):
                return False
        return True

    NEG = -1

    @lru_cache(maxsize=None)
    def best(P: int) -> int:
        if P == full:
            return 0
        rest = full & ~P
        out = NEG
        T = rest
        while T:
            if valid(P, T):
                sub = best(P | T)
                if sub != NEG and sub + 1 > out:
                    out = sub + 1
            T = (T - 1) & rest
        return out

    top = best(0)
    if top == NEG:
        return 0, None
    blocks_: List[Tuple[int, ...]] = []
    P = 0
    while P != full:
        rest = full & ~P
        target = best(P)
        choices = []
        T = rest
        while T:
            if valid(P, T) and best(P | T) == target - 1:
                choices.append(tuple(c for c in range(n) if T >> c & 1))
            T = (T - 1) & rest
        pick = min(choices)
        blocks_.append(pick)
        P |= sum(1 << c for c in pick)
    return top, tuple(blocks_)


def max_btf(t: StarTable, kind: Kind = Kind.TROPICAL, cap: int = BTF_CAP) -> Tuple[int, Optional[BlockTriangularForm]]:
    """Largest block triangular form and a witness; ``(0, None)`` if none exists.

    Among maximum forms the witness has the lexicographically smallest
    sequence of (sorted) column blocks.
    """
    if t.ncols > cap:
        raise BudgetExceeded(f"{t.ncols} columns exceeds the form-search cap {cap}")
    rows = tuple(_row_masks(t))
    size, blocks_ = _max_btf_masks(rows, t.ncols, kind)
    if blocks_ is None:
        return 0, None
    masks = [sum(1 << c for c in b) for b in blocks_]
    form = BlockTriangularForm(blocks_, _assign_rows(rows, masks, kind))
    assert verify_btf(t, form, kind)
    return size, form


def ordered_partitions(n: int):
    """Every ordered partition of ``range(n)`` into nonempty blocks."""
    for d in range(1, n + 1):
        for labels in itertools.product(range(d), repeat=n):
            if len(set(labels)) != d:
                continue
            yield tuple(tuple(c for c in range(n) if labels[c] == i) for i in range(d))


def naive_max_btf(t: StarTable, kind: Kind = Kind.TROPICAL) -> int:
    """Maximum form size by trying every ordered partition and, for each row,
    every block it could be assigned to."""
    best = 0
    rows = _row_masks(t)
    for parts in ordered_partitions(t.ncols):
        masks = [sum(1 << c for c in b) for b in parts]
        assignment = []
        for a, b in rows:
            ok = [i for i in range(len(parts)) if _row_ok(a, b, masks, i, kind)]
            if not ok:
                break
            assignment.append(ok[0])
        else:
            form = BlockTriangularForm(parts, tuple(assignment))
            if verify_btf(t, form, kind):
                best = max(best, form.size)
    return best


# -- star tables of shifted systems ----------------------------------------------------


def _finite_coords(x: Vector) -> Tuple[int, ...]:
    return tuple(j for j, v in enumerate(x) if v is not INF)


def _stars_of(vals: Sequence) -> Tuple[bool, ...]:
    low = min(vals) if vals else INF
    if low is INF:
        return tuple(False for _ in vals)
    return tuple(v == low for v in vals)


def local_star_table(system: System, x) -> Tuple[StarTable, Tuple[int, ...]]:
    """Star table of the system translated by x, on x's finite coordinates.

    Returns the table and the original indices of its columns.  Every row of
    the system keeps its place; rows that become entirely infinite have no
    stars.
    """
    x = as_vector(x)
    F = _finite_coords(x)
    if isinstance(system, TropicalSystem):
        stars = tuple(_stars_of([row[j] + x[j] for j in F]) for row in system.rows)
        return StarTable(stars, len(F)), F
    stars = tuple(
        _stars_of([a[j] + x[j] for j in F] + [b[j] + x[j] for j in F]) for a, b in zip(system.lhs, system.rhs)
    )
    return StarTable(stars, 2 * len(F), split=len(F)), F


def _to_original(form: BlockTriangularForm, F: Sequence[int]) -> BlockTriangularForm:
    return BlockTriangularForm(tuple(tuple(F[c] for c in b) for b in form.column_blocks), form.row_assignment)


def local_form(system: System, x, kind: Optional[Kind] = None) -> Tuple[int, BlockTriangularForm]:
    """Largest form at the solution x, with blocks in original column indices."""
    kind = kind or kind_of(system)
    x = as_vector(x)
    if not is_solution(system, x):
        raise InvalidSolutionError("x is not a solution")
    t, F = local_star_table(system, x)
    size, form = max_btf(t, kind)
    if form is None:
        raise PreconditionError("no block triangular form at this point")
    return size, _to_original(form, F)


def local_dimension(system: System, x, kind: Optional[Kind] = None) -> int:
    """Projective dimension of the solution set near the solution x."""
    size, _ = local_form(system, x, kind)
    return size - 1


# -- global dimension -----------------------------------------------------------------


@dataclass(frozen=True)
class DimensionWitness:
    dimension: int
    point: Vector
    form: BlockTriangularForm


def _grid_star_keys(system: System, pts: np.ndarray, width: int) -> np.ndarray:
    """Star rows of every point packed into integer keys, shape (points, rows)."""
    if isinstance(system, TropicalSystem):
        rows = [tuple(r) for r in system.rows]
    else:
        rows = [tuple(a) + tuple(b) for a, b in zip(system.lhs, system.rhs)]
    n = pts.shape[1]
    keys = np.zeros((len(pts), len(rows)), dtype=np.int64)
    for r, row in enumerate(rows):
        cols = [j for j, v in enumerate(row) if v is not INF]
        if not cols:
            continue
        coef = np.array([row[j] for j in cols], dtype=pts.dtype)
        vals = pts[:, [j % n for j in cols]] + coef
        hit = vals == vals.min(axis=1)[:, None]
        weights = np.array([1 << j for j in cols], dtype=np.int64)
        keys[:, r] = (hit.astype(np.int64) * weights).sum(axis=1)
    return keys


def _restricted(system: System, F: Sequence[int]) -> System:
    if isinstance(system, TropicalSystem):
        return TropicalSystem.of([tuple(r[j] for j in F) for r in system.rows], len(F), system.domain)
    return TwoSidedSystem.of(
        [tuple(r[j] for j in F) for r in system.lhs],
        [tuple(r[j] for j in F) for r in system.rhs],
        system.relation,
        len(F),
        system.domain,
    )


def grid_bound(system: System) -> int:
    """Coordinate bound of the global search for a row-normalized system.

    Tropical systems: vertices of the solution cells are integer points with
    spread at most M n, and the maximum local dimension is reached at a
    vertex.  Min-plus systems: ``(M + 1) n``.
    """
    M = max_entry(system)
    n = system.ncols
    if isinstance(system, TropicalSystem):
        return max(1, M) * n
    return (M + 1) * n


def _search_finite(system: System, kind: Kind, cap: int, bound: Optional[int] = None) -> Optional[Tuple[int, Vector]]:
    """Best (form size, point) over projective grid points of a system
    whose solutions are sought with every coordinate finite."""
    n = system.ncols
    if bound is None:
        bound = grid_bound(system)
    if (bound + 1) ** n > cap:
        raise BudgetExceeded(f"global search over {(bound + 1) ** n} points exceeds the cap {cap}")
    rows_all = system.rows if isinstance(system, TropicalSystem) else system.lhs + system.rhs
    dtype = dtype_for(rows_all, bound)
    width = n if isinstance(system, TropicalSystem) else 2 * n
    memo: Dict[Tuple[int, ...], int] = {}
    best = None
    for pts in blocks(n, 0, bound, dtype):
        pts = pts[pts.min(axis=1) == 0]
        if isinstance(system, TropicalSystem):
            pts = pts[tropical_mask(system.rows, pts)]
        else:
            pts = pts[minplus_mask(system, pts)]
        if len(pts) == 0:
            continue
        keys = _grid_star_keys(system, pts, width)
        uniq, first = np.unique(keys, axis=0, return_index=True)
        for key, idx in sorted(zip(map(tuple, uniq.tolist()), first.tolist()), key=lambda t: t[1]):
            if key not in memo:
                t = _table_from_key(key, n, width)
                memo[key] = max_btf(t, kind)[0]
            size = memo[key]
            point = tuple(int(v) for v in pts[idx])
            if best is None or size > best[0] or (size == best[0] and point < best[1]):
                best = (size, point)
    return best


def _table_from_key(key, n: int, width: int) -> StarTable:
    stars = tuple(tuple(bool(k >> j & 1) for j in range(width)) for k in key)
    return StarTable(stars, width, split=None if width == n else n)


def global_witness(
    system: System, kind: Optional[Kind] = None, cap: int = GRID_CAP, bound: Optional[int] = None
) -> Optional[DimensionWitness]:
    """A point of largest local dimension, or None for unsolvable systems.

    Rows are normalized first (this does not change solutions).  Over Z with
    infinity every set F of finite coordinates is searched separately.
    ``bound`` overrides the coordinate bound of :func:`grid_bound`.
    """
    kind = kind or kind_of(system)
    if isinstance(system, TropicalSystem):
        base, _ = normalize(system)
    else:
        base, _ = normalize_twosided(system)
    n = system.ncols
    if not system.has_inf:
        subsets = [tuple(range(n))]
    else:
        subsets = [F for size in range(n, 0, -1) for F in itertools.combinations(range(n), size)]
    best = None
    for F in subsets:
        sub = _restricted(base, F)
        sub = normalize(sub)[0] if isinstance(sub, TropicalSystem) else normalize_twosided(sub)[0]
        found = _search_finite(sub, kind, cap, bound)
        if found is None:
            continue
        size, pt = found
        x = [INF] * n
        for j, v in zip(F, pt):
            x[j] = v
        x = tuple(x)
        if best is None or size > best[0]:
            best = (size, x)
    if best is None:
        return None
    size, x = best
    got, form = local_form(system, x, kind)
    assert got == size
    return DimensionWitness(size - 1, x, form)


def global_dimension(
    system: System, kind: Optional[Kind] = None, cap: int = GRID_CAP, bound: Optional[int] = None
) -> Optional[int]:
    """Largest projective local dimension over all solutions; None if unsolvable."""
    w = global_witness(system, kind, cap, bound)
    return None if w is None else w.dimension


def decide_dim_at_least(system: System, k: int, convention=Convention.PROJECTIVE, kind: Optional[Kind] = None) -> bool:
    d = global_dimension(system, kind)
    if d is None:
        return False
    if Convention(convention) is Convention.AFFINE:
        d += 1
    return d >= k


# -- certificates ----------------------------------------------------------------------


@dataclass(frozen=True)
class DimensionCertificate:
    """A solution, a form at that solution, and the projective dimension claimed."""

    witness: Vector
    form: BlockTriangularForm
    claimed_k: int


def make_certificate(system: System, k: int, kind: Optional[Kind] = None) -> Optional[DimensionCertificate]:
    """Certificate that the projective dimension is at least k, if it is."""
    w = global_witness(system, kind)
    if w is None or w.dimension < k:
        return None
    return DimensionCertificate(w.point, w.form, k)


def verify_certificate(system: System, cert: DimensionCertificate, kind: Optional[Kind] = None) -> bool:
    kind = kind or kind_of(system)
    try:
        x = as_vector(cert.witness)
        if len(x) != system.ncols or not is_solution(system, x):
            return False
    except (InvalidSolutionError, ShapeError, TypeError):
        return False
    t, F = local_star_table(system, x)
    pos = {c: p for p, c in enumerate(F)}
    try:
        blocks_ = tuple(tuple(pos[c] for c in b) for b in cert.form.column_blocks)
        form = BlockTriangularForm(blocks_, tuple(cert.form.row_assignment))
        ok = verify_btf(t, form, kind)
    except (KeyError, ValueError):
        return False
    return ok and form.size >= cert.claimed_k + 1


# -- vertex cover instances ---------------------------------------------------------------


@dataclass(frozen=True)
class Graph:
    n: int
    edges: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ShapeError(f"edge ({u}, {v}) leaves the vertex range")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)

    @classmethod
    def of(cls, n: int, edges) -> "Graph":
        return cls(n, tuple((int(u), int(v)) for u, v in edges))

    @property
    def connected(self) -> bool:
        if self.n <= 1:
            return True
        adj: List[List[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = {0}
        todo = [0]
        while todo:
            u = todo.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    todo.append(v)
        return len(seen) == self.n


def vc_to_tropical(G: Graph) -> TropicalSystem:
    """One row per edge over columns (star, v_0, ..., v_{n-1}): zeros at the
    star column and the two endpoints, ones elsewhere."""
    if not G.connected:
        raise PreconditionError("the graph must be connected")
    if not G.edges:
        raise PreconditionError("the graph needs at least one edge")
    rows = []
    for u, v in G.edges:
        rows.append([0] + [0 if w in (u, v) else 1 for w in range(G.n)])
    return TropicalSystem.of(rows, G.n + 1)


def vc_to_minplus(G: Graph) -> TwoSidedSystem:
    """``(a0 + 1, A') x = (a0, A' + 1) x`` for ``(a0, A') = vc_to_tropical(G)``."""
    A = vc_to_tropical(G)
    lhs = [(row[0] + 1,) + row[1:] for row in A.rows]
    rhs = [(row[0],) + tuple(v + 1 for v in row[1:]) for row in A.rows]
    return TwoSidedSystem.of(lhs, rhs, Relation.EQ, A.ncols)


def min_vertex_cover(G: Graph, cap: int = 20) -> int:
    if G.n > cap:
        raise BudgetExceeded(f"{G.n} vertices exceeds the vertex-cover cap {cap}")
    for k in range(G.n + 1):
        for K in itertools.combinations(range(G.n), k):
            Ks = set(K)
            if all(u in Ks or v in Ks for u, v in G.edges):
                return k
    return G.n


# -- rank -------------------------------------------------------------------------------------


def tropical_rank(A: TropicalSystem, decider=None, cap: int = BTF_CAP) -> int:
    """Size of the largest set of columns whose subsystem has no solution."""
    if A.ncols > cap:
        raise BudgetExceeded(f"{A.ncols} columns exceeds the rank cap {cap}")
    if decider is None:
        from .reductions import decide_tropical as decider
    for size in range(A.ncols, 0, -1):
        for cols in itertools.combinations(range(A.ncols), size):
            if not decider(A.select_columns(cols)):
                return size
    return 0
