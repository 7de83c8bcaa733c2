"""Brute-force reference implementations.

Nothing here calls into the reduction pipeline; the only shared code is the
data model and the solution predicates of ``core``.  Grid scans are
vectorized with numpy and visit points in lexicographic order.  Every scan
refuses to start when it would evaluate more than ``budget()`` points.
"""

from __future__ import annotations

import itertools
import os
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .core import (
    INF,
    BudgetExceeded,
    PreconditionError,
    Relation,
    TropicalSystem,
    TwoSidedSystem,
    Vector,
    is_minplus_solution,
    is_tropical_solution,
    max_finite,
    min_finite,
    normalize,
    normalize_twosided,
    translate_columns,
)
from ._grid import blocks, dtype_for, minplus_mask, solution_mask, tropical_mask
from .maxatom import MaxAtomSystem, constant_sum, satisfies

DEFAULT_BUDGET = 10**8


def budget() -> int:
    raw = os.environ.get("TROPKIT_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        return int(float(raw))
    except ValueError:
        raise ValueError(f"TROPKIT_BUDGET must be a number, got {raw!r}") from None


def _charge(points: int):
    if points > budget():
        raise BudgetExceeded(f"scan of {points} points exceeds the budget of {budget()}")


def _scan(system, n: int, lo: int, hi: int, rows_for_dtype, first_only: bool) -> List[Tuple[int, ...]]:
    _charge((hi - lo + 1) ** n)
    dtype = dtype_for(rows_for_dtype, max(abs(lo), abs(hi)))
    found: List[Tuple[int, ...]] = []
    for pts in blocks(n, lo, hi, dtype):
        hits = pts[solution_mask(system, pts)]
        for p in hits:
            found.append(tuple(int(v) for v in p))
            if first_only:
                return found
    return found


def _all_rows(system):
    if isinstance(system, TropicalSystem):
        return system.rows
    return system.lhs + system.rhs


# -- tropical solvability -----------------------------------------------------------


def brute_tropsolv(A: TropicalSystem) -> Optional[Vector]:
    """Lexicographically first solution in ``{0..M}^n`` of the row-normalized
    system (a solution exists there whenever one exists at all)."""
    if A.has_inf:
        raise PreconditionError("brute_tropsolv takes integer systems; use brute_tropsolv_inf")
    base, M = normalize(A)
    hits = _scan(base, A.ncols, 0, M, base.rows, first_only=True)
    return hits[0] if hits else None


def _restrict(rows, F: Sequence[int]):
    """Rows seen by the coordinates F when all others are infinite; rows that
    become entirely infinite are satisfied and dropped."""
    out = []
    for row in rows:
        sub = tuple(row[j] for j in F)
        if any(v is not INF for v in sub):
            out.append(sub)
    return out


def _inf_key(x):
    return tuple((1, 0) if v is INF else (0, v) for v in x)


def brute_tropsolv_inf(A: TropicalSystem) -> Optional[Vector]:
    """Lexicographically first solution (infinity ordered last) with finite
    coordinates in ``{0..M n}``, M one more than the largest finite entry of
    the row-normalized system."""
    base, E = normalize(A)
    n = A.ncols
    bound = (E + 1) * n
    _charge(sum((bound + 1) ** k for k in range(1, n + 1)) * 2**n)
    best = None
    for size in range(1, n + 1):
        for F in itertools.combinations(range(n), size):
            rows = _restrict(base.rows, F)
            sub = TropicalSystem.of(rows, size) if rows else None
            if sub is None:
                hit = (0,) * size
            else:
                hits = _scan(sub, size, 0, bound, rows, first_only=True)
                if not hits:
                    continue
                hit = hits[0]
            x = [INF] * n
            for j, v in zip(F, hit):
                x[j] = v
            x = tuple(x)
            assert is_tropical_solution(A, x)
            if best is None or _inf_key(x) < _inf_key(best):
                best = x
    return best


def pattern_tropsolv(A: TropicalSystem) -> Optional[Vector]:
    """Exact solvability for integer systems with large entries.

    Depth-first search that picks, row by row, two columns to carry the
    minimum; each choice adds difference constraints, kept closed under
    shortest paths so an infeasible choice is pruned immediately.  A feasible
    leaf yields an integer point from the shortest-path potentials.
    """
    if A.has_inf:
        raise PreconditionError("pattern_tropsolv takes integer systems")
    n = A.ncols
    rows = sorted(set(A.rows))

    # D[u][v] is the best known upper bound on x_v - x_u (None: unbounded)
    def add(D, u, v, w):
        """Impose x_v - x_u <= w; return the closed matrix or None if infeasible."""
        back = D[v][u]
        if back is not None and back + w < 0:
            return None
        cur = D[u][v]
        if cur is not None and cur <= w:
            return D
        new = [r[:] for r in D]
        for p in range(n):
            dpu = 0 if p == u else D[p][u]
            if dpu is None:
                continue
            for q in range(n):
                dvq = 0 if q == v else D[v][q]
                if dvq is None:
                    continue
                cand = dpu + w + dvq
                if p == q:
                    if cand < 0:
                        return None
                    continue
                if new[p][q] is None or cand < new[p][q]:
                    new[p][q] = cand
        return new

    def choose(D, r):
        if r == len(rows):
            return D
        row = rows[r]
        for j, k in itertools.combinations(range(n), 2):
            E = add(D, j, k, row[j] - row[k])
            if E is not None:
                E = add(E, k, j, row[k] - row[j])
            for l in range(n):
                if E is None:
                    break
                if l != j:
                    E = add(E, l, j, row[l] - row[j])
            if E is None:
                continue
            out = choose(E, r + 1)
            if out is not None:
                return out
        return None

    D0 = [[None] * n for _ in range(n)]
    D = choose(D0, 0)
    if D is None:
        return None
    # potentials: x_v = min(0, min_u D[u][v]) over a virtual source is feasible
    x = [min([0] + [D[u][v] for u in range(n) if u != v and D[u][v] is not None]) for v in range(n)]
    low = min(x)
    x = tuple(v - low for v in x)
    assert is_tropical_solution(A, x), (A, x)
    return x


# -- min-plus ------------------------------------------------------------------------


def _split_le(S: TwoSidedSystem):
    if S.relation is Relation.LE:
        return list(zip(S.lhs, S.rhs))
    return list(zip(S.lhs, S.rhs)) + list(zip(S.rhs, S.lhs))


def spread_bound(S: TwoSidedSystem) -> int:
    """Sum of absolute constants of the atom form of S, computed from the
    matrices: each ``a <= b`` row contributes ``|b_k| + sum|a_j|`` per finite
    ``b_k`` (or 1 when a has no finite entry)."""
    total = 0
    for a, b in _split_le(S):
        fin_a = [abs(v) for v in a if v is not INF]
        for v in b:
            if v is INF:
                continue
            total += abs(v) + (sum(fin_a) if fin_a else 1)
    return total


def brute_minplus(S: TwoSidedSystem) -> Optional[Vector]:
    """Scan ``{0..C}^n`` (with infinity subsets when S has infinite entries),
    C the spread bound of the row-normalized system."""
    base, _ = normalize_twosided(S)
    C = spread_bound(base)
    n = S.ncols
    rows = base.lhs + base.rhs
    if not S.has_inf:
        hits = _scan(base, n, 0, C, rows, first_only=True)
        return hits[0] if hits else None
    best = None
    for size in range(1, n + 1):
        for F in itertools.combinations(range(n), size):
            sub = TwoSidedSystem.of(
                [tuple(r[j] for j in F) for r in base.lhs],
                [tuple(r[j] for j in F) for r in base.rhs],
                base.relation,
                size,
            )
            hits = _scan(sub, size, 0, C, rows, first_only=True)
            if not hits:
                continue
            x = [INF] * n
            for j, v in zip(F, hits[0]):
                x[j] = v
            x = tuple(x)
            assert is_minplus_solution(S, x)
            if best is None or _inf_key(x) < _inf_key(best):
                best = x
    return best


# -- implication -------------------------------------------------------------------


def _violates_zero_row(pts) -> np.ndarray:
    low = pts.min(axis=1)
    return (pts == low[:, None]).sum(axis=1) < 2


def brute_implies(A: TropicalSystem, l) -> bool:
    """True iff no point of ``{0..Mn+1}^n`` solves A while breaking l, where
    A is first translated so l becomes the zero row and then row-normalized."""
    if A.has_inf or any(v is INF for v in l):
        raise PreconditionError("brute_implies works over Z")
    shifted = translate_columns(A, tuple(-v for v in l))
    base, M = normalize(shifted)
    n = A.ncols
    hi = M * n + 1
    _charge((hi + 1) ** n)
    dtype = dtype_for(base.rows, hi)
    for pts in blocks(n, 0, hi, dtype):
        ok = tropical_mask(base.rows, pts) & _violates_zero_row(pts)
        if ok.any():
            return False
    return True


def brute_implies_inf(A: TropicalSystem, l, bound: Optional[int] = None) -> bool:
    """Implication over Z with infinity by scanning ``({0..B} + {inf})^n``;
    B defaults to ``2 (M+1) n + 1`` for the row-normalized system."""
    base, E = normalize(A)
    n = A.ncols
    if bound is None:
        bound = 2 * (E + 1 + max_finite(l, 0) - min_finite(l, 0)) * n + 1
    _charge((bound + 2) ** n)
    values = list(range(bound + 1)) + [INF]
    for x in itertools.product(values, repeat=n):
        if all(v is INF for v in x):
            continue
        if is_tropical_solution(base, x) and not is_tropical_solution(TropicalSystem.of([l], n), x):
            return False
    return True


def brute_minplus_implies(S: TwoSidedSystem, row, bound: Optional[int] = None) -> bool:
    """True iff no integer point in ``{0..B}^n`` solves S and breaks ``a x = b x``.

    B defaults to the spread bound of S plus the strict-violation rows
    (``a_i <= b - 1`` style), plus one.
    """
    a, b = row
    n = S.ncols
    base, _ = normalize_twosided(S)
    if bound is None:
        extra = TwoSidedSystem.of([a, b], [tuple(v - 1 for v in b), tuple(v - 1 for v in a)], Relation.LE, n)
        bound = spread_bound(base) + spread_bound(normalize_twosided(extra)[0]) + 1
    _charge((bound + 1) ** n)
    dtype = dtype_for(base.lhs + base.rhs + (tuple(a), tuple(b)), bound)
    probe = TwoSidedSystem.of([a], [b], Relation.EQ, n)
    for pts in blocks(n, 0, bound, dtype):
        bad = minplus_mask(base, pts) & ~minplus_mask(probe, pts)
        if bad.any():
            return False
    return True


# -- grid utilities -------------------------------------------------------------------


def solution_sets_equal_on_grid(P, Q, bound: int) -> bool:
    if P.ncols != Q.ncols:
        return False
    n = P.ncols
    _charge((bound + 1) ** n)
    dtype = dtype_for(_all_rows(P) + _all_rows(Q), bound)
    for pts in blocks(n, 0, bound, dtype):
        if not np.array_equal(solution_mask(P, pts), solution_mask(Q, pts)):
            return False
    return True


def enumerate_solutions(system, bound: int) -> List[Tuple[int, ...]]:
    """All solutions in ``{0..bound}^n``, lexicographically ordered."""
    return _scan(system, system.ncols, 0, bound, _all_rows(system), first_only=False)


def brute_maxatom(S: MaxAtomSystem, C: Optional[int] = None) -> Optional[Tuple[int, ...]]:
    """Lexicographically first satisfying assignment in ``[-C, 0]^n``."""
    if C is None:
        C = constant_sum(S)
    n = S.nvars
    _charge((C + 1) ** n)
    for pts in blocks(n, -C, 0, np.int64):
        mask = np.ones(len(pts), dtype=bool)
        for atom in S.atoms:
            vals = np.max(np.stack([pts[:, v] + o for v, o in atom.terms]), axis=0)
            mask &= vals + atom.k >= pts[:, atom.target]
        hits = pts[mask]
        if len(hits):
            x = tuple(int(v) for v in hits[0])
            assert satisfies(S, x)
            return x
    return None
