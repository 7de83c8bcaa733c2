"""Reductions between tropical systems, min-plus systems and max-atom systems,
the infinity-elimination construction, and implication checking by repeated
solvability queries.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .core import (
    INF,
    Domain,
    InvalidSolutionError,
    PreconditionError,
    Relation,
    ShapeError,
    TropicalSystem,
    TropkitError,
    TwoSidedSystem,
    Vector,
    as_vector,
    canonicalize_inf,
    finitize,
    is_minplus_solution,
    is_tropical_solution,
    max_entry,
    min_finite,
    normalize,
    shift_to_zero,
    translate_columns,
)
from .maxatom import MaxAtom, MaxAtomSystem, constant_sum, solve, solve_extended

TropicalDecider = Callable[[TropicalSystem], bool]
MinPlusDecider = Callable[[TwoSidedSystem], bool]


@dataclass(frozen=True)
class VarMap:
    """Where each original variable went in a constructed system.

    ``columns[v]`` is the index of variable v in the constructed system and
    ``primed[v]`` the index of its twin, when the construction doubles
    variables.  With ``negated`` set, a value x in one system corresponds to -x
    in the other.
    """

    columns: Tuple[int, ...]
    primed: Optional[Tuple[int, ...]] = None
    negated: bool = True

    def __post_init__(self):
        used = list(self.columns) + list(self.primed or ())
        if len(set(used)) != len(used):
            raise ValueError("variable map is not injective")


# -- tropical rows as min-plus inequalities ------------------------------------


def tropical_row_to_inequalities(row) -> List[Tuple[Vector, Vector]]:
    """One ``<=`` pair per column i, together equivalent to "the minimum of
    ``row + x`` is attained at least twice".

    With ``y = row + x`` and ``m = min_{j != i} y_j``, pair i says
    ``min(m - 1, y_i) <= min(m, y_i - 1)``, which holds iff ``m <= y_i``.
    """
    row = as_vector(row)
    if all(v is INF for v in row):
        raise ValueError("a row of infinities has no inequality form")
    pairs = []
    for i in range(len(row)):
        lhs = tuple(v if j == i else v - 1 for j, v in enumerate(row))
        rhs = tuple(v - 1 if j == i else v for j, v in enumerate(row))
        pairs.append((lhs, rhs))
    return pairs


def tropical_to_minplus(A: TropicalSystem) -> TwoSidedSystem:
    """An inequality system on the same variables with the same solutions.

    All-infinite rows are satisfied by every vector and produce no inequality.
    """
    lhs, rhs = [], []
    for row in A.rows:
        if all(v is INF for v in row):
            continue
        for a, b in tropical_row_to_inequalities(row):
            lhs.append(a)
            rhs.append(b)
    return TwoSidedSystem.of(lhs, rhs, Relation.LE, A.ncols, A.domain)


def as_inequalities(S: TwoSidedSystem) -> TwoSidedSystem:
    """Equality rows split into ``a <= b`` and ``b <= a``; inequality systems pass through."""
    if S.relation is Relation.LE:
        return S
    return TwoSidedSystem.of(S.lhs + S.rhs, S.rhs + S.lhs, Relation.LE, S.ncols, S.domain)


# -- into max-atom form -----------------------------------------------------------
#
# With X = -x a min-plus inequality ``min_j(a_j + x_j) <= b_k + x_k`` becomes
# ``max_j(X_j - a_j) + b_k >= X_k``.  Infinite coefficients drop their terms.
# If no term is left the atom ``max{X_k} - 1 >= X_k`` stands in: it is
# unsatisfiable over Z and forces X_k to minus infinity over the extended domain,
# which is exactly what ``inf <= b_k + x_k`` demands.


def _le_atom(a: Vector, k_col: int, b_k: int) -> MaxAtom:
    terms = tuple((j, -v) for j, v in enumerate(a) if v is not INF)
    if not terms:
        return MaxAtom(k_col, ((k_col, 0),), -1)
    return MaxAtom(k_col, terms, b_k)


def tropical_to_maxatom(A: TropicalSystem) -> Tuple[MaxAtomSystem, VarMap]:
    """One atom per (row, column) with a finite entry in that column:
    ``max_{j != c}(X_j - a_j) + a_c >= X_c``; tropical x solves A iff X = -x
    satisfies the atoms (over the extended domain, X may be minus infinity).
    """
    atoms = []
    for row in A.rows:
        if all(v is INF for v in row):
            continue
        for c, a_c in enumerate(row):
            if a_c is INF:
                continue
            others = tuple(INF if j == c else v for j, v in enumerate(row))
            atoms.append(_le_atom(others, c, a_c))
    return MaxAtomSystem(A.ncols, tuple(atoms)), VarMap(tuple(range(A.ncols)))


def minplus_to_maxatom(S: TwoSidedSystem) -> Tuple[MaxAtomSystem, VarMap]:
    """Each ``a <= b`` row yields one atom per finite ``b_k``."""
    atoms = []
    for a, b in zip(as_inequalities(S).lhs, as_inequalities(S).rhs):
        for k, b_k in enumerate(b):
            if b_k is not INF:
                atoms.append(_le_atom(a, k, b_k))
    return MaxAtomSystem(S.ncols, tuple(atoms)), VarMap(tuple(range(S.ncols)))


def _from_map_assignment(X) -> Vector:
    return tuple(INF if v is None else -v for v in X)


# -- the stars gadget and the reverse reduction ---------------------------------


@dataclass(frozen=True)
class GadgetParams:
    a: Tuple[int, ...]
    n: int
    C: int

    def __post_init__(self):
        if len(self.a) > self.n:
            raise ShapeError("gadget vector longer than the row")


def stars_gadget(p: GadgetParams, positions: Sequence[int]) -> TropicalSystem:
    """Rows ``l0`` and ``l_i`` (i outside ``positions``) on n columns.

    ``l`` carries ``p.a`` at ``positions`` and ``C + 1`` elsewhere;
    ``l_i = l - e_i`` and ``l0`` lowers the whole a-part by one.  In every
    solution of a system containing these rows, each of them attains its
    minimum at least twice inside the a-part.
    """
    positions = list(positions)
    if len(positions) != len(p.a):
        raise ShapeError("one position per gadget coefficient")
    if len(set(positions)) != len(positions) or any(not 0 <= q < p.n for q in positions):
        raise ShapeError("gadget positions must be distinct column indices")
    coef = dict(zip(positions, p.a))
    l0 = [coef[j] - 1 if j in coef else p.C + 1 for j in range(p.n)]
    rows = [l0]
    for i in range(p.n):
        if i in coef:
            continue
        rows.append([coef[j] if j in coef else (p.C if j == i else p.C + 1) for j in range(p.n)])
    return TropicalSystem.of(rows, p.n)


def maxatom_to_tropical(S: MaxAtomSystem) -> Tuple[TropicalSystem, VarMap]:
    """A tropical system on 2 * nvars columns solvable iff S is satisfiable.

    Variable v becomes columns 2v and 2v+1, tied together by a two-coefficient
    gadget.  An atom ``max{x, y} + k >= z`` becomes (after X = -x) the gadget
    with coefficients ``(0, 0, 0, 0, k, k + 1)`` on ``(x, x', y, y', z, z')``;
    repeated columns keep their smallest coefficient.  Both use
    ``C = constant_sum(S)``.
    """
    if not S.is_binary():
        raise PreconditionError("maxatom_to_tropical needs a binary system; see to_binary_form")
    if S.nvars < 1:
        raise PreconditionError("need at least one variable")
    n = 2 * S.nvars
    C = constant_sum(S)
    rows: List[Vector] = []
    for v in range(S.nvars):
        rows.extend(stars_gadget(GadgetParams((0, 0), n, C), [2 * v, 2 * v + 1]).rows)
    for atom in S.atoms:
        (x, _), (y, _) = atom.terms
        z, k = atom.target, atom.k
        coef: Dict[int, int] = {}
        for col, c in ((2 * x, 0), (2 * x + 1, 0), (2 * y, 0), (2 * y + 1, 0), (2 * z, k), (2 * z + 1, k + 1)):
            coef[col] = min(coef.get(col, c), c)
        pos = sorted(coef)
        rows.extend(stars_gadget(GadgetParams(tuple(coef[c] for c in pos), n, C), pos).rows)
    vm = VarMap(tuple(2 * v for v in range(S.nvars)), tuple(2 * v + 1 for v in range(S.nvars)))
    return TropicalSystem.of(rows, n), vm


def pull_back_maxatom(vm: VarMap, x) -> Tuple[int, ...]:
    """Max-atom assignment from a finite solution of the constructed tropical system."""
    x = as_vector(x)
    if any(x[c] is INF for c in vm.columns):
        raise InvalidSolutionError("cannot pull back an infinite coordinate")
    return tuple(-x[c] if vm.negated else x[c] for c in vm.columns)


# -- solvers ----------------------------------------------------------------------


def _verified(system, x) -> Vector:
    x = shift_to_zero(x)
    if isinstance(system, TropicalSystem):
        ok = is_tropical_solution(system, x)
    else:
        ok = is_minplus_solution(system, x)
    if not ok:
        raise TropkitError(f"internal error: computed vector {x} is not a solution")
    return x


def solve_tropical(A: TropicalSystem, via: str = "map") -> Optional[Vector]:
    """A solution with smallest finite coordinate 0, or None.

    ``via="map"`` solves the max-atom form (over the extended domain when A
    has infinite entries).  ``via="infelim"`` handles infinite entries by the
    infinity-elimination matrices and solves each of those over Z.
    """
    if via == "infelim":
        return _solve_infelim(A)
    if via != "map":
        raise ValueError(f"unknown pipeline {via!r}")
    S, _ = tropical_to_maxatom(A)
    if A.has_inf:
        X = solve_extended(S)
    else:
        X = solve(S)
    if X is None:
        return None
    return _verified(A, _from_map_assignment(X))


def decide_tropical(A: TropicalSystem) -> bool:
    return solve_tropical(A) is not None


def solve_minplus(S: TwoSidedSystem) -> Optional[Vector]:
    M, _ = minplus_to_maxatom(S)
    X = solve_extended(M) if S.has_inf else solve(M)
    if X is None:
        return None
    return _verified(S, _from_map_assignment(X))


def decide_minplus(S: TwoSidedSystem) -> bool:
    return solve_minplus(S) is not None


# -- eliminating infinities ---------------------------------------------------------


def inf_elimination_constants(A: TropicalSystem) -> Tuple[int, int, int, int]:
    """``(M, alpha, beta, gamma)`` with M one more than the largest finite entry."""
    M = max_entry(A) + 1
    n = A.ncols
    return M, 200 * M * n, 100 * M * n, 300 * M * n


def _check_canonical(A: TropicalSystem):
    if A.m == 0:
        raise PreconditionError("need at least one row")
    for row in A.rows:
        if all(v is INF for v in row):
            raise PreconditionError("row of infinities; canonicalize first")
        if any(v is not INF and v < 0 for v in row):
            raise PreconditionError("negative entry; normalize first")
    for j in range(A.ncols):
        if all(row[j] is INF for row in A.rows):
            raise PreconditionError("column of infinities; canonicalize first")


def inf_elimination(A: TropicalSystem, i: int) -> TropicalSystem:
    """An (m+n-1) x (2n-1) integer matrix; A is solvable iff this matrix is
    solvable for at least one i.

    Layout: top rows ``[A' without column i | A']`` with infinities replaced by
    alpha; bottom rows ``[B | C]`` where B has -beta on the diagonal and gamma
    elsewhere, and C is gamma except for a zero column at i.
    """
    _check_canonical(A)
    n = A.ncols
    if not 0 <= i < n:
        raise ShapeError(f"column {i} out of range")
    _, alpha, beta, gamma = inf_elimination_constants(A)
    rows = []
    for row in A.rows:
        full = [alpha if v is INF else v for v in row]
        rows.append(full[:i] + full[i + 1:] + full)
    for t in range(n - 1):
        left = [-beta if c == t else gamma for c in range(n - 1)]
        right = [0 if c == i else gamma for c in range(n)]
        rows.append(left + right)
    return TropicalSystem.of(rows, 2 * n - 1, Domain.INT)


def reconstruct_inf_solution(A: TropicalSystem, i: int, yz) -> Vector:
    """Turn a solution of ``inf_elimination(A, i)`` into a solution of A.

    Starting from the smallest z-coordinate, grow a column set J: for a column
    in J and a row with a finite entry there, add the z-columns where that row
    of the big matrix attains its minimum.  Coordinates in J keep their z
    value; all others become infinite (or, when A has no infinite entry,
    one common large value).
    """
    Ai = inf_elimination(A, i)
    yz = as_vector(yz)
    if not is_tropical_solution(Ai, yz):
        raise PreconditionError("yz does not solve the elimination matrix")
    n = A.ncols
    z = yz[n - 1:]
    start = min(range(n), key=lambda c: (z[c], c))
    J = {start}
    todo = [start]
    while todo:
        col = todo.pop()
        for r, row in enumerate(A.rows):
            if row[col] is INF:
                continue
            vals = [a + v for a, v in zip(Ai.rows[r], yz)]
            low = min(vals)
            for c in range(n - 1, 2 * n - 1):
                if vals[c] == low and c - (n - 1) not in J:
                    J.add(c - (n - 1))
                    todo.append(c - (n - 1))
    x = tuple(z[c] if c in J else INF for c in range(n))
    if not A.has_inf and INF in x:
        x = finitize(A, x)
    x = shift_to_zero(x)
    if not is_tropical_solution(A, x):
        raise TropkitError("internal error: reconstructed vector is not a solution")
    return x


def _solve_infelim(A: TropicalSystem) -> Optional[Vector]:
    reduced, witness = canonicalize_inf(A)
    if witness is not None:
        return witness
    for i in range(reduced.ncols):
        Ai = inf_elimination(reduced, i)
        yz = solve_tropical(Ai, via="map")
        if yz is not None:
            return _verified(A, reconstruct_inf_solution(reduced, i, yz))
    return None


def combine_or(systems: Sequence[TropicalSystem], delta: Optional[int] = None) -> TropicalSystem:
    """One integer system solvable iff at least one input is.

    Inputs are row-normalized first.  The block matrix has the inputs on the
    diagonal; every other block in block-column i repeats the rows of input i
    cyclically, shifted up by delta.  Any delta above the largest entry works
    (in a solution shifted to minimum 0 the off-diagonal terms of the block-row
    holding the zero coordinate exceed that row's own minimum); the default
    ``(M+1)(N+1)`` leaves a wide margin.
    """
    systems = list(systems)
    if not systems:
        raise ValueError("need at least one system")
    norm = []
    for S in systems:
        if S.has_inf:
            raise PreconditionError("combine_or takes integer systems")
        if S.m == 0:
            raise PreconditionError("combine_or needs systems with at least one row")
        norm.append(normalize(S)[0])
    N = sum(S.ncols for S in norm)
    if delta is None:
        M = max(max_entry(S) for S in norm)
        delta = (M + 1) * (N + 1)
    rows = []
    for k, Sk in enumerate(norm):
        for r in range(Sk.m):
            row: List[int] = []
            for i, Si in enumerate(norm):
                if i == k:
                    row.extend(Sk.rows[r])
                else:
                    row.extend(delta + v for v in Si.rows[r % Si.m])
            rows.append(row)
    return TropicalSystem.of(rows, N, Domain.INT)


def split_or_witness(systems: Sequence[TropicalSystem], x) -> Tuple[int, Vector]:
    """The block of a combined solution that solves its own input."""
    x = as_vector(x)
    off = 0
    for idx, S in enumerate(systems):
        part = x[off:off + S.ncols]
        off += S.ncols
        if any(v is not INF for v in part) and is_tropical_solution(S, part):
            return idx, shift_to_zero(part)
    raise InvalidSolutionError("no block of x solves its system")


# -- implication ------------------------------------------------------------------


def _implication_pattern(n: int, i: int, j: int) -> List[List[int]]:
    """Rows 2..n of the strict-violation pattern for the pair (i, j), negated.

    The n-1 columns other than i are ordered ascending with j moved last; row
    r (0-based) has -1 at the ordered positions >= r and 0 elsewhere,
    including column i.
    """
    order = [c for c in range(n) if c not in (i, j)] + [j]
    rows = []
    for r in range(n - 1):
        row = [0] * n
        for p in range(r, n - 1):
            row[order[p]] = -1
        rows.append(row)
    return rows


def implication_systems(A: TropicalSystem, l) -> List[Tuple[Tuple[int, int], TropicalSystem]]:
    """The systems ``A_ij`` (for all ordered pairs i != j) over Z.

    A is translated so l becomes the zero row, row-normalized, scaled by 3Mn
    and extended by the pattern rows of the pair.
    """
    l = as_vector(l)
    n = A.ncols
    shifted = translate_columns(A, tuple(-v for v in l))
    base, M = normalize(shifted)
    M = max(1, M)
    K = 3 * M * n
    scaled = [[K * v for v in row] for row in base.rows]
    out = []
    for i in range(n):
        for j in range(n):
            if i != j:
                out.append(((i, j), TropicalSystem.of(scaled + _implication_pattern(n, i, j), n, Domain.INT)))
    return out


def _check_row(A, l):
    l = as_vector(l)
    if len(l) != A.ncols:
        raise ShapeError(f"row of length {len(l)} for a system with {A.ncols} columns")
    return l


def implies(A: TropicalSystem, l, decider: Optional[TropicalDecider] = None) -> bool:
    """Does every solution of A (over Z) satisfy the equation l?

    True iff A is unsolvable, or A and l have a common solution and none of
    the systems ``A_ij`` is solvable (a solution of ``A_ij`` solves A and
    breaks l; conversely a breaking solution can be slid toward l until it
    lands in some ``A_ij``).
    """
    if A.has_inf:
        raise PreconditionError("implies works over Z; use implies_inf")
    l = _check_row(A, l)
    if any(v is INF for v in l):
        raise PreconditionError("implies works over Z; use implies_inf")
    decider = decider or decide_tropical
    if not decider(A):
        return True
    if not decider(A.with_rows([l])):
        return False
    return not any(decider(Aij) for _, Aij in implication_systems(A, l))


def equivalent(A: TropicalSystem, B: TropicalSystem, decider: Optional[TropicalDecider] = None) -> bool:
    if A.ncols != B.ncols:
        raise ShapeError("systems have different numbers of variables")
    inf = A.has_inf or B.has_inf
    check = implies_inf if inf else implies
    return all(check(A, row, decider) for row in B.rows) and all(check(B, row, decider) for row in A.rows)


def has_finite_min_in_row(A: TropicalSystem, l, decider: Optional[TropicalDecider] = None) -> bool:
    """Does ``A + {l}`` have a solution in which l attains a finite minimum?

    Rows are normalized, and the stars gadget on l's finite part with
    ``C = 10 M n`` replaces l; a solution of the result is exactly such a
    solution.  With fewer than two finite coefficients the answer is False.
    """
    l = _check_row(A, l)
    decider = decider or decide_tropical
    F = [j for j, v in enumerate(l) if v is not INF]
    if len(F) < 2:
        return False
    base, _ = normalize(A)
    low = min_finite(l)
    c = tuple(l[j] - low for j in F)
    M = max(1, max_entry(base), max(c))
    n = A.ncols
    gadget = stars_gadget(GadgetParams(c, n, 10 * M * n), F)
    domain = Domain.INT_INF if base.has_inf else Domain.INT
    B = TropicalSystem.of(base.rows + gadget.rows, n, domain)
    return decider(B)


def has_solution_with_finite_coord(A: TropicalSystem, i: int, decider: Optional[TropicalDecider] = None) -> bool:
    """Does A have a solution whose coordinate i is finite?

    A fresh first column (infinite on A's rows) and an extra row ``0`` at the
    fresh column and at i turn this into a finite-minimum question.
    """
    if not 0 <= i < A.ncols:
        raise ShapeError(f"column {i} out of range")
    aug = TropicalSystem.of([(INF,) + row for row in A.rows], A.ncols + 1, Domain.INT_INF)
    last = tuple(0 if c in (0, i + 1) else INF for c in range(A.ncols + 1))
    return has_finite_min_in_row(aug, last, decider)


def kernel(A: TropicalSystem, decider: Optional[TropicalDecider] = None) -> frozenset:
    """Coordinates that are infinite in every solution."""
    decider = decider or decide_tropical
    if not decider(A):
        raise PreconditionError("kernel of an unsolvable system")
    return frozenset(i for i in range(A.ncols) if not has_solution_with_finite_coord(A, i, decider))


def implies_inf(A: TropicalSystem, l, decider: Optional[TropicalDecider] = None) -> bool:
    """Implication over Z with infinity.

    After the solvability checks: if no solution of A is finite anywhere on
    l's finite coordinates F, l always evaluates to infinity and holds.  If
    ``A + {l}`` has no solution with a finite minimum in l while A has one
    finite on F, the kernels differ and the implication fails.  Otherwise run
    the pair systems built on F (infinite elsewhere), asking for solutions
    finite somewhere on F.
    """
    l = _check_row(A, l)
    decider = decider or decide_tropical
    if not decider(A):
        return True
    F = [j for j, v in enumerate(l) if v is not INF]
    if not F:
        return True
    if not decider(A.with_rows([l])):
        return False
    finite_on_F = any(has_solution_with_finite_coord(A, f, decider) for f in F)
    if not finite_on_F:
        return True
    if not has_finite_min_in_row(A, l, decider):
        return False
    n = A.ncols
    shifted = translate_columns(A, tuple(-l[j] if j in F else 0 for j in range(n)))
    base, M = normalize(shifted)
    M = max(1, M)
    K = 3 * M * n
    scaled = [[K * v for v in row] for row in base.rows]
    for i in F:
        for j in F:
            if i == j:
                continue
            sub = _implication_pattern(len(F), F.index(i), F.index(j))
            pattern = []
            for prow in sub:
                row = [INF] * n
                for p, col in enumerate(F):
                    row[col] = prow[p]
                pattern.append(row)
            Aij = TropicalSystem.of(scaled + pattern, n, Domain.INT_INF)
            if any(has_solution_with_finite_coord(Aij, f, decider) for f in F):
                return False
    return True


def minplus_implies(S: TwoSidedSystem, row, decider: Optional[MinPlusDecider] = None) -> bool:
    """Does every integer solution of S satisfy ``a x = b x`` for ``row = (a, b)``?

    A solution breaks the row iff one side's minimum is strictly smaller, i.e.
    for some coefficient a_i: ``a_i + x_i < min(b + x)``, or symmetrically.
    Over Z the strict inequality is ``a_i + x_i <= min(b - 1 + x)``, one more
    inequality row; each cross-side query is answered by the decider.
    """
    a, b = (as_vector(r) for r in row)
    if len(a) != S.ncols or len(b) != S.ncols:
        raise ShapeError("row length does not match the system")
    if S.has_inf or any(v is INF for v in a + b):
        raise PreconditionError("minplus_implies works over Z")
    decider = decider or decide_minplus
    base = as_inequalities(S)
    if not decider(base):
        return True
    joined = TwoSidedSystem.of(base.lhs + (a, b), base.rhs + (b, a), Relation.LE, S.ncols)
    if not decider(joined):
        return False
    for side, other in ((a, b), (b, a)):
        lowered = tuple(v - 1 for v in other)
        for i, c in enumerate(side):
            single = tuple(c if j == i else INF for j in range(S.ncols))
            probe = TwoSidedSystem.of(base.lhs + (single,), base.rhs + (lowered,), Relation.LE, S.ncols, Domain.INT_INF)
            if decider(probe):
                return False
    return True
