"""Semiring scalars, systems, solution predicates and star tables.

Scalars are plain Python ints plus the singleton ``INF`` (+infinity), so all
arithmetic is exact and unbounded.  ``min`` is tropical addition and ``+`` is
tropical multiplication.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple, Union


class TropkitError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(TropkitError, ValueError):
    pass


class InvalidSolutionError(TropkitError, ValueError):
    pass


class PreconditionError(TropkitError, ValueError):
    pass


class BudgetExceeded(TropkitError):
    """A brute-force search or exact enumeration would exceed its budget."""


@functools.total_ordering
class _Infinity:
    """Positive infinity of the semiring; absorbs addition, tops the order."""

    _instance: Optional["_Infinity"] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __reduce__(self):
        return (_Infinity, ())

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __hash__(self):
        return hash("tropkit.INF")

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        if other is self or isinstance(other, int):
            return False
        return NotImplemented

    def __gt__(self, other):
        if other is self:
            return False
        if isinstance(other, int):
            return True
        return NotImplemented

    def __add__(self, other):
        if other is self or isinstance(other, int):
            return self
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            return self
        if other is self:
            raise ArithmeticError("inf - inf is undefined")
        return NotImplemented

    def __rsub__(self, other):
        raise ArithmeticError("cannot subtract inf from a finite value")

    def __mul__(self, other):
        if isinstance(other, int) and other > 0:
            return self
        raise ArithmeticError("inf can only be scaled by a positive integer")

    __rmul__ = __mul__

    def __neg__(self):
        raise ArithmeticError("-inf is not an element of the semiring")


INF = _Infinity()

ExtInt = Union[int, _Infinity]
Vector = Tuple[ExtInt, ...]


def is_inf(value) -> bool:
    return value is INF


def is_finite(value) -> bool:
    return value is not INF


def max_finite(values: Iterable[ExtInt], default: Optional[int] = None) -> Optional[int]:
    finite = [v for v in values if v is not INF]
    return max(finite) if finite else default


def min_finite(values: Iterable[ExtInt], default: Optional[int] = None) -> Optional[int]:
    finite = [v for v in values if v is not INF]
    return min(finite) if finite else default


def _check_scalar(value) -> ExtInt:
    if value is INF:
        return value
    if isinstance(value, bool) or not isinstance(value, int):
        # accept integral numpy scalars and the like
        try:
            as_int = int(value)
        except (TypeError, ValueError):
            raise TypeError(f"expected an integer or INF, got {value!r}") from None
        if as_int != value:
            raise TypeError(f"expected an integer or INF, got {value!r}")
        return as_int
    return value


def as_vector(values: Iterable) -> Vector:
    return tuple(_check_scalar(v) for v in values)


class Domain(enum.Enum):
    INT = "int"
    INT_INF = "inf"


class Relation(enum.Enum):
    EQ = "eq"
    LE = "le"


def _freeze_rows(rows) -> Tuple[Vector, ...]:
    return tuple(as_vector(r) for r in rows)


def _infer_domain(rows: Sequence[Vector], domain) -> Domain:
    has_inf = any(v is INF for row in rows for v in row)
    if domain is None:
        return Domain.INT_INF if has_inf else Domain.INT
    domain = Domain(domain)
    if domain is Domain.INT and has_inf:
        raise ValueError("infinite entry in an integer-domain system")
    return domain


@dataclass(frozen=True)
class TropicalSystem:
    """An m x n matrix whose rows are tropical equations ``min_j(a_ij + x_j)``.

    Build with :meth:`of`; the domain is inferred from the entries unless given.
    Zero-row systems are allowed (they are trivially satisfied).
    """

    rows: Tuple[Vector, ...]
    ncols: int
    domain: Domain = Domain.INT

    def __post_init__(self):
        if self.ncols < 1:
            raise ShapeError("a system needs at least one column")
        for row in self.rows:
            if len(row) != self.ncols:
                raise ShapeError(f"row of length {len(row)} in a system with {self.ncols} columns")
        if self.domain is Domain.INT and any(v is INF for row in self.rows for v in row):
            raise ValueError("infinite entry in an integer-domain system")

    @classmethod
    def of(cls, rows, ncols: Optional[int] = None, domain=None) -> "TropicalSystem":
        rows = _freeze_rows(rows)
        if ncols is None:
            if not rows:
                raise ShapeError("ncols is required for a system without rows")
            ncols = len(rows[0])
        return cls(rows, ncols, _infer_domain(rows, domain))

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return self.ncols

    @property
    def shape(self) -> Tuple[int, int]:
        return (len(self.rows), self.ncols)

    @property
    def has_inf(self) -> bool:
        return any(v is INF for row in self.rows for v in row)

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.rows)

    def with_rows(self, extra) -> "TropicalSystem":
        """The union of this system with more equations (same variables)."""
        extra = _freeze_rows(extra)
        rows = self.rows + extra
        domain = Domain.INT_INF if self.domain is Domain.INT_INF else None
        return TropicalSystem.of(rows, self.ncols, domain)

    def select_columns(self, cols: Sequence[int]) -> "TropicalSystem":
        cols = list(cols)
        return TropicalSystem.of([[row[j] for j in cols] for row in self.rows], len(cols), self.domain)

    def to_lists(self):
        return [list(r) for r in self.rows]


@dataclass(frozen=True)
class TwoSidedSystem:
    """Rows ``min_j(a_ij + x_j) (= or <=) min_j(b_ij + x_j)``."""

    lhs: Tuple[Vector, ...]
    rhs: Tuple[Vector, ...]
    ncols: int
    relation: Relation = Relation.EQ
    domain: Domain = Domain.INT

    def __post_init__(self):
        if self.ncols < 1:
            raise ShapeError("a system needs at least one column")
        if len(self.lhs) != len(self.rhs):
            raise ShapeError("left and right matrices have different row counts")
        for row in self.lhs + self.rhs:
            if len(row) != self.ncols:
                raise ShapeError(f"row of length {len(row)} in a system with {self.ncols} columns")
        if self.domain is Domain.INT and any(v is INF for row in self.lhs + self.rhs for v in row):
            raise ValueError("infinite entry in an integer-domain system")

    @classmethod
    def of(cls, lhs, rhs, relation=Relation.EQ, ncols: Optional[int] = None, domain=None) -> "TwoSidedSystem":
        lhs, rhs = _freeze_rows(lhs), _freeze_rows(rhs)
        if ncols is None:
            if not lhs:
                raise ShapeError("ncols is required for a system without rows")
            ncols = len(lhs[0])
        return cls(lhs, rhs, ncols, Relation(relation), _infer_domain(lhs + rhs, domain))

    @property
    def m(self) -> int:
        return len(self.lhs)

    @property
    def n(self) -> int:
        return self.ncols

    @property
    def has_inf(self) -> bool:
        return any(v is INF for row in self.lhs + self.rhs for v in row)

    def with_rows(self, lhs, rhs) -> "TwoSidedSystem":
        lhs, rhs = _freeze_rows(lhs), _freeze_rows(rhs)
        domain = Domain.INT_INF if self.domain is Domain.INT_INF else None
        return TwoSidedSystem.of(self.lhs + lhs, self.rhs + rhs, self.relation, self.ncols, domain)


System = Union[TropicalSystem, TwoSidedSystem]


@dataclass(frozen=True)
class StarTable:
    """Boolean marks of row minima.

    For a joint table of a two-sided system ``split`` is n: columns ``0..n-1``
    are the left part and ``n..2n-1`` the right part.
    """

    stars: Tuple[Tuple[bool, ...], ...]
    width: int
    split: Optional[int] = None

    @property
    def nrows(self) -> int:
        return len(self.stars)

    @property
    def ncols(self) -> int:
        """Number of variables (columns of one part for joint tables)."""
        return self.split if self.split is not None else self.width

    def positions(self):
        return {(i, j) for i, row in enumerate(self.stars) for j, s in enumerate(row) if s}


# -- evaluation and predicates ------------------------------------------------


def _row_value(row: Vector, x: Vector) -> ExtInt:
    return min(a + v for a, v in zip(row, x))


def _check_len(n: int, x: Vector):
    if len(x) != n:
        raise ShapeError(f"vector of length {len(x)} for a system with {n} columns")


def evaluate(A: TropicalSystem, x) -> Vector:
    x = as_vector(x)
    _check_len(A.ncols, x)
    return tuple(_row_value(row, x) for row in A.rows)


def _attained_twice(row: Vector, x: Vector) -> bool:
    terms = [a + v for a, v in zip(row, x)]
    low = min(terms)
    if low is INF:
        return True
    return sum(1 for t in terms if t == low) >= 2


def is_tropical_solution(A: TropicalSystem, x) -> bool:
    """True iff every row minimum is attained at least twice.

    A row whose terms are all infinite counts as satisfied.
    """
    x = as_vector(x)
    _check_len(A.ncols, x)
    if all(v is INF for v in x):
        raise InvalidSolutionError("the all-infinity vector is never a solution")
    return all(_attained_twice(row, x) for row in A.rows)


def is_minplus_solution(S: TwoSidedSystem, x) -> bool:
    x = as_vector(x)
    _check_len(S.ncols, x)
    if all(v is INF for v in x):
        raise InvalidSolutionError("the all-infinity vector is never a solution")
    for a, b in zip(S.lhs, S.rhs):
        left, right = _row_value(a, x), _row_value(b, x)
        if S.relation is Relation.EQ:
            if left != right:
                return False
        elif right < left:
            return False
    return True


def is_solution(system: System, x) -> bool:
    if isinstance(system, TropicalSystem):
        return is_tropical_solution(system, x)
    return is_minplus_solution(system, x)


# -- star tables ----------------------------------------------------------------


def _row_stars(row: Vector) -> Tuple[bool, ...]:
    low = min(row) if row else INF
    if low is INF:
        return tuple(False for _ in row)
    return tuple(v == low for v in row)


def star_table(A: TropicalSystem) -> StarTable:
    return StarTable(tuple(_row_stars(row) for row in A.rows), A.ncols)


def joint_star_table(S: TwoSidedSystem) -> StarTable:
    stars = tuple(_row_stars(a + b) for a, b in zip(S.lhs, S.rhs))
    return StarTable(stars, 2 * S.ncols, split=S.ncols)


# -- invariance transforms --------------------------------------------------------


def _map_rows(system: System, fn):
    if isinstance(system, TropicalSystem):
        return TropicalSystem.of([fn(i, r) for i, r in enumerate(system.rows)], system.ncols, system.domain)
    return TwoSidedSystem.of(
        [fn(i, r) for i, r in enumerate(system.lhs)],
        [fn(i, r) for i, r in enumerate(system.rhs)],
        system.relation,
        system.ncols,
        system.domain,
    )


def translate_rows(system: System, r) -> System:
    """Add ``r[i]`` to every entry of row i (both sides for two-sided systems)."""
    r = as_vector(r)
    if len(r) != system.m:
        raise ShapeError(f"row shift of length {len(r)} for {system.m} rows")
    if any(v is INF for v in r):
        raise ValueError("row shifts must be finite")
    return _map_rows(system, lambda i, row: [a + r[i] for a in row])


def translate_columns(system: System, v) -> System:
    """Add ``v[j]`` to column j; x solves the result iff x + v solves the input."""
    v = as_vector(v)
    _check_len(system.ncols, v)
    if any(c is INF for c in v):
        raise ValueError("column shifts must be finite")
    return _map_rows(system, lambda i, row: [a + c for a, c in zip(row, v)])


def scale(system: System, c: int) -> System:
    if not isinstance(c, int) or c < 1:
        raise ValueError("scale factor must be a positive integer")
    return _map_rows(system, lambda i, row: [a * c for a in row])


def max_entry(system: System, default: int = 0) -> int:
    rows = system.rows if isinstance(system, TropicalSystem) else system.lhs + system.rhs
    return max_finite((v for row in rows for v in row), default)


def normalize(A: TropicalSystem) -> Tuple[TropicalSystem, int]:
    """Shift every row so its finite minimum is 0 and drop all-infinite rows.

    Returns the new system and its largest entry M.
    """
    rows = []
    for row in A.rows:
        low = min_finite(row)
        if low is None:
            continue
        rows.append([a - low for a in row])
    out = TropicalSystem.of(rows, A.ncols, A.domain)
    return out, max_entry(out)


def normalize_twosided(S: TwoSidedSystem) -> Tuple[TwoSidedSystem, int]:
    """Shift each row (both sides together) so the joint finite minimum is 0.

    Rows with no finite entry on either side are kept: they constrain nothing
    but removing them would change the row count users see.
    """
    lhs, rhs = [], []
    for a, b in zip(S.lhs, S.rhs):
        low = min_finite(a + b, 0)
        lhs.append([v - low for v in a])
        rhs.append([v - low for v in b])
    out = TwoSidedSystem.of(lhs, rhs, S.relation, S.ncols, S.domain)
    return out, max_entry(out)


def finitize(A: TropicalSystem, x) -> Vector:
    """Replace the infinite coordinates of an extended solution by one large value.

    ``A`` must have finite entries.  The replacement is
    ``max_finite(x) + (max(A) - min(A)) + 1``, which for a normalized matrix is
    ``max_finite(x) + M + 1``.
    """
    if A.has_inf:
        raise PreconditionError("finitize needs a matrix with finite entries")
    x = as_vector(x)
    if not is_tropical_solution(A, x):
        raise PreconditionError("x is not a solution of A")
    hi = max_entry(A)
    lo = min_finite((v for row in A.rows for v in row), 0)
    big = max_finite(x) + (hi - lo) + 1
    out = tuple(big if v is INF else v for v in x)
    assert is_tropical_solution(A, out)
    return out


def canonicalize_inf(A: TropicalSystem) -> Tuple[Optional[TropicalSystem], Optional[Vector]]:
    """Prepare an extended system for the infinity-elimination pipeline.

    Returns ``(None, witness)`` when the system is trivially solvable (no finite
    row remains, or some column is entirely infinite), else ``(A', None)`` with
    all-infinite rows removed and rows normalized to minimum 0.
    """
    reduced, _ = normalize(A)
    n = A.ncols
    if reduced.m == 0:
        return None, tuple(0 for _ in range(n))
    for j in range(n):
        if all(row[j] is INF for row in reduced.rows):
            return None, tuple(0 if c == j else INF for c in range(n))
    return reduced, None


def shift_to_zero(x) -> Vector:
    """Projectively shift so the smallest finite coordinate is 0."""
    x = as_vector(x)
    low = min_finite(x)
    if low is None:
        return x
    return tuple(v if v is INF else v - low for v in x)


def stack(A: TropicalSystem, B: TropicalSystem) -> TropicalSystem:
    if A.ncols != B.ncols:
        raise ShapeError("systems have different numbers of variables")
    domain = Domain.INT_INF if Domain.INT_INF in (A.domain, B.domain) else Domain.INT
    return TropicalSystem.of(A.rows + B.rows, A.ncols, domain)
