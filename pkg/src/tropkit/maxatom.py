"""Max-atom systems: inequalities ``max_t(x_t + o_t) + k >= x_z`` over the integers.

The solver is the classical greatest-fixpoint iteration: start every variable
at 0 and keep lowering the target of a violated atom to the value its right
side allows.  Solutions are closed under pointwise max and under adding a
constant, so if the system is satisfiable there is a solution below the start
vector whose largest coordinate is 0; by the spread bound (max - min <= C where
C is the sum of absolute constants) it lives in ``[-C, 0]^n``.  Every iterate
dominates every such solution, so the iteration may stop with UNSAT as soon as
some variable falls below ``-C`` or as soon as every variable has been lowered
(the coordinate where that solution is 0 can never move).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .core import ShapeError

Term = Tuple[int, int]


@dataclass(frozen=True)
class MaxAtom:
    """``max_t(x[var_t] + offset_t) + k >= x[target]``."""

    target: int
    terms: Tuple[Term, ...]
    k: int = 0

    def __post_init__(self):
        if not self.terms:
            raise ValueError("an atom needs at least one term")

    @classmethod
    def of(cls, target: int, terms, k: int = 0) -> "MaxAtom":
        """Terms may be given as plain variable indices or (var, offset) pairs."""
        norm = []
        for t in terms:
            if isinstance(t, int):
                norm.append((t, 0))
            else:
                v, o = t
                norm.append((int(v), int(o)))
        return cls(int(target), tuple(norm), int(k))

    @property
    def variables(self) -> Tuple[int, ...]:
        return (self.target,) + tuple(v for v, _ in self.terms)

    def is_binary(self) -> bool:
        return len(self.terms) == 2 and all(o == 0 for _, o in self.terms)

    def __str__(self):
        inner = ", ".join(f"x{v}{o:+d}" if o else f"x{v}" for v, o in self.terms)
        return f"max{{{inner}}}{self.k:+d} >= x{self.target}"


@dataclass(frozen=True)
class MaxAtomSystem:
    nvars: int
    atoms: Tuple[MaxAtom, ...] = ()

    def __post_init__(self):
        if self.nvars < 0:
            raise ValueError("negative variable count")
        for a in self.atoms:
            for v in a.variables:
                if not 0 <= v < self.nvars:
                    raise ShapeError(f"variable x{v} out of range for {self.nvars} variables")

    @classmethod
    def of(cls, nvars: int, atoms) -> "MaxAtomSystem":
        return cls(nvars, tuple(atoms))

    def is_binary(self) -> bool:
        return all(a.is_binary() for a in self.atoms)


def _term_max(atom: MaxAtom, x: Sequence[int]) -> int:
    return max(x[v] + o for v, o in atom.terms)


def atom_holds(atom: MaxAtom, x: Sequence[int]) -> bool:
    for v in atom.variables:
        if not 0 <= v < len(x):
            raise ShapeError(f"variable x{v} out of range for an assignment of length {len(x)}")
    return _term_max(atom, x) + atom.k >= x[atom.target]


def satisfies(S: MaxAtomSystem, x: Sequence[int]) -> bool:
    if len(x) != S.nvars:
        raise ShapeError(f"assignment of length {len(x)} for {S.nvars} variables")
    return all(atom_holds(a, x) for a in S.atoms)


def constant_sum(S: MaxAtomSystem) -> int:
    return sum(abs(a.k) + sum(abs(o) for _, o in a.terms) for a in S.atoms)


def to_binary_form(S: MaxAtomSystem) -> MaxAtomSystem:
    """Rewrite every atom as ``max{x, y} + k >= z``.

    A term ``x + a`` with ``a != 0`` is replaced by a fresh ``u`` tied to
    ``x + a`` through ``max{x,x}+a >= u`` and ``max{u,u}-a >= x``.  Unary atoms
    duplicate their term; atoms with more than two terms are folded left with
    fresh variables ``w >= max{t1, t2}``.  Offsets of the same (var, offset)
    pair share one fresh variable.  Already-binary systems come back unchanged.
    """
    if S.is_binary():
        return S
    nvars = S.nvars
    out: List[MaxAtom] = []
    shifted: Dict[Tuple[int, int], int] = {}

    def fresh() -> int:
        nonlocal nvars
        nvars += 1
        return nvars - 1

    def plain(v: int, o: int) -> int:
        if o == 0:
            return v
        if (v, o) not in shifted:
            u = fresh()
            shifted[(v, o)] = u
            out.append(MaxAtom(u, ((v, 0), (v, 0)), o))
            out.append(MaxAtom(v, ((u, 0), (u, 0)), -o))
        return shifted[(v, o)]

    for atom in S.atoms:
        if atom.is_binary():
            out.append(atom)
            continue
        vs = [plain(v, o) for v, o in atom.terms]
        if len(vs) == 1:
            vs = vs * 2
        while len(vs) > 2:
            w = fresh()
            out.append(MaxAtom(w, ((vs[0], 0), (vs[1], 0)), 0))
            vs = [w] + vs[2:]
        out.append(MaxAtom(atom.target, ((vs[0], 0), (vs[1], 0)), atom.k))
    return MaxAtomSystem(nvars, tuple(out))


def _watchers(S: MaxAtomSystem) -> List[List[int]]:
    watch: List[List[int]] = [[] for _ in range(S.nvars)]
    for idx, atom in enumerate(S.atoms):
        for v in {v for v, _ in atom.terms}:
            watch[v].append(idx)
    return watch


def greatest_fixpoint(S: MaxAtomSystem) -> Tuple[Optional[Tuple[int, ...]], int]:
    """Run the lowering iteration; return (assignment or None, number of lowerings).

    Violated atoms are processed in input order: a heap of candidate indices
    always yields the first atom that may be violated.
    """
    C = constant_sum(S)
    x = [0] * S.nvars
    lowered = [False] * S.nvars
    n_lowered = 0
    watch = _watchers(S)
    heap = list(range(len(S.atoms)))
    queued = [True] * len(S.atoms)
    steps = 0
    while heap:
        idx = heapq.heappop(heap)
        queued[idx] = False
        atom = S.atoms[idx]
        bound = _term_max(atom, x) + atom.k
        z = atom.target
        if bound >= x[z]:
            continue
        x[z] = bound
        steps += 1
        if bound < -C:
            return None, steps
        if not lowered[z]:
            lowered[z] = True
            n_lowered += 1
            if n_lowered == S.nvars:
                return None, steps
        for j in watch[z]:
            if not queued[j]:
                queued[j] = True
                heapq.heappush(heap, j)
        # the atom itself may still be violated when z is among its terms
        if not queued[idx]:
            queued[idx] = True
            heapq.heappush(heap, idx)
    return tuple(x), steps


def solve(S: MaxAtomSystem) -> Optional[Tuple[int, ...]]:
    """A satisfying assignment with values in ``[-C, 0]``, or None if UNSAT."""
    x, _ = greatest_fixpoint(S)
    return x


# -- extended domain ------------------------------------------------------------
#
# Over Z with -inf adjoined an atom whose terms are all -inf forces its target to
# -inf, and an assignment counts as a solution only if some variable is finite.
# The same iteration works: a variable that falls below -C can be finite in no
# bounded solution, so it is sent straight to -inf.


def _ext_term_max(atom: MaxAtom, x) -> Optional[int]:
    best = None
    for v, o in atom.terms:
        if x[v] is not None:
            val = x[v] + o
            if best is None or val > best:
                best = val
    return best


def ext_atom_holds(atom: MaxAtom, x) -> bool:
    """``atom_holds`` where ``None`` stands for minus infinity."""
    z = x[atom.target]
    if z is None:
        return True
    m = _ext_term_max(atom, x)
    return m is not None and m + atom.k >= z


def ext_satisfies(S: MaxAtomSystem, x) -> bool:
    if len(x) != S.nvars:
        raise ShapeError(f"assignment of length {len(x)} for {S.nvars} variables")
    if all(v is None for v in x):
        return False
    return all(ext_atom_holds(a, x) for a in S.atoms)


def _ext_argmax(atom: MaxAtom, x) -> Tuple[Optional[int], int]:
    """Largest term value and the variable attaining it (first on ties)."""
    best, arg = None, -1
    for v, o in atom.terms:
        if x[v] is not None:
            val = x[v] + o
            if best is None or val > best:
                best, arg = val, v
    return best, arg


def solve_extended(S: MaxAtomSystem) -> Optional[Tuple[Optional[int], ...]]:
    """Solve over Z with minus infinity (``None``); the all-minus-infinity
    assignment does not count.  Finite values lie in ``[-C, 0]``.

    Variables that keep lowering each other around a negative cycle would
    otherwise walk down to ``-C`` one cycle weight per round; such runs are
    detected and skipped (see ``_jump``).
    """
    C = constant_sum(S)
    x: List[Optional[int]] = [0] * S.nvars
    lowered = [False] * S.nvars
    n_lowered = 0
    # policy[z]: (atom index, variable whose term last set z)
    policy: List[Optional[Tuple[int, int]]] = [None] * S.nvars
    watch = _watchers(S)
    heap = list(range(len(S.atoms)))
    queued = [True] * len(S.atoms)

    def push(j):
        if not queued[j]:
            queued[j] = True
            heapq.heappush(heap, j)

    while heap:
        idx = heapq.heappop(heap)
        queued[idx] = False
        atom = S.atoms[idx]
        z = atom.target
        if x[z] is None:
            continue
        bound, arg = _ext_argmax(atom, x)
        if bound is not None:
            bound += atom.k
            if bound >= x[z]:
                continue
            if bound < -C:
                bound = None
        x[z] = bound
        policy[z] = (idx, arg) if bound is not None else None
        if not lowered[z]:
            lowered[z] = True
            n_lowered += 1
            if n_lowered == S.nvars:
                return None
        changed = [z] if bound is None else [z] + _jump(S, x, policy, z, C)
        for v in changed:
            for j in watch[v]:
                push(j)
        push(idx)
    if all(v is None for v in x):
        return None
    return tuple(x)


def _policy_cycle(x, policy, z) -> Optional[List[int]]:
    path, seen = [z], {z}
    y = policy[z][1]
    while y != z:
        if y in seen or x[y] is None or policy[y] is None:
            return None
        path.append(y)
        seen.add(y)
        y = policy[y][1]
    return path


def _policy_offset(atom: MaxAtom, v: int) -> int:
    return max(o for u, o in atom.terms if u == v)


def _jump(S: MaxAtomSystem, x, policy, z, C) -> List[int]:
    """Skip rounds of a self-lowering cycle; returns the variables changed.

    Following ``policy`` from z may close a cycle z_0 -> ... -> z_{L-1} -> z_0
    in which each z_i was last set by the term of z_{i+1} in atom a_i.  One
    round of genuine updates from z_{L-1} down to z_0 makes every edge but the
    closing one tight, after which each further round lowers every cycle
    variable by the cycle weight |w| exactly, as long as each a_i keeps its
    policy term as the maximum.  Values only decrease, so comparing the
    policy term after r rounds with the current value of every other term
    gives a safe r.  Each skipped round is a sequence of ordinary updates, so
    the iterate still dominates every solution.
    """
    cyc = _policy_cycle(x, policy, z)
    if cyc is None or len(cyc) < 1:
        return []
    L = len(cyc)
    touched: List[int] = []
    atoms = [S.atoms[policy[v][0]] for v in cyc]
    offs = [_policy_offset(atoms[i], cyc[(i + 1) % L]) for i in range(L)]
    for i in range(L - 1, -1, -1):
        zi, nxt = cyc[i], cyc[(i + 1) % L]
        best, _ = _ext_argmax(atoms[i], x)
        if best is None or x[nxt] + offs[i] != best:
            return touched
        val = best + atoms[i].k
        if val >= x[zi] or val < -C:
            return touched
        x[zi] = val
        touched.append(zi)
    # all edges but the closing one are tight now
    w = x[cyc[0]] - x[cyc[-1]] + offs[-1] + atoms[-1].k
    if w >= 0:
        return touched
    step = -w
    r = (max(x[v] for v in cyc) + C) // step + 1
    for i in range(L):
        nxt = cyc[(i + 1) % L]
        P = x[nxt] + offs[i]
        for v, o in atoms[i].terms:
            if (v == nxt and o == offs[i]) or x[v] is None:
                continue
            if v in cyc and o <= offs[i] and v == nxt:
                continue
            r = min(r, (P - (x[v] + o)) // step)
    if r <= 0:
        return touched
    for v in cyc:
        x[v] -= r * step
        if x[v] < -C:
            x[v] = None
            policy[v] = None
    return cyc
