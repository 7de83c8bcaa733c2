"""Mean payoff games on bipartite weighted digraphs.

Vertices ``0..n1-1`` belong to player 1 (the maximizer) and ``n1..n1+n2-1`` to
player 2.  Player 1 wins when the liminf of the running average weight is
strictly positive.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .core import BudgetExceeded, ShapeError

Edge = Tuple[int, int, int]

BRUTE_CAP = 12


@dataclass(frozen=True)
class MeanPayoffGame:
    n1: int
    n2: int
    edges: Tuple[Edge, ...]
    start: int = 0

    def __post_init__(self):
        n = self.n1 + self.n2
        if self.n1 < 1:
            raise ShapeError("player 1 needs at least one vertex")
        if not 0 <= self.start < self.n1:
            raise ShapeError("the start vertex must belong to player 1")
        out = [0] * n
        for u, v, _ in self.edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ShapeError(f"edge ({u}, {v}) leaves the vertex range")
            if (u < self.n1) == (v < self.n1):
                raise ShapeError(f"edge ({u}, {v}) does not alternate between players")
            out[u] += 1
        dead = [v for v in range(n) if out[v] == 0]
        if dead:
            raise ShapeError(f"vertices without outgoing edges: {dead}")

    @classmethod
    def of(cls, n1: int, n2: int, edges, start: int = 0) -> "MeanPayoffGame":
        return cls(n1, n2, tuple((int(u), int(v), int(w)) for u, v, w in edges), start)

    @property
    def nvertices(self) -> int:
        return self.n1 + self.n2

    @property
    def max_weight(self) -> int:
        return max((abs(w) for _, _, w in self.edges), default=0)

    def owner(self, v: int) -> int:
        return 1 if v < self.n1 else 2

    def successors(self) -> List[List[Tuple[int, int]]]:
        succ: List[List[Tuple[int, int]]] = [[] for _ in range(self.nvertices)]
        for u, v, w in self.edges:
            succ[u].append((v, w))
        return succ


# -- exact value by positional strategy enumeration ---------------------------


def _cycle_mean(choice: Sequence[Tuple[int, int]], start: int) -> Fraction:
    seen: Dict[int, int] = {}
    path: List[int] = []
    v = start
    while v not in seen:
        seen[v] = len(path)
        path.append(v)
        v = choice[v][0]
    cycle = path[seen[v]:]
    total = sum(choice[u][1] for u in cycle)
    return Fraction(total, len(cycle))


def value_bruteforce(g: MeanPayoffGame, cap: int = BRUTE_CAP) -> Fraction:
    """max over player-1 positional strategies of min over player-2 ones."""
    if g.nvertices > cap:
        raise BudgetExceeded(f"{g.nvertices} vertices exceeds the brute-force cap {cap}")
    succ = g.successors()
    p1 = [succ[v] for v in range(g.n1)]
    p2 = [succ[v] for v in range(g.n1, g.nvertices)]
    best = None
    for s1 in itertools.product(*p1):
        worst = None
        for s2 in itertools.product(*p2):
            val = _cycle_mean(s1 + s2, g.start)
            if worst is None or val < worst:
                worst = val
                if best is not None and worst <= best:
                    break
        if best is None or worst > best:
            best = worst
    return best


# -- value iteration ------------------------------------------------------------


class _Iterator:
    """k-step game values via vectorized Bellman updates."""

    def __init__(self, g: MeanPayoffGame):
        order = sorted(g.edges, key=lambda e: e[0])
        self.src = np.array([e[0] for e in order], dtype=np.int64)
        self.dst = np.array([e[1] for e in order], dtype=np.int64)
        self.w = np.array([e[2] for e in order], dtype=np.int64)
        self.starts = np.searchsorted(self.src, np.arange(g.nvertices))
        self.is_max = np.arange(g.nvertices) < g.n1
        self.v = np.zeros(g.nvertices, dtype=np.int64)

    def step(self):
        cand = self.w + self.v[self.dst]
        hi = np.maximum.reduceat(cand, self.starts)
        lo = np.minimum.reduceat(cand, self.starts)
        self.v = np.where(self.is_max, hi, lo)


def _fits_int64(g: MeanPayoffGame, horizon: int) -> bool:
    return horizon * max(1, g.max_weight) < 2**62


def _python_values(g: MeanPayoffGame, horizon: int, stop=None):
    succ = g.successors()
    v = [0] * g.nvertices
    for k in range(1, horizon + 1):
        v = [
            (max if u < g.n1 else min)(w + v[t] for t, w in succ[u])
            for u in range(g.nvertices)
        ]
        if stop is not None and stop(k, v[g.start]):
            break
    return v, k


def mean_values(g: MeanPayoffGame) -> List[Fraction]:
    """Exact value of every vertex.

    Runs ``T = 4 |V|^3 W + 1`` Bellman steps; the k-step value is within
    ``2 |V| W`` of k times the mean value, so ``v_T / T`` is closer than
    ``1 / (2 |V|^2)`` to the true value and rounding to the nearest fraction
    with denominator at most |V| recovers it.
    """
    n, W = g.nvertices, max(1, g.max_weight)
    horizon = 4 * n**3 * W + 1
    if _fits_int64(g, horizon):
        it = _Iterator(g)
        for _ in range(horizon):
            it.step()
        totals = [int(t) for t in it.v]
    else:
        totals, _ = _python_values(g, horizon)
    return [Fraction(t, horizon).limit_denominator(n) for t in totals]


def decide(g: MeanPayoffGame) -> bool:
    """True iff player 1 secures a strictly positive mean payoff from the start.

    Uses the same Bellman iteration with the sign certified early: once the
    k-step value leaves ``[-2|V|W, 2|V|W]`` its sign is the sign of the mean
    value.  A positive value is at least 1/|V|, so after ``4 |V|^2 W + 1``
    steps a value still inside the band must be zero.
    """
    n, W = g.nvertices, max(1, g.max_weight)
    band = 2 * n * W
    horizon = 4 * n * n * W + 1
    if _fits_int64(g, horizon):
        it = _Iterator(g)
        for _ in range(horizon):
            it.step()
            val = int(it.v[g.start])
            if val > band:
                return True
            if val < -band:
                return False
        return False
    v, _ = _python_values(g, horizon, stop=lambda k, val: abs(val) > band)
    return v[g.start] > band


# -- constructions ----------------------------------------------------------------


def negate(g: MeanPayoffGame) -> MeanPayoffGame:
    """A game won by player 1 exactly when ``g`` is not.

    Owners swap and each weight w becomes ``-((N+1) w - 1)``: a mean value
    ``v`` turns into ``1 - (N+1) v``, which is positive iff ``v <= 0`` because
    nonzero values of ``g`` are at least ``1/N`` in absolute value.  A fresh
    start owned by the new player 1 passes to the old start.

    New numbering: old player-2 vertices first, then the fresh start, then the
    old player-1 vertices.
    """
    N = g.nvertices
    fresh = g.n2

    def renum(v: int) -> int:
        return v - g.n1 if v >= g.n1 else g.n2 + 1 + v

    edges = [(renum(u), renum(v), -((N + 1) * w - 1)) for u, v, w in g.edges]
    edges.append((fresh, renum(g.start), 0))
    return MeanPayoffGame.of(g.n2 + 1, g.n1, edges, fresh)


def combine_and(games: Sequence[MeanPayoffGame]) -> MeanPayoffGame:
    """Disjoint union where player 2 picks which component is played.

    Player-1 vertices of all copies come first followed by the fresh start;
    then the player-2 vertices of all copies followed by the fresh hub.
    """
    games = list(games)
    if not games:
        raise ValueError("need at least one game")
    n1 = sum(g.n1 for g in games) + 1
    n2 = sum(g.n2 for g in games) + 1
    s1, s2 = n1 - 1, n1 + n2 - 1
    edges = []
    off1 = off2 = 0
    for g in games:
        def renum(v: int, g=g, o1=off1, o2=off2) -> int:
            return o1 + v if v < g.n1 else n1 + o2 + (v - g.n1)

        edges.extend((renum(u), renum(v), w) for u, v, w in g.edges)
        edges.append((s2, renum(g.start), 0))
        off1 += g.n1
        off2 += g.n2
    edges.append((s1, s2, 0))
    return MeanPayoffGame.of(n1, n2, edges, s1)
