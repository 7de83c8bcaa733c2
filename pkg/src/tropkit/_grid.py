"""Vectorized grid scans shared by the oracles and the dimension search."""

from __future__ import annotations

import itertools
from typing import Iterator

import numpy as np

from .core import INF, Relation, TropicalSystem, TwoSidedSystem

CHUNK = 1 << 18


def dtype_for(rows, bound: int):
    big = max((abs(v) for row in rows for v in row if v is not INF), default=0)
    return np.int64 if big + abs(bound) < 2**60 else object


def row_terms(row, pts):
    cols = [j for j, v in enumerate(row) if v is not INF]
    if not cols:
        return None
    coef = np.array([row[j] for j in cols], dtype=pts.dtype)
    return pts[:, cols] + coef


def tropical_mask(rows, pts) -> np.ndarray:
    """Points (rows of ``pts``) at which every row attains its minimum twice.

    ``pts`` holds finite coordinates only; all-infinite rows always pass.
    """
    mask = np.ones(len(pts), dtype=bool)
    for row in rows:
        idx = np.nonzero(mask)[0]
        if len(idx) == 0:
            break
        vals = row_terms(row, pts[idx])
        if vals is None:
            continue
        low = vals.min(axis=1)
        mask[idx] = (vals == low[:, None]).sum(axis=1) >= 2
    return mask


def side_min(row, pts):
    vals = row_terms(row, pts)
    if vals is None:
        return None
    return vals.min(axis=1)


def minplus_mask(S: TwoSidedSystem, pts) -> np.ndarray:
    mask = np.ones(len(pts), dtype=bool)
    for a, b in zip(S.lhs, S.rhs):
        idx = np.nonzero(mask)[0]
        if len(idx) == 0:
            break
        left, right = side_min(a, pts[idx]), side_min(b, pts[idx])
        if left is None and right is None:
            continue
        if S.relation is Relation.EQ:
            if left is None or right is None:
                mask[idx] = False
            else:
                mask[idx] = left == right
        else:
            if right is None:
                continue
            if left is None:
                mask[idx] = False
            else:
                mask[idx] = left <= right
    return mask


def solution_mask(system, pts) -> np.ndarray:
    if isinstance(system, TropicalSystem):
        return tropical_mask(system.rows, pts)
    return minplus_mask(system, pts)


def blocks(n: int, lo: int, hi: int, dtype) -> Iterator[np.ndarray]:
    """All points of ``{lo..hi}^n`` in lexicographic order, in chunks."""
    width = hi - lo + 1
    if n == 0:
        yield np.zeros((1, 0), dtype=dtype)
        return
    tail = 0
    while tail < n and width ** (tail + 1) <= CHUNK:
        tail += 1
    tail = max(tail, 1)
    grid = np.indices((width,) * tail).reshape(tail, -1).T + lo
    grid = grid.astype(dtype)
    for prefix in itertools.product(range(lo, hi + 1), repeat=n - tail):
        head = np.tile(np.array(prefix, dtype=dtype), (len(grid), 1))
        yield np.hstack([head, grid]) if n > tail else grid
