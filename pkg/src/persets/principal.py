"""Degree-k Vietoris-Rips persistence of a 2k+2 point space, geometrically.

For |X| = 2k+2 the degree-k diagram has at most one point, and it is
computable from the two largest distances out of every point: with
t_d(x) the largest and t_b(x) the second largest,

    t_b(X) = max_x t_b(x),   t_d(X) = min_x t_d(x),

and the diagram is {(t_b(X), t_d(X))} exactly when t_b(X) < t_d(X),
empty otherwise.  This costs O(n^2) per matrix and vectorizes over
batches of matrices, which is what the sampling engine runs on.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import SizeMismatch, TooFewPoints
from .metric import DistanceMatrix


@dataclass(frozen=True)
class PrincipalDiagram:
    """Empty diagram or a single (birth, death) point with birth < death."""

    point: Optional[tuple[float, float]] = None

    @property
    def is_empty(self) -> bool:
        return self.point is None

    @property
    def persistence(self) -> float:
        return 0.0 if self.point is None else self.point[1] - self.point[0]


@dataclass(frozen=True)
class PointExtremes:
    """Per-point (t_b, t_d, index of the unique farthest point or None)."""

    per_point: tuple[tuple[float, float, Optional[int]], ...]

    def tb_global(self) -> float:
        return max(p[0] for p in self.per_point)

    def td_global(self) -> float:
        return min(p[1] for p in self.per_point)


def row_extremes(mats: np.ndarray):
    """(t_b, t_d) of every row of a batch of matrices, vectorized.

    ``mats`` has shape (..., n, n).  The row's diagonal zero doubles as the
    second-largest value when n == 2, matching the pseudo-metric convention
    (a two-point space has t_b = 0, t_d = its diameter).
    """
    s = np.sort(mats, axis=-1)
    return s[..., -2], s[..., -1]


def principal_pairs(mats: np.ndarray):
    """Global (t_b(X), t_d(X)) for a batch of matrices of shape (..., n, n)."""
    tb_rows, td_rows = row_extremes(mats)
    return tb_rows.max(axis=-1), td_rows.min(axis=-1)


def point_extremes(matrix: DistanceMatrix) -> PointExtremes:
    """Per-point extremes of a single matrix; ties leave the index unset."""
    if matrix.n < 2:
        raise TooFewPoints("point extremes need at least 2 points")
    a = matrix.entries
    tb_rows, td_rows = row_extremes(a)
    per = []
    for i in range(matrix.n):
        row = a[i].copy()
        row[i] = -np.inf  # the farthest point is over the *other* indices
        top = np.flatnonzero(row == td_rows[i])
        vd = int(top[0]) if top.size == 1 else None
        per.append((float(tb_rows[i]), float(td_rows[i]), vd))
    return PointExtremes(tuple(per))


def principal_diagram(matrix: DistanceMatrix, k: int) -> PrincipalDiagram:
    """The unique degree-k diagram point of a 2k+2 point space, or empty.

    Fewer than 2k+2 points can never produce degree-k homology, so that
    case is a constant-empty fast path.  More points are out of scope
    (the diagram may then hold several points: use the brute-force
    oracle) and raise SizeMismatch.

    The comparison t_b < t_d is exact: ties mean no persistence, and for
    continuous samples ties have measure zero.
    """
    if k < 0:
        raise SizeMismatch("k must be >= 0")
    n = 2 * k + 2
    if matrix.n < n:
        return PrincipalDiagram(None)
    if matrix.n > n:
        raise SizeMismatch(f"degree {k} needs at most {n} points, got {matrix.n}")
    tb, td = principal_pairs(matrix.entries)
    if tb < td:
        return PrincipalDiagram((float(tb), float(td)))
    return PrincipalDiagram(None)


def ptolemy_slack(matrix: DistanceMatrix) -> float:
    """Worst Ptolemaic slack over the three pairings of a 4-point space.

    The three ways of splitting {x1..x4} into two pairs give products
    p_i = d(pair) * d(opposite pair); the Ptolemaic inequality for the
    4-tuple says every p_i <= p_j + p_k, and only the largest product can
    break it.  Returned is max_i (p_i - p_j - p_k): <= 0 certifies the
    inequality, and equality 0 is attained by concyclic planar points.
    """
    if matrix.n != 4:
        raise SizeMismatch("ptolemy_slack needs exactly 4 points")
    a = matrix.entries
    p1 = a[0, 1] * a[2, 3]
    p2 = a[0, 2] * a[1, 3]
    p3 = a[0, 3] * a[1, 2]
    total = p1 + p2 + p3
    return float(max(2.0 * p - total for p in (p1, p2, p3)))
