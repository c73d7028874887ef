"""Minimal constraint systems for closed DBMs and strongly closed octagons.

``transitive_reduce`` follows the zero-equivalence-class construction: indices
connected by zero-weight cycles are grouped, each group is kept as a single
directed cycle, and only the non-redundant edges between group leaders are
kept.  ``strong_reduce`` is greedy deletion checked against strong closure,
which also catches consequences of the strengthening rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .bounds import INF, Bound
from .dbm import Shape, close, from_constraints
from .octagon import (OctShape, bar, canonical_cell, cell_constraint,
                      oct_from_constraints, strong_close)

Cell = tuple[int, int]


@dataclass(frozen=True)
class ReducedSystem:
    """A non-redundant constraint system.

    ``kept`` holds ``(i, j, bound)`` matrix cells in row-major order.  For
    octagons only the representative cell of each coherent pair is listed.
    """

    dim: int
    kept: tuple[tuple[int, int, Fraction], ...]
    origin: str  # "dbm" | "oct"

    def __len__(self) -> int:
        return len(self.kept)

    def cells(self) -> frozenset[Cell]:
        """All matrix cells covered, mirrors included for octagons."""
        out = set()
        for i, j, _ in self.kept:
            out.add((i, j))
            if self.origin == "oct":
                out.add((bar(j), bar(i)))
        return frozenset(out)

    def constraints(self) -> list:
        """Kept constraints as ``(i, j, c)`` (dbm) or ``(a, b, k, l, c)`` (oct)."""
        if self.origin == "dbm":
            return list(self.kept)
        return [cell_constraint(i, j, c).as_tuple() for i, j, c in self.kept]

    def to_shape(self) -> Union[Shape, OctShape]:
        if self.origin == "dbm":
            return close(from_constraints(self.dim, self.kept))
        return strong_close(oct_from_constraints(self.dim, self.constraints()))


@dataclass(frozen=True)
class ThresholdSet:
    """Per-cell strictly ascending lists of finite bounds."""

    cells: dict[Cell, tuple[Fraction, ...]] = field(default_factory=dict)

    def __post_init__(self):
        norm = {}
        for cell, bs in self.cells.items():
            vals = tuple(sorted(set(bs)))
            if vals:
                norm[tuple(cell)] = vals
        object.__setattr__(self, "cells", norm)

    def __bool__(self) -> bool:
        return bool(self.cells)

    def __len__(self) -> int:
        return sum(len(v) for v in self.cells.values())

    def get(self, cell: Cell) -> tuple[Fraction, ...]:
        return self.cells.get(cell, ())

    def smallest_at_least(self, cell: Cell, lower: Bound):
        for t in self.get(cell):
            if t >= lower:
                return t
        return None

    def union(self, other: "ThresholdSet") -> "ThresholdSet":
        merged: dict[Cell, tuple] = dict(self.cells)
        for cell, bs in other.cells.items():
            merged[cell] = merged.get(cell, ()) + bs
        return ThresholdSet(merged)


def zero_classes(rows) -> list[list[int]]:
    """Partition indices by ``i ~ j iff m[i][j] + m[j][i] == 0`` (closed input)."""
    size = len(rows)
    leader = list(range(size))
    for i in range(size):
        if leader[i] != i:
            continue
        for j in range(i + 1, size):
            if leader[j] == j and rows[i][j] is not INF and rows[j][i] is not INF \
                    and rows[i][j] + rows[j][i] == 0:
                leader[j] = i
    classes: dict[int, list[int]] = {}
    for i, l in enumerate(leader):
        classes.setdefault(l, []).append(i)
    return [classes[l] for l in sorted(classes)]


def transitive_reduce(s: Shape) -> ReducedSystem:
    if s.is_empty:
        raise ValueError("cannot reduce an empty shape")
    rows = s.matrix.entries
    classes = zero_classes(rows)
    kept: set[tuple[int, int, Fraction]] = set()
    for cls in classes:
        if len(cls) > 1:
            for a, b in zip(cls, cls[1:] + cls[:1]):
                kept.add((a, b, rows[a][b]))
    leaders = [cls[0] for cls in classes]
    for a in leaders:
        for b in leaders:
            if a == b or rows[a][b] is INF:
                continue
            redundant = any(
                k != a and k != b and rows[a][k] is not INF and rows[k][b] is not INF
                and rows[a][k] + rows[k][b] <= rows[a][b]
                for k in leaders)
            if not redundant:
                kept.add((a, b, rows[a][b]))
    return ReducedSystem(s.dim, tuple(sorted(kept)), "dbm")


def strong_reduce(s: OctShape) -> ReducedSystem:
    if s.is_empty:
        raise ValueError("cannot reduce an empty shape")
    target = s.matrix
    pairs = [(i, j, b) for i, j, b in target.finite_cells() if (i, j) == canonical_cell(i, j)]
    kept = list(pairs)
    for cand in pairs:
        trial = [p for p in kept if p != cand]
        cs = [cell_constraint(i, j, b).as_tuple() for i, j, b in trial]
        if strong_close(oct_from_constraints(s.dim, cs)).matrix == target:
            kept = trial
    return ReducedSystem(s.dim, tuple(kept), "oct")


def reduce_shape(s: Union[Shape, OctShape]) -> ReducedSystem:
    return strong_reduce(s) if isinstance(s, OctShape) else transitive_reduce(s)


def harvest_thresholds(m0: Union[Shape, OctShape]) -> ThresholdSet:
    """Closed-form bounds of the cells that reduction drops from ``m0``."""
    if m0.is_empty:
        return ThresholdSet()
    kept = reduce_shape(m0).cells()
    return ThresholdSet({(i, j): (b,) for i, j, b in m0.matrix.finite_cells()
                         if (i, j) not in kept})
