"""Uniform access to the two shape domains, keyed by ``"dbm"`` or ``"oct"``.

The widening operators and the analyzer are written once against this
interface.  Variables are 0-based here; the DBM adapter shifts them by one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from . import dbm, octagon
from .reduction import strong_reduce, transitive_reduce


@dataclass(frozen=True)
class Domain:
    name: str
    matrix_type: type
    shape_type: type
    close: Callable
    leq: Callable
    join: Callable
    meet: Callable
    reduce: Callable
    top_matrix: Callable
    from_cells: Callable

    def top(self, n: int):
        return self.shape_type.top(n)

    def empty(self, n: int):
        return self.shape_type.empty(n)

    def size(self, n: int) -> int:
        """Matrix side length for ``n`` variables."""
        return n + 1 if self.name == "dbm" else 2 * n

    def cells(self, n: int) -> int:
        """Number of off-diagonal cells (the widening certificate bound)."""
        s = self.size(n)
        return s * (s - 1)

    def matrix(self, n: int, rows):
        return self.matrix_type(n, tuple(tuple(r) for r in rows))


def _dbm_cells(n, cells):
    return dbm.from_constraints(n, cells)


def _oct_cells(n, cells):
    rows = octagon.OctMatrix.top(n).to_lists()
    for i, j, b in cells:
        if b < rows[i][j]:
            rows[i][j] = b
    return octagon.OctMatrix(n, tuple(tuple(r) for r in rows))


DBM = Domain("dbm", dbm.Dbm, dbm.Shape, dbm.close, dbm.leq, dbm.join, dbm.meet,
             transitive_reduce, dbm.Dbm.top, _dbm_cells)
OCT = Domain("oct", octagon.OctMatrix, octagon.OctShape, octagon.strong_close,
             octagon.oct_leq, octagon.oct_join, octagon.oct_meet, strong_reduce,
             octagon.OctMatrix.top, _oct_cells)

DOMAINS = {"dbm": DBM, "oct": OCT}


def domain_of(x) -> Domain:
    if isinstance(x, (dbm.Shape, dbm.Dbm)):
        return DBM
    if isinstance(x, (octagon.OctShape, octagon.OctMatrix)):
        return OCT
    raise TypeError(f"not a shape or matrix: {type(x).__name__}")
