"""Difference-bound matrices and the Difference-Bound Shape lattice.

Orientation, used throughout the package: entry ``(i, j)`` of a Dbm encodes
``v_i - v_j <= entries[i][j]`` where ``v_0`` is the constant 0 and ``v_i`` for
``i >= 1`` is variable ``x_i``.  So ``entries[i][0]`` is an upper bound of
``x_i`` and ``entries[0][j]`` is the negated lower bound of ``x_j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .bounds import INF, Bound, bound

Rows = tuple[tuple[Bound, ...], ...]


class DimensionError(ValueError):
    """Operands live in spaces of different dimension."""


@dataclass(frozen=True)
class Constraint:
    """``v_i - v_j <= bound``."""

    i: int
    j: int
    bound: Fraction

    def __post_init__(self):
        if self.i == self.j:
            raise ValueError("constraint indices must differ")
        if self.bound is INF:
            raise ValueError("constraint bound must be finite")
        object.__setattr__(self, "bound", bound(self.bound))

    def as_tuple(self) -> tuple[int, int, Fraction]:
        return (self.i, self.j, self.bound)


def _freeze(rows: Iterable[Iterable]) -> Rows:
    return tuple(tuple(bound(v) for v in row) for row in rows)


@dataclass(frozen=True)
class Dbm:
    dim: int
    entries: Rows

    def __post_init__(self):
        size = self.dim + 1
        if self.dim < 0:
            raise ValueError("dimension must be non-negative")
        if len(self.entries) != size or any(len(r) != size for r in self.entries):
            raise ValueError(f"a Dbm of dim {self.dim} needs {size}x{size} entries")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Dbm":
        frozen = _freeze(rows)
        return cls(len(frozen) - 1, frozen)

    @classmethod
    def top(cls, dim: int) -> "Dbm":
        size = dim + 1
        return cls(dim, tuple(
            tuple(Fraction(0) if i == j else INF for j in range(size))
            for i in range(size)))

    @property
    def size(self) -> int:
        return self.dim + 1

    def __getitem__(self, ij: tuple[int, int]) -> Bound:
        i, j = ij
        return self.entries[i][j]

    def to_lists(self) -> list[list[Bound]]:
        return [list(r) for r in self.entries]

    def replace(self, cells: dict[tuple[int, int], Bound]) -> "Dbm":
        rows = self.to_lists()
        for (i, j), b in cells.items():
            rows[i][j] = bound(b)
        return Dbm(self.dim, _freeze(rows))

    def leq(self, other: "Dbm") -> bool:
        """Entrywise order on matrices (not the shape order)."""
        _check_dims(self.dim, other.dim)
        return all(a <= b for ra, rb in zip(self.entries, other.entries)
                   for a, b in zip(ra, rb))

    def finite_cells(self) -> list[tuple[int, int, Fraction]]:
        return [(i, j, b) for i, row in enumerate(self.entries)
                for j, b in enumerate(row) if i != j and b is not INF]


def _check_dims(a: int, b: int) -> None:
    if a != b:
        raise DimensionError(f"dimension mismatch: {a} vs {b}")


def from_constraints(n: int, cs: Iterable) -> Dbm:
    """Top matrix refined by the per-cell minimum of the listed bounds.

    Accepts Constraint objects or ``(i, j, bound)`` triples.
    """
    rows = Dbm.top(n).to_lists()
    for c in cs:
        i, j, b = c.as_tuple() if isinstance(c, Constraint) else c
        if not (0 <= i <= n and 0 <= j <= n):
            raise IndexError(f"constraint index ({i}, {j}) out of range for dim {n}")
        b = bound(b)
        if b < rows[i][j]:
            rows[i][j] = b
    return Dbm(n, _freeze(rows))


def floyd_warshall(rows: list[list[Bound]]) -> bool:
    """In-place shortest-path closure; returns False on a negative cycle."""
    size = len(rows)
    for k in range(size):
        rk = rows[k]
        for i in range(size):
            rik = rows[i][k]
            if rik is INF:
                continue
            ri = rows[i]
            for j in range(size):
                rkj = rk[j]
                if rkj is INF:
                    continue
                s = rik + rkj
                if s < ri[j]:
                    ri[j] = s
    return all(rows[i][i] >= 0 for i in range(size))


@dataclass(frozen=True)
class Shape:
    """A Difference-Bound Shape: Empty (``matrix is None``) or a closed Dbm.

    Build shapes through :func:`close` (or :meth:`top` / :meth:`empty`);
    the constructor trusts that ``matrix`` is already closed.
    """

    dim: int
    matrix: Optional[Dbm]

    @classmethod
    def empty(cls, dim: int) -> "Shape":
        return cls(dim, None)

    @classmethod
    def top(cls, dim: int) -> "Shape":
        return cls(dim, Dbm.top(dim))

    @property
    def is_empty(self) -> bool:
        return self.matrix is None

    def __repr__(self) -> str:
        if self.matrix is None:
            return f"Shape(dim={self.dim}, empty)"
        cs = ", ".join(f"v{i}-v{j}<={b}" for i, j, b in self.matrix.finite_cells())
        return f"Shape(dim={self.dim}, {{{cs}}})"


def close(m: Dbm) -> Shape:
    rows = m.to_lists()
    if not floyd_warshall(rows):
        return Shape.empty(m.dim)
    for i in range(m.size):
        rows[i][i] = Fraction(0)
    return Shape(m.dim, Dbm(m.dim, _freeze(rows)))


def leq(a: Shape, b: Shape) -> bool:
    _check_dims(a.dim, b.dim)
    if a.is_empty:
        return True
    if b.is_empty:
        return False
    return a.matrix.leq(b.matrix)


def join(a: Shape, b: Shape) -> Shape:
    _check_dims(a.dim, b.dim)
    if a.is_empty:
        return b
    if b.is_empty:
        return a
    rows = tuple(tuple(max(x, y) for x, y in zip(ra, rb))
                 for ra, rb in zip(a.matrix.entries, b.matrix.entries))
    return Shape(a.dim, Dbm(a.dim, rows))


def meet(a: Shape, b: Shape) -> Shape:
    _check_dims(a.dim, b.dim)
    if a.is_empty:
        return a
    if b.is_empty:
        return b
    rows = tuple(tuple(min(x, y) for x, y in zip(ra, rb))
                 for ra, rb in zip(a.matrix.entries, b.matrix.entries))
    return close(Dbm(a.dim, rows))


def meet_constraints(s: Shape, cs: Iterable) -> Shape:
    """Meet ``s`` with a list of ``(i, j, bound)`` constraints."""
    if s.is_empty:
        return s
    return meet(s, close(from_constraints(s.dim, cs)))


def forget(s: Shape, v: int) -> Shape:
    """Existentially project variable ``v`` (1-based) out of ``s``."""
    if not 1 <= v <= s.dim:
        raise IndexError(f"variable index {v} out of range for dim {s.dim}")
    if s.is_empty:
        return s
    rows = s.matrix.to_lists()
    for k in range(s.dim + 1):
        if k != v:
            rows[v][k] = INF
            rows[k][v] = INF
    return Shape(s.dim, Dbm(s.dim, _freeze(rows)))


def shift(s: Shape, v: int, c) -> Shape:
    """Exact image of ``x_v := x_v + c``."""
    if not 1 <= v <= s.dim:
        raise IndexError(f"variable index {v} out of range for dim {s.dim}")
    if s.is_empty:
        return s
    c = bound(c)
    rows = s.matrix.to_lists()
    for k in range(s.dim + 1):
        if k != v:
            rows[v][k] = rows[v][k] + c
            if rows[k][v] is not INF:
                rows[k][v] = rows[k][v] - c
    return Shape(s.dim, Dbm(s.dim, _freeze(rows)))


def to_constraints(s: Shape) -> list[Constraint]:
    if s.is_empty:
        raise ValueError("an empty shape has no constraint representation")
    return [Constraint(i, j, b) for i, j, b in s.matrix.finite_cells()]


def satisfies(m: Dbm, point: Sequence) -> bool:
    """Does ``point`` (values of x_1..x_n) satisfy every constraint of ``m``?"""
    v = (0, *point)
    for i, row in enumerate(m.entries):
        for j, b in enumerate(row):
            if b is not INF and v[i] - v[j] > b:
                return False
    return True
