"""Coherent DBMs over doubled variables and the Octagonal-Shape lattice.

Index ``2k`` stands for ``+x_k`` and ``2k+1`` for ``-x_k`` (``k`` is 0-based),
and entry ``(i, j)`` encodes ``v_i - v_j <= c``.  Every OctMatrix is coherent,
``m[i][j] == m[bar(j)][bar(i)]`` with ``bar(i) = i ^ 1``; construction enforces
this by taking the minimum of each cell and its mirror.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .bounds import INF, Bound, bound
from .dbm import DimensionError, Rows, floyd_warshall


def bar(i: int) -> int:
    return i ^ 1


def _coherent(rows: list[list[Bound]]) -> Rows:
    size = len(rows)
    out = [[bound(v) for v in r] for r in rows]
    for i in range(size):
        for j in range(size):
            a, b = out[i][j], out[bar(j)][bar(i)]
            if b < a:
                out[i][j] = b
            elif a < b:
                out[bar(j)][bar(i)] = a
    return tuple(tuple(r) for r in out)


@dataclass(frozen=True)
class OctConstraint:
    """``a * x_k + b * x_l <= c``; unary constraints have ``b == 0`` and ``l == k``."""

    a: int
    b: int
    k: int
    l: int
    c: Fraction

    def __post_init__(self):
        if self.a not in (-1, 0, 1) or self.b not in (-1, 0, 1):
            raise ValueError("coefficients must be in {-1, 0, +1}")
        if self.a == 0 and self.b == 0:
            raise ValueError("at least one coefficient must be non-zero")
        object.__setattr__(self, "c", bound(self.c))

    def as_tuple(self) -> tuple[int, int, int, int, Fraction]:
        return (self.a, self.b, self.k, self.l, self.c)


@dataclass(frozen=True)
class OctMatrix:
    dim: int
    entries: Rows

    def __post_init__(self):
        size = 2 * self.dim
        if self.dim < 0:
            raise ValueError("dimension must be non-negative")
        if len(self.entries) != size or any(len(r) != size for r in self.entries):
            raise ValueError(f"an OctMatrix of dim {self.dim} needs {size}x{size} entries")
        object.__setattr__(self, "entries", _coherent([list(r) for r in self.entries]))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "OctMatrix":
        if len(rows) % 2:
            raise ValueError("an OctMatrix has an even number of rows")
        return cls(len(rows) // 2, tuple(tuple(r) for r in rows))

    @classmethod
    def top(cls, dim: int) -> "OctMatrix":
        size = 2 * dim
        return cls(dim, tuple(
            tuple(Fraction(0) if i == j else INF for j in range(size))
            for i in range(size)))

    @property
    def size(self) -> int:
        return 2 * self.dim

    def __getitem__(self, ij: tuple[int, int]) -> Bound:
        i, j = ij
        return self.entries[i][j]

    def to_lists(self) -> list[list[Bound]]:
        return [list(r) for r in self.entries]

    def leq(self, other: "OctMatrix") -> bool:
        _check_dims(self.dim, other.dim)
        return all(a <= b for ra, rb in zip(self.entries, other.entries)
                   for a, b in zip(ra, rb))

    def finite_cells(self) -> list[tuple[int, int, Fraction]]:
        return [(i, j, b) for i, row in enumerate(self.entries)
                for j, b in enumerate(row) if i != j and b is not INF]

    def is_coherent(self) -> bool:
        e = self.entries
        return all(e[i][j] == e[bar(j)][bar(i)]
                   for i in range(self.size) for j in range(self.size))


def _check_dims(a: int, b: int) -> None:
    if a != b:
        raise DimensionError(f"dimension mismatch: {a} vs {b}")


def constraint_cell(a: int, b: int, k: int, l: int, c) -> tuple[int, int, Bound]:
    """The matrix cell (one of a coherent pair) encoding ``a x_k + b x_l <= c``."""
    c = bound(c)
    if a == 0:
        a, b, k, l = b, 0, l, k
    if b == 0 or k == l:
        coeff = a + b if (b != 0 and k == l) else a
        if coeff == 0:
            raise ValueError("constraint has no variable part")
        if abs(coeff) == 2:
            coeff //= 2
        else:
            c = c * 2
        i = 2 * k if coeff == 1 else 2 * k + 1
        return (i, bar(i), c)
    i = 2 * k if a == 1 else 2 * k + 1
    j = 2 * l + 1 if b == 1 else 2 * l
    return (i, j, c)


def cell_constraint(i: int, j: int, c: Fraction) -> OctConstraint:
    """Inverse of :func:`constraint_cell`; unary cells are halved exactly."""
    k, a = i // 2, (1 if i % 2 == 0 else -1)
    if j == bar(i):
        return OctConstraint(a, 0, k, k, c / 2)
    l, b = j // 2, (-1 if j % 2 == 0 else 1)
    return OctConstraint(a, b, k, l, c)


def canonical_cell(i: int, j: int) -> tuple[int, int]:
    """Representative of the coherent pair ``{(i, j), (bar j, bar i)}``."""
    return min((i, j), (bar(j), bar(i)))


def oct_from_constraints(n: int, cs: Iterable) -> OctMatrix:
    """Top matrix refined by constraints given as OctConstraint or (a, b, k, l, c)."""
    rows = OctMatrix.top(n).to_lists()
    for con in cs:
        a, b, k, l, c = con.as_tuple() if isinstance(con, OctConstraint) else con
        if a not in (-1, 0, 1) or b not in (-1, 0, 1) or (a == 0 and b == 0):
            raise ValueError(f"bad coefficients ({a}, {b})")
        if not (0 <= k < n) or (b != 0 and not 0 <= l < n):
            raise IndexError(f"variable index out of range for dim {n}")
        i, j, cc = constraint_cell(a, b, k, l, c)
        for (p, q) in ((i, j), (bar(j), bar(i))):
            if cc < rows[p][q]:
                rows[p][q] = cc
    return OctMatrix(n, tuple(tuple(r) for r in rows))


@dataclass(frozen=True)
class OctShape:
    """Empty (``matrix is None``) or a strongly closed OctMatrix."""

    dim: int
    matrix: Optional[OctMatrix]

    @classmethod
    def empty(cls, dim: int) -> "OctShape":
        return cls(dim, None)

    @classmethod
    def top(cls, dim: int) -> "OctShape":
        return cls(dim, OctMatrix.top(dim))

    @property
    def is_empty(self) -> bool:
        return self.matrix is None

    def __repr__(self) -> str:
        if self.matrix is None:
            return f"OctShape(dim={self.dim}, empty)"
        cs = ", ".join(str(cell_constraint(i, j, b).as_tuple())
                       for i, j, b in self.matrix.finite_cells()
                       if (i, j) == canonical_cell(i, j))
        return f"OctShape(dim={self.dim}, {{{cs}}})"


def _strengthen(rows: list[list[Bound]]) -> bool:
    size = len(rows)
    unary = [rows[i][bar(i)] for i in range(size)]
    changed = False
    for i in range(size):
        ui = unary[i]
        if ui is INF:
            continue
        ri = rows[i]
        for j in range(size):
            uj = unary[bar(j)]
            if uj is INF:
                continue
            s = (ui + uj) / 2
            if s < ri[j]:
                ri[j] = s
                changed = True
    return changed


def strong_close(m: OctMatrix, stats: Optional[dict] = None) -> OctShape:
    """Shortest-path closure alternated with strengthening until a fixpoint.

    ``stats['rounds']`` receives the number of closure rounds run.
    """
    rows = m.to_lists()
    rounds = 0
    while True:
        rounds += 1
        if not floyd_warshall(rows):
            break
        if not _strengthen(rows):
            break
    if stats is not None:
        stats["rounds"] = rounds
    size = m.size
    if any(rows[i][i] < 0 for i in range(size)):
        return OctShape.empty(m.dim)
    for i in range(size):
        rows[i][i] = Fraction(0)
    return OctShape(m.dim, OctMatrix(m.dim, tuple(tuple(r) for r in rows)))


def oct_leq(a: OctShape, b: OctShape) -> bool:
    _check_dims(a.dim, b.dim)
    if a.is_empty:
        return True
    if b.is_empty:
        return False
    return a.matrix.leq(b.matrix)


def oct_join(a: OctShape, b: OctShape) -> OctShape:
    _check_dims(a.dim, b.dim)
    if a.is_empty:
        return b
    if b.is_empty:
        return a
    rows = tuple(tuple(max(x, y) for x, y in zip(ra, rb))
                 for ra, rb in zip(a.matrix.entries, b.matrix.entries))
    return OctShape(a.dim, OctMatrix(a.dim, rows))


def oct_meet(a: OctShape, b: OctShape) -> OctShape:
    _check_dims(a.dim, b.dim)
    if a.is_empty:
        return a
    if b.is_empty:
        return b
    rows = tuple(tuple(min(x, y) for x, y in zip(ra, rb))
                 for ra, rb in zip(a.matrix.entries, b.matrix.entries))
    return strong_close(OctMatrix(a.dim, rows))


def oct_meet_constraints(s: OctShape, cs: Iterable) -> OctShape:
    if s.is_empty:
        return s
    return oct_meet(s, strong_close(oct_from_constraints(s.dim, cs)))


def oct_forget(s: OctShape, v: int) -> OctShape:
    """Project out variable ``v`` (0-based): clear rows/columns 2v and 2v+1."""
    if not 0 <= v < s.dim:
        raise IndexError(f"variable index {v} out of range for dim {s.dim}")
    if s.is_empty:
        return s
    rows = s.matrix.to_lists()
    for p in (2 * v, 2 * v + 1):
        for q in range(s.matrix.size):
            if q != p:
                rows[p][q] = INF
                rows[q][p] = INF
    return OctShape(s.dim, OctMatrix(s.dim, tuple(tuple(r) for r in rows)))


def oct_shift(s: OctShape, v: int, c) -> OctShape:
    """Exact image of ``x_v := x_v + c``."""
    if s.is_empty:
        return s
    c = bound(c)
    delta = [Fraction(0)] * s.matrix.size
    delta[2 * v], delta[2 * v + 1] = c, -c
    rows = [[b if b is INF else b + delta[i] - delta[j] for j, b in enumerate(r)]
            for i, r in enumerate(s.matrix.entries)]
    return OctShape(s.dim, OctMatrix(s.dim, tuple(tuple(r) for r in rows)))


def oct_negate(s: OctShape, v: int) -> OctShape:
    """Exact image of ``x_v := -x_v`` (swap the +x_v and -x_v indices)."""
    if s.is_empty:
        return s
    perm = list(range(s.matrix.size))
    perm[2 * v], perm[2 * v + 1] = 2 * v + 1, 2 * v
    e = s.matrix.entries
    rows = tuple(tuple(e[perm[i]][perm[j]] for j in range(len(e))) for i in range(len(e)))
    return OctShape(s.dim, OctMatrix(s.dim, rows))


def oct_to_constraints(s: OctShape) -> list[OctConstraint]:
    """One constraint per finite coherent pair, in row-major order of representatives."""
    if s.is_empty:
        raise ValueError("an empty shape has no constraint representation")
    return [cell_constraint(i, j, b) for i, j, b in s.matrix.finite_cells()
            if (i, j) == canonical_cell(i, j)]


def oct_satisfies(m: OctMatrix, point: Sequence) -> bool:
    v = []
    for x in point:
        v.extend((x, -x))
    for i, row in enumerate(m.entries):
        for j, b in enumerate(row):
            if b is not INF and v[i] - v[j] > b:
                return False
    return True


def embed_dbm(rows: Sequence[Sequence[Bound]]) -> OctMatrix:
    """Embed a Dbm (entry (i, j) = v_i - v_j, index 0 = zero) into the octagon space.

    Upper bounds ``x_i <= c`` become ``2 x_i <= 2c``; differences map to their
    two coherent cells.
    """
    n = len(rows) - 1
    cs = []
    for i in range(n + 1):
        for j in range(n + 1):
            b = rows[i][j]
            if i == j or b is INF:
                continue
            if j == 0:
                cs.append((1, 0, i - 1, i - 1, b))
            elif i == 0:
                cs.append((-1, 0, j - 1, j - 1, b))
            else:
                cs.append((1, -1, i - 1, j - 1, b))
    return oct_from_constraints(n, cs)
