"""Text formats for matrices and constraint lists.

Matrix files start with ``dbm <n>`` (then n+1 rows) or ``oct <n>`` (then 2n
rows); each token is an integer, ``p/q`` or ``inf``.  An empty shape is
written as the single word ``empty``.
"""

from __future__ import annotations

from typing import Union

from .bounds import format_bound, parse_bound
from .dbm import Dbm, Shape
from .octagon import OctMatrix, OctShape
from .reduction import ReducedSystem, ThresholdSet

AnyMatrix = Union[Dbm, OctMatrix]
AnyShape = Union[Shape, OctShape]


class FormatError(ValueError):
    pass


def format_matrix(m: AnyMatrix) -> str:
    kind = "dbm" if isinstance(m, Dbm) else "oct"
    rows = [" ".join(format_bound(b) for b in r) for r in m.entries]
    return "\n".join([f"{kind} {m.dim}", *rows]) + "\n"


def format_shape(s: AnyShape) -> str:
    if s.is_empty:
        return "empty\n"
    return format_matrix(s.matrix)


def parse_matrix(text: str) -> AnyMatrix:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise FormatError("empty matrix file")
    head = lines[0].split()
    if len(head) != 2 or head[0] not in ("dbm", "oct"):
        raise FormatError(f"bad header {lines[0]!r}; expected 'dbm <n>' or 'oct <n>'")
    try:
        n = int(head[1])
    except ValueError:
        raise FormatError(f"bad dimension {head[1]!r}") from None
    if n < 0:
        raise FormatError("dimension must be non-negative")
    size = n + 1 if head[0] == "dbm" else 2 * n
    body = lines[1:]
    if len(body) != size:
        raise FormatError(f"expected {size} rows, found {len(body)}")
    rows = []
    for r, ln in enumerate(body, start=2):
        toks = ln.split()
        if len(toks) != size:
            raise FormatError(f"row {r - 1}: expected {size} entries, found {len(toks)}")
        try:
            rows.append([parse_bound(t) for t in toks])
        except ValueError as exc:
            raise FormatError(f"row {r - 1}: {exc}") from None
    if head[0] == "dbm":
        return Dbm(n, tuple(tuple(r) for r in rows))
    return OctMatrix(n, tuple(tuple(r) for r in rows))


def format_reduced(red: ReducedSystem) -> str:
    """One constraint per line: ``i j bound`` (dbm) or ``a b k l c`` (oct)."""
    lines = [" ".join(str(x) if isinstance(x, int) else format_bound(x) for x in c)
             for c in red.constraints()]
    return "".join(ln + "\n" for ln in lines)


def parse_thresholds(text: str) -> ThresholdSet:
    """Lines ``i j bound`` naming a matrix cell and one threshold for it."""
    cells: dict = {}
    for n, ln in enumerate(text.splitlines(), start=1):
        ln = ln.split("#", 1)[0].strip()
        if not ln:
            continue
        toks = ln.split()
        if len(toks) != 3:
            raise FormatError(f"line {n}: expected 'i j bound'")
        try:
            i, j, b = int(toks[0]), int(toks[1]), parse_bound(toks[2])
        except ValueError as exc:
            raise FormatError(f"line {n}: {exc}") from None
        if b is parse_bound("inf"):
            raise FormatError(f"line {n}: thresholds must be finite")
        cells.setdefault((i, j), []).append(b)
    return ThresholdSet({k: tuple(v) for k, v in cells.items()})
