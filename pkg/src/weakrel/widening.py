"""Widening operators on DBMs/octagons and their shape-level strategies.

Three iteration schemes are supported at a widening point:

* ``standard``: the polyhedra standard widening, applied to a *reduced*
  (non-redundant) representation of the first argument.  This is the
  terminating one: the kept system only ever loses constraints.
* ``syntactic`` with ``close_interleave``: per-entry widening on the closed
  first argument, with every result re-closed.  Closure can re-derive the
  dropped bounds, so this scheme can fail to stabilize.
* ``syntactic`` without interleave: per-entry widening on the raw, never
  re-closed matrix kept at the widening point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .bounds import INF
from .dbm import DimensionError, Dbm, Shape
from .domains import Domain, domain_of
from .octagon import OctMatrix, OctShape
from .reduction import ThresholdSet, harvest_thresholds

AnyShape = Union[Shape, OctShape]
AnyMatrix = Union[Dbm, OctMatrix]

KINDS = ("syntactic", "standard")


@dataclass(frozen=True)
class WideningStrategy:
    kind: str = "standard"
    second_arg_closed: bool = True
    # None, "auto" (harvest from the first shape at each point) or a ThresholdSet
    thresholds: Union[None, str, ThresholdSet] = "auto"
    delay: int = 0
    close_interleave: bool = False
    global_thresholds: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown widening kind {self.kind!r}")
        if self.delay < 0:
            raise ValueError("delay must be non-negative")
        if not (self.thresholds is None or self.thresholds == "auto"
                or isinstance(self.thresholds, ThresholdSet)):
            raise ValueError("thresholds must be None, 'auto' or a ThresholdSet")

    def describe(self) -> dict:
        t = self.thresholds
        return {
            "kind": self.kind,
            "second_arg_closed": self.second_arg_closed,
            "thresholds": t if t is None or isinstance(t, str) else "file",
            "delay": self.delay,
            "close_interleave": self.close_interleave,
            "global_thresholds": self.global_thresholds,
        }


PLAIN_STANDARD = WideningStrategy(thresholds=None)
DIVERGENT = WideningStrategy(kind="syntactic", close_interleave=True, thresholds=None)


def widen_syntactic(m1: AnyMatrix, m2: AnyMatrix) -> AnyMatrix:
    """Keep ``m1[i][j]`` where ``m2[i][j] <= m1[i][j]``, otherwise +inf."""
    if type(m1) is not type(m2):
        raise TypeError("operands must be matrices of the same kind")
    if m1.dim != m2.dim:
        raise DimensionError(f"dimension mismatch: {m1.dim} vs {m2.dim}")
    rows = tuple(tuple(a if b <= a else INF for a, b in zip(ra, rb))
                 for ra, rb in zip(m1.entries, m2.entries))
    return type(m1)(m1.dim, rows)


def _check_pair(d: Domain, s1: AnyShape, s2: AnyShape) -> None:
    if s1.dim != s2.dim:
        raise DimensionError(f"dimension mismatch: {s1.dim} vs {s2.dim}")
    if not d.leq(s1, s2):
        raise ValueError("widening requires the first argument to be included in the second")


def reduced_matrix(s: AnyShape) -> AnyMatrix:
    """Top matrix carrying only the constraints of the reduced system of ``s``."""
    d = domain_of(s)
    red = d.reduce(s)
    return d.from_cells(s.dim, red.kept)


def widen_standard(s1: AnyShape, s2: AnyShape, rep2: Optional[AnyMatrix] = None) -> AnyShape:
    """Standard widening: s1's non-redundant constraints that s2 satisfies.

    ``rep2`` is the representation of the second argument that is compared
    against; it defaults to s2's (strongly) closed matrix.
    """
    d = domain_of(s1)
    if s1.is_empty:
        return s2
    _check_pair(d, s1, s2)
    if rep2 is None:
        rep2 = s2.matrix
    return d.close(widen_syntactic(reduced_matrix(s1), rep2))


def _install(m: AnyMatrix, s2: AnyShape, t: Optional[ThresholdSet]) -> AnyMatrix:
    rows = None
    for (i, j) in (t.cells if t else ()):
        if m.entries[i][j] is INF:
            th = t.smallest_at_least((i, j), s2.matrix.entries[i][j])
            if th is not None:
                rows = rows or m.to_lists()
                rows[i][j] = th
    return m if rows is None else type(m)(m.dim, tuple(tuple(r) for r in rows))


def install_thresholds(w: AnyShape, s2: AnyShape, t: Optional[ThresholdSet]) -> AnyShape:
    """Put back, in every unbounded cell of ``w``, the least threshold that s2 satisfies."""
    if not t or w.is_empty or s2.is_empty:
        return w
    m = _install(w.matrix, s2, t)
    return w if m is w.matrix else domain_of(w).close(m)


def _second_rep(s2: AnyShape, strategy: WideningStrategy) -> AnyMatrix:
    return s2.matrix if strategy.second_arg_closed else reduced_matrix(s2)


def widen(s1: AnyShape, s2: AnyShape, strategy: WideningStrategy = PLAIN_STANDARD) -> AnyShape:
    """One shape-level widening step (no thresholds, no delay).

    A ``syntactic`` strategy at this level always re-closes its result; the
    raw-matrix scheme needs the state kept by :class:`WideningPoint`.
    """
    d = domain_of(s1)
    if s1.is_empty:
        return s2
    _check_pair(d, s1, s2)
    rep2 = _second_rep(s2, strategy)
    if strategy.kind == "standard":
        return widen_standard(s1, s2, rep2)
    return d.close(widen_syntactic(s1.matrix, rep2))


def widen_upto(s1: AnyShape, s2: AnyShape, t: Optional[ThresholdSet],
               strategy: WideningStrategy = PLAIN_STANDARD) -> AnyShape:
    if s1.is_empty:
        return s2
    return install_thresholds(widen(s1, s2, strategy), s2, t)


class widen_delayed:
    """Widening that answers with the join for its first ``delay`` applications.

    Instances are stateful: one per widening point.
    """

    def __init__(self, delay: int, strategy: WideningStrategy = PLAIN_STANDARD,
                 thresholds: Optional[ThresholdSet] = None):
        if delay < 0:
            raise ValueError("delay must be non-negative")
        self.delay = delay
        self.strategy = strategy
        self.thresholds = thresholds
        self.count = 0

    def __call__(self, s1: AnyShape, s2: AnyShape) -> AnyShape:
        d = domain_of(s1)
        self.count += 1
        if self.count <= self.delay:
            if not s1.is_empty:
                _check_pair(d, s1, s2)
            return d.join(s1, s2)
        return widen_upto(s1, s2, self.thresholds, self.strategy)


class WideningPoint:
    """Iteration state at one widening point: X_{k+1} = X_k widen (X_k join Y_{k+1}).

    ``value`` is the current (canonical) shape; the first non-empty shape
    seen is M_0, from which thresholds are harvested under ``"auto"``.
    ``changes`` counts the updates that changed ``value``.
    """

    def __init__(self, domain: Domain, strategy: WideningStrategy,
                 thresholds: Optional[ThresholdSet] = None):
        self.domain = domain
        self.strategy = strategy
        self.value: Optional[AnyShape] = None
        self.raw: Optional[AnyMatrix] = None
        self.m0: Optional[AnyShape] = None
        self.changes = 0
        if isinstance(strategy.thresholds, ThresholdSet):
            thresholds = strategy.thresholds if thresholds is None \
                else thresholds.union(strategy.thresholds)
        self.thresholds = thresholds

    def update(self, y: AnyShape) -> AnyShape:
        d = self.domain
        if self.value is None or self.value.is_empty:
            self.value = y
            if not y.is_empty:
                self.raw = y.matrix
                self.m0 = y
                if self.strategy.thresholds == "auto" and not self.strategy.global_thresholds:
                    harvested = harvest_thresholds(y)
                    self.thresholds = harvested if self.thresholds is None \
                        else self.thresholds.union(harvested)
            return self.value
        x = self.value
        joined = d.join(x, y)
        if joined == x:
            return x
        if self.changes < self.strategy.delay:
            new = joined
            self.raw = joined.matrix
        elif self.strategy.kind == "standard":
            new = widen_standard(x, joined, _second_rep(joined, self.strategy))
            new = install_thresholds(new, joined, self.thresholds)
            self.raw = new.matrix
        elif self.strategy.close_interleave:
            new = d.close(widen_syntactic(x.matrix, _second_rep(joined, self.strategy)))
            new = install_thresholds(new, joined, self.thresholds)
            self.raw = new.matrix
        else:
            raw = widen_syntactic(self.raw, _second_rep(joined, self.strategy))
            self.raw = _install(raw, joined, self.thresholds)
            new = d.close(self.raw)
        if not d.leq(x, new):
            raise AssertionError("widening-point iterate decreased")
        self.changes += 1
        self.value = new
        return new
