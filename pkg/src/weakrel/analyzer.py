"""Abstract transfer functions and the fixpoint engine.

Variables are numbered in order of first appearance.  The entry state leaves
every variable unconstrained.  Loop heads are the widening points; every
other node takes the join of its incoming edges.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from . import dbm, octagon
from .bounds import INF, format_bound
from .cfg import Cfg, build_cfg
from .domains import DOMAINS, Domain
from .lang import (AssignConst, AssignVar, Assume, FalseCond, Havoc, If, Lin, Nondet,
                   Program, Skip, TrueCond, While)
from .reduction import ThresholdSet, harvest_thresholds
from .widening import WideningPoint, WideningStrategy

AnyShape = Union[dbm.Shape, octagon.OctShape]

DEFAULT_ITER_CAP = 64


class DomainError(ValueError):
    """The program uses a form the selected domain cannot express."""


# ---------------------------------------------------------------- validation

def _lin_is_octagonal(lin: Lin) -> bool:
    coefs = [a for a, _ in lin.terms]
    return len(coefs) == 2 and coefs[0] == coefs[1] and lin.terms[0][1] != lin.terms[1][1]


def check_program(prog: Program, domain: str) -> None:
    """Reject octagonal forms in dbm mode."""
    if domain == "oct":
        return

    def conds(stmts):
        for s in stmts:
            if isinstance(s, AssignVar) and s.sign < 0:
                raise DomainError(f"'{s.target} := -{s.source} ...' needs --domain oct")
            if isinstance(s, Assume):
                yield s.cond
            elif isinstance(s, If):
                yield s.cond
                yield from conds(s.then)
                yield from conds(s.orelse)
            elif isinstance(s, While):
                yield s.cond
                yield from conds(s.body)

    for c in conds(prog.body):
        if isinstance(c, Lin) and _lin_is_octagonal(c):
            raise DomainError(f"condition '{c}' needs --domain oct")


# ---------------------------------------------------------------- transfer

def _normalize(terms, c):
    """Merge repeated variables; returns (terms, c) with |coef| <= 1, or a truth value."""
    acc: dict[int, int] = {}
    for a, k in terms:
        acc[k] = acc.get(k, 0) + a
    terms = [(a, k) for k, a in acc.items() if a != 0]
    c = Fraction(c)
    if not terms:
        return c >= 0
    if len(terms) == 1 and abs(terms[0][0]) == 2:
        a, k = terms[0]
        return [(a // 2, k)], c / 2
    return terms, c


class Transfer:
    """Transfer functions over one domain for a fixed variable numbering."""

    def __init__(self, domain: Domain, variables: tuple[str, ...]):
        self.domain = domain
        self.index = {v: k for k, v in enumerate(variables)}
        self.n = len(variables)

    def top(self) -> AnyShape:
        return self.domain.top(self.n)

    # primitive operations, variables 0-based
    def forget(self, s, k):
        if self.domain.name == "dbm":
            return dbm.forget(s, k + 1)
        return octagon.oct_forget(s, k)

    def shift(self, s, k, c):
        if self.domain.name == "dbm":
            return dbm.close(dbm.shift(s, k + 1, c).matrix) if not s.is_empty else s
        return octagon.strong_close(octagon.oct_shift(s, k, c).matrix) if not s.is_empty else s

    def meet_lin(self, s, terms, c):
        """Meet with ``sum(a * x_k) <= c`` (terms use 0-based variable indices)."""
        if s.is_empty:
            return s
        norm = _normalize(terms, c)
        if norm is True:
            return s
        if norm is False:
            return self.domain.empty(self.n)
        terms, c = norm
        if self.domain.name == "dbm":
            if len(terms) == 1:
                a, k = terms[0]
                cell = (k + 1, 0, c) if a > 0 else (0, k + 1, c)
            else:
                (a, k), (b, l) = terms
                if a == b:
                    raise DomainError("sum constraints need the octagon domain")
                cell = (k + 1, l + 1, c) if a > 0 else (l + 1, k + 1, c)
            return dbm.meet_constraints(s, [cell])
        if len(terms) == 1:
            a, k = terms[0]
            con = (a, 0, k, k, c)
        else:
            (a, k), (b, l) = terms
            con = (a, b, k, l, c)
        return octagon.oct_meet_constraints(s, [con])

    # program-level operations
    def guard(self, cond, s):
        if s.is_empty or isinstance(cond, (TrueCond, Nondet)):
            return s
        if isinstance(cond, FalseCond):
            return self.domain.empty(self.n)
        return self.meet_lin(s, [(a, self.index[v]) for a, v in cond.terms], cond.c)

    def assign(self, stmt, s):
        if s.is_empty:
            return s
        x = self.index[stmt.target]
        if isinstance(stmt, Havoc):
            return self.forget(s, x)
        if isinstance(stmt, AssignConst):
            s = self.forget(s, x)
            s = self.meet_lin(s, [(1, x)], stmt.c)
            return self.meet_lin(s, [(-1, x)], -stmt.c)
        y = self.index[stmt.source]
        if stmt.sign > 0:
            if x == y:
                return self.shift(s, x, stmt.c)
            s = self.forget(s, x)
            s = self.meet_lin(s, [(1, x), (-1, y)], stmt.c)
            return self.meet_lin(s, [(-1, x), (1, y)], -stmt.c)
        if self.domain.name == "dbm":
            raise DomainError("negated assignment needs the octagon domain")
        if x == y:
            s = octagon.oct_negate(s, x)
            return self.shift(s, x, stmt.c)
        s = self.forget(s, x)
        s = self.meet_lin(s, [(1, x), (1, y)], stmt.c)
        return self.meet_lin(s, [(-1, x), (-1, y)], -stmt.c)

    def edge(self, op, s):
        if op is None or isinstance(op, Skip):
            return s
        if isinstance(op, (AssignConst, AssignVar, Havoc)):
            return self.assign(op, s)
        return self.guard(op, s)


def transfer(op, s: AnyShape, variables: tuple[str, ...]) -> AnyShape:
    """Apply one statement or guard to ``s``; the domain is taken from ``s``."""
    d = DOMAINS["oct" if isinstance(s, octagon.OctShape) else "dbm"]
    if isinstance(op, Assume):
        op = op.cond
    return Transfer(d, variables).edge(op, s)


# ---------------------------------------------------------------- engine

@dataclass
class AnalysisResult:
    program: Program
    domain: str
    strategy: WideningStrategy
    cfg: Cfg
    values: dict[int, AnyShape]
    iterations: dict[int, int]
    head_stabilized: dict[int, bool]
    history: dict[int, list] = field(default_factory=dict)
    thresholds: dict[int, ThresholdSet] = field(default_factory=dict)

    @property
    def stabilized(self) -> bool:
        return all(self.head_stabilized.values())

    @property
    def exit_value(self) -> AnyShape:
        return self.values[self.cfg.exit]

    def at(self, node: int) -> AnyShape:
        return self.values[node]

    def invariants(self, node: int) -> list[str]:
        return render(self.values[node], self.program.variables)


def analyze(prog: Program, domain: str = "dbm",
            strategy: Optional[WideningStrategy] = None,
            descend: int = 1, iter_cap: int = DEFAULT_ITER_CAP) -> AnalysisResult:
    """Ascending iteration with widening at loop heads, then ``descend`` meet passes."""
    strategy = strategy or WideningStrategy()
    check_program(prog, domain)
    d = DOMAINS[domain]
    tf = Transfer(d, prog.variables)
    g = build_cfg(prog)
    rpo = g.reverse_postorder()
    prio = {v: n for n, v in enumerate(rpo)}
    preds = {v: g.preds(v) for v in g.nodes}
    succs = {v: g.succs(v) for v in g.nodes}
    bottom = d.empty(tf.n)

    points = {h: WideningPoint(d, strategy) for h in g.loop_heads}
    capped: dict[int, bool] = {h: False for h in g.loop_heads}
    history: dict[int, list] = {h: [] for h in g.loop_heads}
    shared = ThresholdSet()
    values: dict[int, AnyShape] = {v: bottom for v in g.nodes}
    values[g.entry] = tf.top()

    def incoming(v):
        acc = bottom
        for e in preds[v]:
            acc = d.join(acc, tf.edge(e.op, values[e.src]))
        return acc

    work = [(prio[e.dst], e.dst) for e in succs[g.entry]]
    heapq.heapify(work)
    queued = {v for _, v in work}
    while work:
        _, v = heapq.heappop(work)
        queued.discard(v)
        new = incoming(v)
        if v in points:
            if capped[v]:
                continue
            wp = points[v]
            first = wp.m0 is None
            new = wp.update(new)
            if first and wp.m0 is not None and strategy.thresholds == "auto" \
                    and strategy.global_thresholds:
                shared = shared.union(harvest_thresholds(wp.m0))
                for p in points.values():
                    p.thresholds = shared
            if new != values[v]:
                history[v].append(new)
            if wp.changes >= iter_cap:
                capped[v] = True
        if new != values[v]:
            values[v] = new
            for e in succs[v]:
                if e.dst not in queued:
                    queued.add(e.dst)
                    heapq.heappush(work, (prio[e.dst], e.dst))

    if not any(capped.values()):
        for _ in range(descend):
            for v in rpo:
                if v != g.entry:
                    values[v] = d.meet(values[v], incoming(v))

    return AnalysisResult(
        program=prog, domain=domain, strategy=strategy, cfg=g, values=values,
        iterations={h: p.changes for h, p in points.items()},
        head_stabilized={h: not c for h, c in capped.items()},
        history=history,
        thresholds={h: p.thresholds for h, p in points.items() if p.thresholds},
    )


# ---------------------------------------------------------------- rendering

def _interval(expr: str, lo, hi) -> Optional[str]:
    if lo is None and hi is None:
        return None
    if lo is not None and hi is not None:
        if lo == hi:
            return f"{expr} = {format_bound(lo)}"
        return f"{format_bound(lo)} <= {expr} <= {format_bound(hi)}"
    if hi is not None:
        return f"{expr} <= {format_bound(hi)}"
    return f"{expr} >= {format_bound(lo)}"


def _fin(b):
    return None if b is INF else b


def _neg(b):
    return None if b is INF else -b


def render(s: AnyShape, names: tuple[str, ...]) -> list[str]:
    """Human-readable invariants: bounds per variable, then per pair of variables."""
    if s.is_empty:
        return ["empty"]
    m = s.matrix.entries
    out = []
    n = len(names)
    if isinstance(s, dbm.Shape):
        for k in range(n):
            out.append(_interval(names[k], _neg(m[0][k + 1]), _fin(m[k + 1][0])))
        for k in range(n):
            for l in range(k + 1, n):
                out.append(_interval(f"{names[k]} - {names[l]}",
                                     _neg(m[l + 1][k + 1]), _fin(m[k + 1][l + 1])))
    else:
        for k in range(n):
            p, q = 2 * k, 2 * k + 1
            lo = None if m[q][p] is INF else -m[q][p] / 2
            hi = None if m[p][q] is INF else m[p][q] / 2
            out.append(_interval(names[k], lo, hi))
        for k in range(n):
            for l in range(k + 1, n):
                pk, ql = 2 * k, 2 * l
                out.append(_interval(f"{names[k]} - {names[l]}",
                                     _neg(m[ql][pk]), _fin(m[pk][ql])))
                out.append(_interval(f"{names[k]} + {names[l]}",
                                     _neg(m[pk + 1][ql]), _fin(m[pk][ql + 1])))
    return [line for line in out if line is not None]
