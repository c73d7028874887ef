"""Control-flow graphs for toy-language programs.

Edges carry one operation each: a statement (assignment/havoc) or a guard.
Loop heads are found as targets of back edges (edges whose target dominates
their source), so every natural loop gets exactly one widening point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .lang import (AssignConst, AssignVar, Assume, Cond, Havoc, If, Program, Skip,
                   Stmt, While, negate)


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    op: Union[Stmt, Cond, None]  # None = no-op, a Cond = guard


@dataclass
class Cfg:
    labels: list[str] = field(default_factory=list)
    edges: list[Edge] = field(default_factory=list)
    entry: int = 0
    exit: int = 0
    loop_heads: frozenset[int] = frozenset()

    def new_node(self, label: str) -> int:
        self.labels.append(label)
        return len(self.labels) - 1

    @property
    def nodes(self) -> range:
        return range(len(self.labels))

    def preds(self, v: int) -> list[Edge]:
        return [e for e in self.edges if e.dst == v]

    def succs(self, v: int) -> list[Edge]:
        return [e for e in self.edges if e.src == v]

    def reverse_postorder(self) -> list[int]:
        seen, order = set(), []

        def visit(v):
            seen.add(v)
            for e in self.succs(v):
                if e.dst not in seen:
                    visit(e.dst)
            order.append(v)

        visit(self.entry)
        order.reverse()
        return order + [v for v in self.nodes if v not in seen]

    def dominators(self) -> dict[int, set[int]]:
        order = self.reverse_postorder()
        every = set(self.nodes)
        dom = {v: set(every) for v in self.nodes}
        dom[self.entry] = {self.entry}
        changed = True
        while changed:
            changed = False
            for v in order:
                if v == self.entry:
                    continue
                ps = [dom[e.src] for e in self.preds(v)]
                new = set.intersection(*ps) | {v} if ps else {v}
                if new != dom[v]:
                    dom[v] = new
                    changed = True
        return dom

    def back_edges(self) -> list[Edge]:
        dom = self.dominators()
        return [e for e in self.edges if e.dst in dom[e.src]]


def build_cfg(prog: Program) -> Cfg:
    g = Cfg()
    g.entry = g.new_node("entry")

    def seq(stmts, cur: int) -> int:
        for s in stmts:
            cur = stmt(s, cur)
        return cur

    def stmt(s, cur: int) -> int:
        if isinstance(s, (AssignConst, AssignVar, Havoc)):
            nxt = g.new_node(f"after {_describe(s)}")
            g.edges.append(Edge(cur, nxt, s))
            return nxt
        if isinstance(s, Skip):
            return cur
        if isinstance(s, Assume):
            nxt = g.new_node(f"after assume({s.cond})")
            g.edges.append(Edge(cur, nxt, s.cond))
            return nxt
        if isinstance(s, If):
            t0 = g.new_node(f"then ({s.cond})")
            e0 = g.new_node(f"else ({s.cond})")
            g.edges.append(Edge(cur, t0, s.cond))
            g.edges.append(Edge(cur, e0, negate(s.cond)))
            t1, e1 = seq(s.then, t0), seq(s.orelse, e0)
            join = g.new_node(f"endif ({s.cond})")
            g.edges.append(Edge(t1, join, None))
            g.edges.append(Edge(e1, join, None))
            return join
        if isinstance(s, While):
            head = g.new_node(f"loop head line {s.line} ({s.cond})")
            g.edges.append(Edge(cur, head, None))
            b0 = g.new_node(f"loop body line {s.line}")
            g.edges.append(Edge(head, b0, s.cond))
            b1 = seq(s.body, b0)
            g.edges.append(Edge(b1, head, None))
            out = g.new_node(f"loop exit line {s.line}")
            g.edges.append(Edge(head, out, negate(s.cond)))
            return out
        raise TypeError(f"unknown statement {s!r}")

    last = seq(prog.body, g.entry)
    g.exit = g.new_node("exit")
    g.edges.append(Edge(last, g.exit, None))
    g.loop_heads = frozenset(e.dst for e in g.back_edges())
    return g


def _describe(s) -> str:
    if isinstance(s, AssignConst):
        return f"{s.target} := {s.c}"
    if isinstance(s, Havoc):
        return f"{s.target} := ?"
    src = ("-" if s.sign < 0 else "") + s.source
    if s.c:
        src += f" {'+' if s.c > 0 else '-'} {abs(s.c)}"
    return f"{s.target} := {src}"
