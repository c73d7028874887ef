"""Search for ascending chains on which close-interleaved widening never settles.

Two candidate families are tried, alternately, from one seeded generator:

``sequence``
    An ascending chain Y_0 <= Y_1 <= ... built step by step.  Y_{k+1} is the
    current interleaved iterate with one non-redundant cell relaxed, so every
    step of the chain is a legal input; relaxations that let closure re-derive
    the dropped cell are preferred.
``program``
    A two-branch loop whose branches grow two variables alternately under a
    difference guard, analyzed with both configurations.

A witness is a candidate where the close-interleaved syntactic iteration is
still changing after ``max_iters`` steps (each step strictly raising some
finite entry) while the standard iteration on the same chain or program
stabilizes within the certificate bound.  Reports are written as matrix
files plus per-iteration CSVs and can be replayed byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .bounds import INF
from .domains import DOMAINS, Domain
from .lang import parse
from .textio import format_shape, parse_matrix
from .widening import DIVERGENT, PLAIN_STANDARD, WideningPoint, widen_syntactic

CSV_HEADER = ["iter", "finite_cells", "reduced_cells", "stabilized"]


@dataclass
class WitnessReport:
    mode: str
    seed: int
    max_vars: int
    max_bound: int
    max_iters: int
    examined: int = 0
    found: bool = False
    kind: Optional[str] = None
    candidate: Optional[int] = None
    program: Optional[str] = None
    chain: list = field(default_factory=list)
    interleaved: list = field(default_factory=list)
    standard: list = field(default_factory=list)

    def summary(self) -> dict:
        return {
            "found": self.found, "kind": self.kind, "mode": self.mode,
            "seed": self.seed, "max_vars": self.max_vars, "max_bound": self.max_bound,
            "max_iters": self.max_iters, "candidate": self.candidate,
            "examined": self.examined, "program": self.program,
            "interleaved_steps": len(self.interleaved) - 1 if self.interleaved else 0,
            "standard_changes": _changes(self.standard),
        }


# ---------------------------------------------------------------- iterations

def interleaved_step(d: Domain, x, y):
    """close(widen_syntactic(closed x, closed (x join y)))."""
    joined = d.join(x, y)
    return d.close(widen_syntactic(x.matrix, joined.matrix))


def run_interleaved(d: Domain, chain: list) -> list:
    xs = [chain[0]]
    for y in chain[1:]:
        xs.append(interleaved_step(d, xs[-1], y))
    return xs


def run_standard(d: Domain, chain: list) -> list:
    wp = WideningPoint(d, PLAIN_STANDARD)
    return [wp.update(y) for y in chain]


def _changes(trace: list) -> int:
    return sum(1 for a, b in zip(trace, trace[1:]) if a != b)


def _last_change(trace: list) -> int:
    last = 0
    for k in range(1, len(trace)):
        if trace[k] != trace[k - 1]:
            last = k
    return last


def strictly_raises_finite(a, b) -> bool:
    """Some entry finite in both ``a`` and ``b`` is larger in ``b``."""
    return any(p is not INF and q is not INF and q > p
               for ra, rb in zip(a.matrix.entries, b.matrix.entries)
               for p, q in zip(ra, rb))


def verify_witness(d: Domain, n: int, interleaved: list, standard: list, max_iters: int) -> bool:
    if len(interleaved) < max_iters + 1 or any(s.is_empty for s in interleaved):
        return False
    steps_ok = all(d.leq(a, b) and a != b and strictly_raises_finite(a, b)
                   for a, b in zip(interleaved, interleaved[1:]))
    bound = d.cells(n)
    return steps_ok and _changes(standard) <= bound and _last_change(standard) < len(standard) - 1


# ---------------------------------------------------------------- candidates

def _random_start(rng: random.Random, d: Domain, n: int, max_bound: int):
    size = d.size(n)
    for _ in range(50):
        cells = [(i, j, rng.randint(-max_bound, max_bound))
                 for i in range(size) for j in range(size)
                 if i != j and rng.random() < 0.6]
        s = d.close(d.from_cells(n, cells))
        if not s.is_empty and len(s.matrix.finite_cells()) >= 3:
            return s
    return None


def _relax(d: Domain, s, cell, delta):
    i, j = cell
    rows = s.matrix.to_lists()
    rows[i][j] = rows[i][j] + delta
    if d.name == "oct":
        rows[j ^ 1][i ^ 1] = rows[i][j]
    return d.close(d.matrix(s.dim, rows))


def sequence_candidate(rng: random.Random, d: Domain, max_vars: int, max_bound: int,
                       max_iters: int):
    n = rng.randint(2, max(2, max_vars)) if d.name == "dbm" else rng.randint(1, min(2, max_vars))
    y0 = _random_start(rng, d, n, max_bound)
    if y0 is None:
        return None
    chain, x = [y0], y0
    for _ in range(max_iters):
        options = [(i, j) for i, j, _ in d.reduce(x).kept]
        rng.shuffle(options)
        finite = len(x.matrix.finite_cells())
        choice = None
        for cell in options:
            y = _relax(d, x, cell, rng.randint(1, max_bound))
            nxt = interleaved_step(d, x, y)
            if len(nxt.matrix.finite_cells()) >= finite:
                choice = (y, nxt)
                break
        if choice is None:
            return None
        chain.append(choice[0])
        x = choice[1]
    return n, chain


_PROGRAM = """\
x := ?; y := ?;
assume(x >= 0); assume(y >= 0);
assume(x <= {hx}); assume(y <= {hy});
assume(x - y <= {dxy}); assume(y - x <= {dyx});
while (?) {{
  if (?) {{ assume(y - x <= {gy}); y := y + {iy}; }}
  else {{ assume(x - y <= {gx}); x := x + {ix}; }}
}}
"""


def program_candidate(rng: random.Random, max_bound: int) -> str:
    b = max(1, max_bound)
    return _PROGRAM.format(
        hx=rng.randint(0, b), hy=rng.randint(0, b),
        dxy=rng.randint(0, b), dyx=rng.randint(0, b),
        gy=rng.randint(-b, 0), gx=rng.randint(-b, 0),
        iy=rng.randint(1, b), ix=rng.randint(1, b))


def program_traces(text: str, mode: str, max_iters: int):
    """Loop-head iterate sequences under the divergent and the standard configuration."""
    from .analyzer import analyze

    prog = parse(text)
    bad = analyze(prog, mode, DIVERGENT, descend=0, iter_cap=max_iters)
    good = analyze(prog, mode, PLAIN_STANDARD, descend=0, iter_cap=max_iters)
    (head,) = bad.cfg.loop_heads
    std = list(good.history[head])
    if good.stabilized and std:
        std.append(std[-1])
    return len(prog.variables), bad.history[head], std, good.stabilized


def search_divergence(max_vars: int = 3, max_bound: int = 4, max_iters: int = 32,
                      mode: str = "dbm", seed: int = 0, budget: int = 400) -> WitnessReport:
    d = DOMAINS[mode]
    report = WitnessReport(mode, seed, max_vars, max_bound, max_iters)
    master = random.Random(seed)
    for cand in range(budget):
        rng = random.Random(master.getrandbits(64))
        report.examined = cand + 1
        if cand % 2 == 0:
            got = sequence_candidate(rng, d, max_vars, max_bound, max_iters)
            if got is None:
                continue
            n, chain = got
            inter, std = run_interleaved(d, chain), run_standard(d, chain)
            if verify_witness(d, n, inter, std, max_iters):
                report.found, report.kind, report.candidate = True, "sequence", cand
                report.chain, report.interleaved, report.standard = chain, inter, std
                return report
        else:
            text = program_candidate(rng, max_bound)
            n, inter, std, std_ok = program_traces(text, mode, max_iters)
            if std_ok and len(inter) >= max_iters + 1 and \
                    verify_witness(d, n, inter, std, max_iters):
                report.found, report.kind, report.candidate = True, "program", cand
                report.program, report.interleaved, report.standard = text, inter, std
                return report
    return report


# ---------------------------------------------------------------- report files

def trace_csv(d: Domain, trace: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for k, s in enumerate(trace):
        stable = k > 0 and all(t == s for t in trace[k - 1:])
        finite = 0 if s.is_empty else len(s.matrix.finite_cells())
        reduced = 0 if s.is_empty else len(d.reduce(s))
        w.writerow([k, finite, reduced, str(stable).lower()])
    return buf.getvalue()


def report_files(report: WitnessReport) -> dict[str, str]:
    """Relative path -> file content for the whole report bundle."""
    d = DOMAINS[report.mode]
    files = {"witness.json": json.dumps(report.summary(), indent=2, sort_keys=True) + "\n"}
    if not report.found:
        return files
    ext = report.mode
    if report.program is not None:
        files["program.w"] = report.program
    for k, y in enumerate(report.chain):
        files[f"chain/Y_{k:03d}.{ext}"] = format_shape(y)
    for name, trace in (("interleaved", report.interleaved), ("standard", report.standard)):
        files[f"{name}.csv"] = trace_csv(d, trace)
        for k, x in enumerate(trace):
            files[f"{name}/X_{k:03d}.{ext}"] = format_shape(x)
    return files


def write_report(report: WitnessReport, outdir) -> Path:
    out = Path(outdir)
    for rel, content in report_files(report).items():
        path = out / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(content)
    return out


def replay_report(outdir) -> bool:
    """Recompute every trace of a written report and compare byte for byte."""
    out = Path(outdir)
    meta = json.loads((out / "witness.json").read_text())
    if not meta["found"]:
        return True
    mode, iters = meta["mode"], meta["max_iters"]
    d = DOMAINS[mode]
    report = WitnessReport(mode, meta["seed"], meta["max_vars"], meta["max_bound"], iters,
                           examined=meta["examined"], found=True, kind=meta["kind"],
                           candidate=meta["candidate"], program=meta["program"])
    if meta["kind"] == "sequence":
        paths = sorted((out / "chain").glob(f"Y_*.{mode}"))
        chain = [d.close(parse_matrix(p.read_text())) for p in paths]
        report.chain = chain
        report.interleaved, report.standard = run_interleaved(d, chain), run_standard(d, chain)
        n = chain[0].dim
    else:
        n, report.interleaved, report.standard, _ = program_traces(meta["program"], mode, iters)
    if not verify_witness(d, n, report.interleaved, report.standard, iters):
        return False
    expected = report_files(report)
    on_disk = {str(p.relative_to(out)): p.read_text()
               for p in out.rglob("*") if p.is_file()}
    return expected == on_disk
