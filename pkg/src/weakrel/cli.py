"""Command-line interface: ``analyze``, ``op`` and ``search``.

Exit codes: 0 success, 1 input error, 2 ``leq`` answered false, 3 analysis
hit the iteration cap, 4 search exhausted its bounds without a witness.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .analyzer import DEFAULT_ITER_CAP, DomainError, analyze
from .dbm import DimensionError, Dbm
from .divergence import search_divergence, trace_csv, write_report
from .domains import DOMAINS, domain_of
from .lang import ParseError, parse
from .octagon import OctMatrix
from .reduction import strong_reduce, transitive_reduce
from .textio import (FormatError, format_matrix, format_reduced, format_shape,
                     parse_matrix, parse_thresholds)
from .widening import WideningStrategy, widen, widen_syntactic, widen_upto

EXIT_OK, EXIT_INPUT, EXIT_FALSE, EXIT_CAP, EXIT_NO_WITNESS = 0, 1, 2, 3, 4

OPS = ("close", "strong-close", "reduce", "strong-reduce", "widen", "join", "meet", "leq")


class InputError(Exception):
    pass


def _strategy_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--widening", choices=("syntactic", "standard"), default="standard")
    p.add_argument("--second-arg-closed", action=argparse.BooleanOptionalAction, default=True,
                   help="compare against the closed second argument (default: on)")
    p.add_argument("--close-interleave", action="store_true",
                   help="re-close every syntactic widening result")
    p.add_argument("--thresholds", default=None,
                   help="'auto', 'none' or a file of 'i j bound' lines")
    p.add_argument("--global-thresholds", action="store_true",
                   help="share harvested thresholds across all loop heads")
    p.add_argument("--delay", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weakrel", description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="analyze a toy-language program")
    a.add_argument("file")
    a.add_argument("--domain", choices=("dbm", "oct"), default="dbm")
    _strategy_flags(a)
    a.add_argument("--descend", type=int, default=1)
    a.add_argument("--iter-cap", type=int, default=DEFAULT_ITER_CAP)
    a.add_argument("--output", choices=("text", "json", "csv"), default="text")

    o = sub.add_parser("op", help="apply one domain operation to matrix files")
    o.add_argument("op", choices=OPS)
    o.add_argument("files", nargs="+")
    _strategy_flags(o)
    o.add_argument("--output", choices=("text", "json", "csv"), default="text")

    s = sub.add_parser("search", help="search for a divergence witness")
    s.add_argument("--domain", choices=("dbm", "oct"), default="dbm")
    s.add_argument("--max-vars", type=int, default=3)
    s.add_argument("--max-bound", type=int, default=4)
    s.add_argument("--max-iters", type=int, default=32)
    s.add_argument("--budget", type=int, default=400, help="number of candidates to try")
    s.add_argument("--out", default="witness")
    s.add_argument("--output", choices=("text", "json", "csv"), default="text")
    return parser


def _config_errors(args) -> list[str]:
    errs = []
    if getattr(args, "delay", 0) < 0:
        errs.append("--delay must be non-negative")
    if getattr(args, "descend", 0) < 0:
        errs.append("--descend must be non-negative")
    if getattr(args, "iter_cap", 1) < 1:
        errs.append("--iter-cap must be positive")
    if getattr(args, "close_interleave", False) and args.widening != "syntactic":
        errs.append("--close-interleave only applies to --widening syntactic")
    if args.command == "search":
        if not 1 <= args.max_vars <= 3:
            errs.append("--max-vars must be between 1 and 3")
        if not 1 <= args.max_iters <= 256:
            errs.append("--max-iters must be between 1 and 256")
        if args.max_bound < 1:
            errs.append("--max-bound must be positive")
    return errs


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _strategy(args, default_thresholds="auto") -> WideningStrategy:
    t = args.thresholds if args.thresholds is not None else default_thresholds
    if t == "none":
        thresholds = None
    elif t == "auto":
        thresholds = "auto"
    else:
        thresholds = parse_thresholds(_read(t))
    return WideningStrategy(kind=args.widening, second_arg_closed=args.second_arg_closed,
                            thresholds=thresholds, delay=args.delay,
                            close_interleave=args.close_interleave,
                            global_thresholds=args.global_thresholds)


# ---------------------------------------------------------------- analyze

def cmd_analyze(args, out) -> int:
    prog = parse(_read(args.file))
    strategy = _strategy(args)
    res = analyze(prog, args.domain, strategy, descend=args.descend, iter_cap=args.iter_cap)
    points = []
    for v in res.cfg.nodes:
        head = v in res.cfg.loop_heads
        points.append({
            "id": v,
            "label": res.cfg.labels[v],
            "constraints": res.invariants(v),
            "iterations": res.iterations[v] if head else None,
            "stabilized": res.head_stabilized[v] if head else res.stabilized,
        })
    if args.output == "json":
        doc = {"program": args.file, "domain": args.domain,
               "strategy": strategy.describe(), "stabilized": res.stabilized,
               "points": points}
        out.write(json.dumps(doc, indent=2) + "\n")
    elif args.output == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["id", "label", "iterations", "stabilized", "constraint"])
        for p in points:
            for c in p["constraints"] or ["true"]:
                w.writerow([p["id"], p["label"],
                            "" if p["iterations"] is None else p["iterations"],
                            str(p["stabilized"]).lower(), c])
    else:
        out.write(f"# domain={args.domain} widening={strategy.kind} "
                  f"stabilized={str(res.stabilized).lower()}\n")
        for p in points:
            extra = "" if p["iterations"] is None else \
                f"  (iterations={p['iterations']}, stabilized={str(p['stabilized']).lower()})"
            out.write(f"[{p['id']}] {p['label']}{extra}\n")
            for c in p["constraints"] or ["true"]:
                out.write(f"  {c}\n")
    return EXIT_OK if res.stabilized else EXIT_CAP


# ---------------------------------------------------------------- op

def _load(path: str):
    try:
        return parse_matrix(_read(path))
    except FormatError as exc:
        raise InputError(f"{path}: {exc}") from None


def _need(kind, m, op):
    if not isinstance(m, kind):
        want = "dbm" if kind is Dbm else "oct"
        raise InputError(f"'{op}' needs a {want} matrix")


def cmd_op(args, out) -> int:
    mats = [_load(f) for f in args.files]
    arity = 2 if args.op in ("widen", "join", "meet", "leq") else 1
    if len(mats) != arity:
        raise InputError(f"'{args.op}' takes {arity} matrix file(s), got {len(mats)}")
    if arity == 2:
        a, b = mats
        if type(a) is not type(b):
            raise InputError("operands must both be dbm or both be oct matrices")
        if a.dim != b.dim:
            raise InputError(f"dimension mismatch: {a.dim} vs {b.dim}")
    op = args.op
    m = mats[0]
    if op in ("close", "reduce"):
        _need(Dbm, m, op)
    if op in ("strong-close", "strong-reduce"):
        _need(OctMatrix, m, op)
    d = domain_of(m)

    if op in ("close", "strong-close"):
        out.write(format_shape(d.close(m)))
        return EXIT_OK
    if op in ("reduce", "strong-reduce"):
        s = d.close(m)
        if s.is_empty:
            raise InputError("cannot reduce an empty shape")
        red = transitive_reduce(s) if op == "reduce" else strong_reduce(s)
        out.write(format_reduced(red))
        return EXIT_OK

    a, b = mats
    if op == "widen" and args.widening == "syntactic" and not args.close_interleave:
        out.write(format_matrix(widen_syntactic(a, b)))
        return EXIT_OK
    sa, sb = d.close(a), d.close(b)
    if op == "join":
        out.write(format_shape(d.join(sa, sb)))
    elif op == "meet":
        out.write(format_shape(d.meet(sa, sb)))
    elif op == "leq":
        ans = d.leq(sa, sb)
        out.write("true\n" if ans else "false\n")
        return EXIT_OK if ans else EXIT_FALSE
    else:
        if not d.leq(sa, sb):
            raise InputError("widen requires the first shape to be included in the second")
        strategy = _strategy(args, default_thresholds="none")
        t = strategy.thresholds if not isinstance(strategy.thresholds, str) else None
        out.write(format_shape(widen_upto(sa, sb, t, strategy) if t else widen(sa, sb, strategy)))
    return EXIT_OK


# ---------------------------------------------------------------- search

def cmd_search(args, out) -> int:
    outdir = Path(args.out)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        probe = outdir / ".write-test"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise InputError(f"cannot write to {outdir}: {exc.strerror}") from None
    report = search_divergence(args.max_vars, args.max_bound, args.max_iters,
                               args.domain, args.seed, args.budget)
    write_report(report, outdir)
    if args.output == "json":
        out.write(json.dumps(report.summary(), indent=2, sort_keys=True) + "\n")
    elif args.output == "csv" and report.found:
        out.write(trace_csv(DOMAINS[args.domain], report.interleaved))
    else:
        if report.found:
            out.write(f"witness found: {report.kind} (candidate {report.candidate}, "
                      f"{report.examined} examined); report in {outdir}\n")
        else:
            out.write(f"no witness within bounds ({report.examined} candidates examined)\n")
    return EXIT_OK if report.found else EXIT_NO_WITNESS


COMMANDS = {"analyze": cmd_analyze, "op": cmd_op, "search": cmd_search}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    errs = _config_errors(args)
    if errs:
        for e in errs:
            err.write(f"weakrel: {e}\n")
        return EXIT_INPUT
    buf = io.StringIO()
    try:
        code = COMMANDS[args.command](args, buf)
    except ParseError as exc:
        err.write(f"weakrel: {args.file}:{exc.line}:{exc.col}: syntax error: "
                  f"{exc.msg.split(': ', 1)[-1]}\n")
        return EXIT_INPUT
    except (InputError, DomainError, DimensionError, FormatError, ValueError) as exc:
        err.write(f"weakrel: {exc}\n")
        return EXIT_INPUT
    out.write(buf.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
