"""Analyze every corpus program under several widening configurations.

Writes one CSV row per (program, domain, configuration) with the number of
widening changes at the loop heads, whether the run stabilized, and the
exit invariant.

    python scripts/run_corpus.py --out results/corpus.csv
"""

import argparse
import csv
import sys
from pathlib import Path

from weakrel.analyzer import DomainError, analyze, check_program
from weakrel.lang import parse
from weakrel.widening import DIVERGENT, PLAIN_STANDARD, WideningStrategy

CONFIGS = {
    "standard": PLAIN_STANDARD,
    "standard+thresholds": WideningStrategy(),
    "standard+delay2": WideningStrategy(thresholds=None, delay=2),
    "syntactic-raw": WideningStrategy(kind="syntactic", thresholds=None),
    "syntactic-interleaved": DIVERGENT,
}


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--corpus", default=str(Path(__file__).parent.parent / "tests" / "corpus"))
    ap.add_argument("--out", default="-")
    ap.add_argument("--iter-cap", type=int, default=64)
    args = ap.parse_args()

    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["program", "domain", "config", "changes", "stabilized", "exit"])
    for path in sorted(Path(args.corpus).glob("*.w")):
        prog = parse(path.read_text())
        for dom in ("dbm", "oct"):
            try:
                check_program(prog, dom)
            except DomainError:
                continue
            for name, strat in CONFIGS.items():
                res = analyze(prog, dom, strat, iter_cap=args.iter_cap)
                w.writerow([path.stem, dom, name, sum(res.iterations.values()),
                            str(res.stabilized).lower(), "; ".join(res.invariants(res.cfg.exit))])
    if fh is not sys.stdout:
        fh.close()


if __name__ == "__main__":
    main()
