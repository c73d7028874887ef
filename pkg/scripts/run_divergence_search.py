"""Run the divergence search in both domains and write replayable reports.

    python scripts/run_divergence_search.py --out results/witness --seed 0
"""

import argparse
import json
from pathlib import Path

from weakrel.divergence import replay_report, search_divergence, write_report


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results/witness")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-iters", type=int, default=32)
    ap.add_argument("--budget", type=int, default=400)
    args = ap.parse_args()

    for mode, max_vars in (("dbm", 3), ("oct", 2)):
        rep = search_divergence(max_vars=max_vars, max_iters=args.max_iters, mode=mode,
                                seed=args.seed, budget=args.budget)
        out = write_report(rep, Path(args.out) / mode)
        summary = rep.summary()
        summary["replay_ok"] = replay_report(out)
        print(json.dumps(summary, sort_keys=True))


if __name__ == "__main__":
    main()
