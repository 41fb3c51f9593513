"""eps-T-count of the 2- and 3-qubit QFT under both qubit-order conventions.

    python3 scripts/qft_tcount.py --n 2 --eps 1e-2 1e-3 1e-4
    python3 scripts/qft_tcount.py --n 3 --eps 1e-3 --max-m 4 --threads 8
"""

import argparse
import time

from tsynth.search import BudgetExceeded, SearchConfig, SearchStats, min_resource
from tsynth.targets import CONVENTIONS, qft


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[2])
    ap.add_argument("--eps", type=float, nargs="+", default=[1e-3])
    ap.add_argument("--max-m", type=int, default=4)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    print(f"{'n':>2} {'convention':>10} {'eps':>8} {'m':>4} {'distance':>10} {'words':>12} {'seconds':>8}")
    for n in args.n:
        for conv in CONVENTIONS:
            for eps in args.eps:
                stats = SearchStats()
                t0 = time.perf_counter()
                try:
                    res = min_resource(qft(n, conv), SearchConfig(epsilon=eps, m_max=args.max_m,
                                                                  threads=args.threads), stats)
                    m, dist = str(res.m), f"{res.achieved_distance:.3g}"
                except BudgetExceeded:
                    m, dist = f">{args.max_m}", "-"
                print(f"{n:2d} {conv:>10} {eps:8.0e} {m:>4} {dist:>10} {stats.visited:12d} "
                      f"{time.perf_counter() - t0:8.1f}", flush=True)


if __name__ == "__main__":
    main()
